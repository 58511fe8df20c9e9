// perc: batch driver for the percolation laboratory. Subcommands launch
// measurements, write CSV/JSON results plus a manifest, and print a summary.
// Results are bit-identical for a given manifest at any worker count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "perc/arms.hpp"
#include "perc/clusters.hpp"
#include "perc/fit.hpp"
#include "perc/microcanonical.hpp"
#include "perc/observables.hpp"
#include "perc/oracle.hpp"
#include "perc/pivotal.hpp"
#include "perc/runner.hpp"

using nlohmann::json;
using namespace perc;

namespace {

constexpr const char* kVersion = "perc 0.1.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

LatticeKind parse_lattice(const std::string& s) {
    if (s == "square-bond") return LatticeKind::SquareBond;
    if (s == "tri-site") return LatticeKind::TriangularSite;
    throw CLI::ValidationError("--lattice must be square-bond or tri-site");
}

std::string lattice_name(LatticeKind k) {
    return k == LatticeKind::SquareBond ? "square-bond" : "tri-site";
}

std::vector<ArmColor> parse_colors(const std::string& s) {
    std::vector<ArmColor> out;
    for (char c : s) {
        if (c == 'O' || c == 'o')
            out.push_back(ArmColor::Occupied);
        else if (c == 'V' || c == 'v')
            out.push_back(ArmColor::Vacant);
        else
            throw CLI::ValidationError("--colors uses only O and V");
    }
    return out;
}

std::string colors_name(const std::vector<ArmColor>& colors) {
    std::string s;
    for (ArmColor c : colors) s += (c == ArmColor::Occupied ? 'O' : 'V');
    return s;
}

// one result row in the pinned CSV schema
struct Row {
    std::string observable;
    std::string lattice;
    int n = 0;
    double p = 0;
    double value = 0;
    double stderr_ = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    int incomplete = -1; // -1: column absent (non-sweep schema)
};

std::string csv_header(bool sweep) {
    std::string h = "observable,lattice,n,p,value,stderr,samples,seed";
    if (sweep) h += ",incomplete";
    return h;
}

std::string csv_line(const Row& r) {
    std::ostringstream os;
    os << r.observable << ',' << r.lattice << ',' << r.n << ',' << fmt17(r.p) << ','
       << fmt17(r.value) << ',' << fmt17(r.stderr_) << ',' << r.samples << ',' << r.seed;
    if (r.incomplete >= 0) os << ',' << r.incomplete;
    return os.str();
}

bool any_nan(const std::vector<Row>& rows) {
    for (const Row& r : rows)
        if (std::isnan(r.value) || std::isnan(r.stderr_)) return true;
    return false;
}

std::string iso_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

// Results sink: rows go to <out>.csv plus a manifest, or to stdout when no
// --out was given (pipe-friendly).
struct Output {
    std::string base; // empty: stdout only
    std::vector<std::string> argv;
    std::string started = iso_now();

    void write_rows(const std::vector<Row>& rows, bool sweep_schema, std::uint64_t seed) {
        std::ostringstream body;
        body << csv_header(sweep_schema) << '\n';
        for (const Row& r : rows) body << csv_line(r) << '\n';
        if (base.empty()) {
            std::cout << body.str();
            return;
        }
        std::string path = base + ".csv";
        std::ofstream f(path, std::ios::binary);
        f << body.str();
        f.close();
        write_manifest({path}, seed);
        std::cout << "wrote " << path << " (" << rows.size() << " rows)\n";
        for (const Row& r : rows)
            std::cout << "  " << r.observable << " n=" << r.n << " p=" << fmt17(r.p) << " -> "
                      << fmt17(r.value) << " +- " << fmt17(r.stderr_) << "\n";
    }

    void write_json(const json& j, const std::string& what, std::uint64_t seed) {
        if (base.empty()) {
            std::cout << j.dump(2) << '\n';
            return;
        }
        std::string path = base + ".json";
        std::ofstream f(path, std::ios::binary);
        f << j.dump(2) << '\n';
        f.close();
        write_manifest({path}, seed);
        std::cout << "wrote " << path << " (" << what << ")\n";
    }

    void write_manifest(const std::vector<std::string>& outputs, std::uint64_t seed) {
        json m;
        m["tool"] = "perc";
        m["version"] = kVersion;
        m["command"] = argv;
        m["master_seed"] = seed;
        m["workers"] = worker_count();
        m["started"] = started;
        m["finished"] = iso_now();
        m["outputs"] = outputs;
        std::ofstream f(base + ".manifest.json", std::ios::binary);
        f << m.dump(2) << '\n';
    }
};

json poly_to_json(const ExactPoly& poly) {
    json coeffs = json::array();
    for (const auto& frac : poly.coeff_fractions()) coeffs.push_back({frac[0], frac[1]});
    return coeffs;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<Row> run_sweep_cells(LatticeKind kind, const std::vector<int>& n_list,
                                 const std::vector<double>& p_list, const std::string& observable,
                                 std::int64_t samples, std::uint64_t seed, double time_cap_s) {
    // cells in fixed row-major order; per-cell master seeds are derived from
    // the cell index (cell << 32 | sample keeps streams disjoint)
    std::vector<Row> rows;
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t cell = 0;
    for (int n : n_list) {
        for (double p : p_list) {
            Row row;
            row.observable = observable;
            row.lattice = lattice_name(kind);
            row.n = n;
            row.p = p;
            row.samples = samples;
            row.seed = seed;
            row.incomplete = 0;
            double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (time_cap_s > 0 && elapsed > time_cap_s) {
                row.incomplete = 1;
                row.samples = 0;
                row.value = 0;
                row.stderr_ = 0;
            } else {
                std::uint64_t cell_seed = detail::mix64(seed + detail::kGolden * (cell << 32));
                LatticeSpec spec = LatticeSpec::free_box(kind, n);
                Estimate est;
                if (observable == "kappa") {
                    est = kappa_estimate(spec, p, samples, cell_seed);
                } else if (observable == "lemma3") {
                    est = lemma3_estimator(spec, p, samples, cell_seed);
                } else if (observable == "crossing") {
                    est = crossing_probability(kind, p, n, CrossingOrientation::LeftRight,
                                               CrossingMedium::OccupiedPrimal, samples,
                                               cell_seed);
                } else {
                    throw CLI::ValidationError("--observable must be kappa, lemma3 or crossing");
                }
                row.value = est.mean;
                row.stderr_ = est.stderr_;
            }
            rows.push_back(row);
            ++cell;
        }
    }
    return rows;
}

// fit input: CSV rows in the pinned schema, x column selectable
std::vector<FitPoint> read_fit_points(std::istream& in, const std::string& xcol) {
    std::vector<FitPoint> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!cells.empty() && cells[0] == "observable") continue; // header
        if (cells.size() < 8) continue;
        FitPoint pt;
        double n = std::stod(cells[2]);
        double p = std::stod(cells[3]);
        if (xcol == "n")
            pt.x = n;
        else if (xcol == "p")
            pt.x = p;
        else if (xcol == "half-minus-p")
            pt.x = 0.5 - p;
        else
            throw CLI::ValidationError("--x must be n, p or half-minus-p");
        pt.y = std::stod(cells[4]);
        pt.y_stderr = std::stod(cells[5]);
        pts.push_back(pt);
    }
    return pts;
}

json fit_to_json(const PowerLawFit& fit) {
    json j;
    j["exponent"] = fit.exponent;
    j["stderr_exponent"] = fit.stderr_exponent;
    j["amplitude"] = fit.amplitude;
    j["r_squared"] = fit.r_squared;
    j["window"] = {fit.window_lo, fit.window_hi};
    j["points_used"] = fit.points_used;
    return j;
}

} // namespace

static int run(int argc, char** argv) {
    CLI::App app{std::string(kVersion) + " - percolation laboratory"};
    app.require_subcommand(1);

    std::vector<std::string> raw_argv(argv, argv + argc);

    std::string lattice_s = "square-bond";
    std::string out_base;
    std::uint64_t seed = 1;
    std::int64_t samples = 10000;
    int n = 32;

    auto add_common = [&](CLI::App* cmd, bool with_n = true) {
        cmd->add_option("--lattice", lattice_s, "square-bond | tri-site");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--out", out_base, "output base path (omit: CSV/JSON to stdout)");
        if (with_n) cmd->add_option("--n", n, "box radius");
    };

    auto* c_kappa = app.add_subcommand("kappa", "clusters per vertex M_n/|B(n)|");
    double p_kappa = 0.5;
    c_kappa->add_option("--p", p_kappa);
    c_kappa->add_option("--samples", samples);
    add_common(c_kappa);

    auto* c_sweep = app.add_subcommand("sweep", "grid of (n, p) cells, deterministic merges");
    std::string n_list_s = "32", p_list_s = "0.5", sweep_obs = "kappa";
    double time_cap_s = 0;
    c_sweep->add_option("--n-list", n_list_s);
    c_sweep->add_option("--p-list", p_list_s);
    c_sweep->add_option("--observable", sweep_obs, "kappa | lemma3 | crossing");
    c_sweep->add_option("--samples", samples, "samples per cell");
    c_sweep->add_option("--time-cap-s", time_cap_s,
                        "wall-clock cap; cells past it are flagged incomplete");
    add_common(c_sweep, false);

    auto* c_arms = app.add_subcommand("arms", "k-arm annulus probabilities");
    std::string colors_s = "OV", arm_n_list_s = "8,16,32";
    int arm_m = 1, arm_k = 0;
    bool alternating = false;
    double p_arms = 0.5;
    c_arms->add_option("--colors", colors_s, "cyclic color word, e.g. OVOV");
    c_arms->add_option("--k", arm_k, "with --alternating: build the alternating k-word");
    c_arms->add_flag("--alternating", alternating);
    c_arms->add_option("--m", arm_m, "inner radius");
    c_arms->add_option("--n-list", arm_n_list_s, "outer radii (box radius = n)");
    c_arms->add_option("--p", p_arms);
    c_arms->add_option("--samples", samples);
    add_common(c_arms, false);

    auto* c_piv = app.add_subcommand("pivotal", "dual-separation sum -sum_b 1[D(b)]/|B(n)|");
    double p_piv = 0.3;
    c_piv->add_option("--p", p_piv);
    c_piv->add_option("--samples", samples);
    add_common(c_piv);

    auto* c_len = app.add_subcommand("length", "Kesten correlation length L(p)");
    std::string p_list_len = "0.35,0.40,0.45";
    double epsilon0 = 0.05;
    std::int64_t samples_per_step = 2000;
    int n_max = 1024;
    c_len->add_option("--p-list", p_list_len);
    c_len->add_option("--epsilon0", epsilon0);
    c_len->add_option("--samples-per-step", samples_per_step);
    c_len->add_option("--n-max", n_max);
    add_common(c_len, false);

    auto* c_xi = app.add_subcommand("xi", "subcritical decay length");
    std::string p_list_xi = "0.30,0.35,0.40";
    std::string radii_s = "4,8,12,16";
    c_xi->add_option("--p-list", p_list_xi);
    c_xi->add_option("--radii", radii_s);
    c_xi->add_option("--samples", samples);
    add_common(c_xi);

    auto* c_micro =
        app.add_subcommand("microcanonical", "insertion-sweep curve E[M | m occupied]");
    std::int64_t replicates = 1000;
    c_micro->add_option("--replicates", replicates);
    add_common(c_micro);

    auto* c_deriv = app.add_subcommand("derivatives", "binomial-transform kappa derivatives");
    std::string p_list_d = "0.40,0.44,0.48";
    int order = 3;
    c_deriv->add_option("--p-list", p_list_d);
    c_deriv->add_option("--order", order, "derivative order r in 0..4");
    c_deriv->add_option("--replicates", replicates);
    add_common(c_deriv);

    auto* c_enum = app.add_subcommand("enumerate", "exact polynomial via full enumeration");
    std::string enum_obs = "clusters";
    int derive = 0;
    bool torus = false;
    int torus_side = 3;
    c_enum->add_option("--observable", enum_obs, "clusters | crossing | matching");
    c_enum->add_option("--derive", derive, "also emit this derivative order");
    c_enum->add_flag("--torus", torus);
    c_enum->add_option("--L", torus_side, "torus side (with --torus or matching)");
    add_common(c_enum);

    auto* c_fit = app.add_subcommand("fit", "weighted log-log power-law fit of CSV rows");
    std::string fit_in = "-", xcol = "n";
    c_fit->add_option("--in", fit_in, "CSV path or - for stdin");
    c_fit->add_option("--x", xcol, "n | p | half-minus-p");
    c_fit->add_option("--out", out_base);

    auto* c_rep = app.add_subcommand("report", "scaling-law residuals");
    std::vector<double> nu_v, rho_v, alpha_v, beta_v, gamma_v;
    c_rep->add_option("--nu", nu_v, "value [stderr]")->expected(1, 2);
    c_rep->add_option("--rho", rho_v, "value [stderr]")->expected(1, 2);
    c_rep->add_option("--alpha", alpha_v, "value [stderr]")->expected(1, 2);
    c_rep->add_option("--beta", beta_v, "value [stderr]")->expected(1, 2);
    c_rep->add_option("--gamma", gamma_v, "value [stderr]")->expected(1, 2);
    c_rep->add_option("--out", out_base);

    auto* c_rerun = app.add_subcommand("rerun", "re-execute a saved manifest");
    std::string manifest_path;
    std::string rerun_out;
    c_rerun->add_option("manifest", manifest_path)->required();
    c_rerun->add_option("--out", rerun_out, "override output base");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e); // prints usage or help text
        return rc == 0 ? 0 : 2;
    }

    Output out;
    out.base = out_base;
    out.argv = raw_argv;

    LatticeKind kind = parse_lattice(lattice_s);

    if (app.got_subcommand(c_kappa)) {
        LatticeSpec spec = LatticeSpec::free_box(kind, n);
        Estimate est = kappa_estimate(spec, p_kappa, samples, seed);
        Row row{"kappa", lattice_name(kind), n, p_kappa, est.mean, est.stderr_,
                est.samples, seed};
        if (any_nan({row})) return 4;
        out.write_rows({row}, false, seed);
        return 0;
    }

    if (app.got_subcommand(c_sweep)) {
        auto rows = run_sweep_cells(kind, parse_int_list(n_list_s), parse_double_list(p_list_s),
                                    sweep_obs, samples, seed, time_cap_s);
        if (any_nan(rows)) return 4;
        out.write_rows(rows, true, seed);
        return 0;
    }

    if (app.got_subcommand(c_arms)) {
        std::vector<ArmColor> colors;
        if (alternating) {
            if (arm_k <= 0) throw CLI::ValidationError("--alternating needs --k");
            for (int i = 0; i < arm_k; ++i)
                colors.push_back(i % 2 == 0 ? ArmColor::Occupied : ArmColor::Vacant);
        } else {
            colors = parse_colors(colors_s);
        }
        std::vector<Row> rows;
        std::uint64_t cell = 0;
        for (int outer : parse_int_list(arm_n_list_s)) {
            LatticeSpec spec = LatticeSpec::free_box(kind, outer);
            std::uint64_t cell_seed = detail::mix64(seed + detail::kGolden * (cell << 32));
            Estimate est = arm_probability(spec, p_arms, ArmSpec{colors, arm_m, outer}, samples,
                                           cell_seed);
            rows.push_back(Row{"arm" + std::to_string(colors.size()) + "_" +
                                   colors_name(colors),
                               lattice_name(kind), outer, p_arms, est.mean, est.stderr_,
                               est.samples, seed});
            ++cell;
        }
        if (any_nan(rows)) return 4;
        out.write_rows(rows, false, seed);
        return 0;
    }

    if (app.got_subcommand(c_piv)) {
        LatticeSpec spec = LatticeSpec::free_box(kind, n);
        Estimate est = lemma3_estimator(spec, p_piv, samples, seed);
        Row row{"lemma3", lattice_name(kind), n, p_piv, est.mean, est.stderr_,
                est.samples, seed};
        if (any_nan({row})) return 4;
        out.write_rows({row}, false, seed);
        return 0;
    }

    if (app.got_subcommand(c_len)) {
        std::vector<Row> rows;
        for (double p : parse_double_list(p_list_len)) {
            CorrelationLengthResult res =
                correlation_length_L(kind, p, epsilon0, samples_per_step, n_max, seed);
            rows.push_back(Row{"L", lattice_name(kind), res.L, p,
                               res.resolved ? double(res.L) : -1.0, 0.0, samples_per_step,
                               seed});
        }
        if (any_nan(rows)) return 4;
        out.write_rows(rows, false, seed);
        return 0;
    }

    if (app.got_subcommand(c_xi)) {
        std::vector<Row> rows;
        std::vector<int> radii = parse_int_list(radii_s);
        std::uint64_t cell = 0;
        for (double p : parse_double_list(p_list_xi)) {
            LatticeSpec spec = LatticeSpec::free_box(kind, n);
            std::uint64_t cell_seed = detail::mix64(seed + detail::kGolden * (cell << 32));
            double xi = xi_decay_estimate(spec, p, radii, samples, cell_seed);
            rows.push_back(Row{"xi", lattice_name(kind), n, p, xi, 0.0, samples, seed});
            ++cell;
        }
        if (any_nan(rows)) return 4;
        out.write_rows(rows, false, seed);
        return 0;
    }

    if (app.got_subcommand(c_micro)) {
        LatticeSpec spec = LatticeSpec::free_box(kind, n);
        MicrocanonicalCurve curve = sweep(spec, replicates, seed);
        std::ostringstream body;
        body << "m,mean,variance,replicates\n";
        for (std::size_t m = 0; m < curve.mean.size(); ++m)
            body << m << ',' << fmt17(curve.mean[m]) << ',' << fmt17(curve.variance[m]) << ','
                 << curve.replicates << '\n';
        if (out.base.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream f(out.base + ".csv", std::ios::binary);
            f << body.str();
            f.close();
            out.write_manifest({out.base + ".csv"}, seed);
            std::cout << "wrote " << out.base << ".csv (" << curve.mean.size() << " rows)\n";
        }
        return 0;
    }

    if (app.got_subcommand(c_deriv)) {
        LatticeSpec spec = LatticeSpec::free_box(kind, n);
        DerivativeProfile prof =
            kappa_derivative_profile(spec, parse_double_list(p_list_d), order, replicates, seed);
        std::vector<Row> rows;
        for (std::size_t i = 0; i < prof.p_grid.size(); ++i)
            rows.push_back(Row{"kappa_d" + std::to_string(order), lattice_name(kind), n,
                               prof.p_grid[i], prof.value[i], prof.stderr_[i], prof.replicates,
                               seed});
        if (any_nan(rows)) return 4;
        out.write_rows(rows, false, seed);
        return 0;
    }

    if (app.got_subcommand(c_enum)) {
        json j;
        j["lattice"] = lattice_name(kind);
        if (enum_obs == "matching") {
            std::vector<int> sides = torus ? std::vector<int>{torus_side}
                                           : (kind == LatticeKind::TriangularSite
                                                  ? std::vector<int>{3, 4}
                                                  : std::vector<int>{3});
            MatchingPolyReport rep = matching_polynomial(kind, sides);
            j["observable"] = "matching";
            j["sizes"] = rep.sizes;
            j["stabilized"] = poly_to_json(rep.stabilized);
            json per = json::array();
            for (const ExactPoly& g : rep.per_size) per.push_back(poly_to_json(g));
            j["per_size"] = per;
            j["residual_sup"] = rep.residual_sup;
            out.write_json(j, "matching polynomial", seed);
            return 0;
        }
        LatticeSpec spec =
            torus ? LatticeSpec::torus(kind, torus_side) : LatticeSpec::free_box(kind, n);
        ExactPoly poly;
        if (enum_obs == "clusters") {
            UnionFind uf;
            poly = exact_expectation(
                spec, [&](const Configuration& cfg) { return cluster_count(cfg, uf); });
        } else if (enum_obs == "crossing") {
            poly = exact_event_probability(spec, [](const Configuration& cfg) {
                return has_crossing(cfg, CrossingOrientation::LeftRight,
                                    CrossingMedium::OccupiedPrimal);
            });
        } else {
            throw CLI::ValidationError("--observable must be clusters, crossing or matching");
        }
        j["observable"] = enum_obs;
        j["n"] = torus ? torus_side : n;
        j["torus"] = torus;
        j["element_count"] = spec.element_count();
        j["coefficients"] = poly_to_json(poly);
        if (derive > 0) {
            ExactPoly d = poly.derivative(derive);
            j["derive"] = derive;
            j["derivative_coefficients"] = poly_to_json(d);
            json vals = json::array();
            for (double p : {0.2, 0.5, 0.8}) vals.push_back({p, d.eval_double(p)});
            j["derivative_values"] = vals;
        }
        out.write_json(j, "exact polynomial", seed);
        return 0;
    }

    if (app.got_subcommand(c_fit)) {
        std::vector<FitPoint> pts;
        if (fit_in == "-") {
            pts = read_fit_points(std::cin, xcol);
        } else {
            std::ifstream f(fit_in);
            if (!f) throw std::runtime_error("cannot open " + fit_in);
            pts = read_fit_points(f, xcol);
        }
        PowerLawFit fit = fit_power_law(pts);
        if (std::isnan(fit.exponent)) return 4;
        out.write_json(fit_to_json(fit), "power-law fit", seed);
        return 0;
    }

    if (app.got_subcommand(c_rep)) {
        auto to_input = [](const std::vector<double>& v) {
            ExponentInput in;
            if (!v.empty()) {
                in.value = v[0];
                if (v.size() > 1) in.stderr_ = v[1];
            }
            return in;
        };
        ScalingLawReport rep =
            scaling_law_report(to_input(alpha_v), to_input(beta_v), to_input(gamma_v),
                               to_input(nu_v), to_input(rho_v));
        json laws = json::array();
        for (const ScalingLaw& law : rep.laws) {
            json l;
            l["name"] = law.name;
            l["formula"] = law.formula;
            l["evaluated"] = law.evaluated;
            if (law.evaluated) {
                l["residual"] = law.residual;
                l["stderr"] = law.stderr_;
                l["violated"] = law.violated;
            } else {
                l["missing"] = law.missing;
            }
            laws.push_back(l);
        }
        json j;
        j["laws"] = laws;
        out.write_json(j, "scaling-law report", seed);
        return 0;
    }

    if (app.got_subcommand(c_rerun)) {
        std::ifstream f(manifest_path);
        if (!f) throw std::runtime_error("cannot open " + manifest_path);
        json m = json::parse(f);
        std::vector<std::string> cmd = m["command"].get<std::vector<std::string>>();
        if (cmd.size() < 2 || cmd[1] == "rerun")
            throw std::runtime_error("manifest does not hold a runnable command");
        std::vector<std::string> newcmd;
        for (std::size_t i = 0; i < cmd.size(); ++i) {
            if (cmd[i] == "--out" && i + 1 < cmd.size()) {
                ++i; // replace the stored output location
                continue;
            }
            newcmd.push_back(cmd[i]);
        }
        if (!rerun_out.empty()) {
            newcmd.push_back("--out");
            newcmd.push_back(rerun_out);
        }
        std::vector<char*> cargv;
        cargv.reserve(newcmd.size());
        for (std::string& s : newcmd) cargv.push_back(s.data());
        return run(int(cargv.size()), cargv.data());
    }

    return 2;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const GuardError& e) {
        std::cerr << "guard violation: " << e.what() << "\n";
        return 3;
    } catch (const CLI::Error&) {
        return 2; // CLI11 already reported
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
