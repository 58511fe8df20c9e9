#include "perc/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "perc/runner.hpp"
#include "perc/tables.hpp"

namespace perc {

namespace {

double require_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");
    return p;
}

} // namespace

// --- kappa -----------------------------------------------------------------

Estimate kappa_estimate(const LatticeSpec& spec, double p, std::int64_t samples,
                        std::uint64_t master_seed) {
    require_p(p);
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const SpecTables tables(spec);
    const std::int64_t V = spec.vertex_count();
    const std::int64_t E = spec.element_count();
    const bool site = spec.kind() == LatticeKind::TriangularSite;

    Accumulator acc = run_blocks<Accumulator>(
        samples, kDefaultBlock,
        [&](std::int64_t first, std::int64_t last, Accumulator& a) {
            UnionFind uf;
            std::vector<std::uint8_t> occ(site ? std::size_t(V) : 0);
            for (std::int64_t i = first; i < last; ++i) {
                BernoulliField field(p, SeedSpec{master_seed, std::uint64_t(i)});
                uf.reset(std::size_t(V));
                std::int64_t clusters = 0;
                if (!site) {
                    std::int64_t merges = 0;
                    for (std::int64_t e = 0; e < E; ++e)
                        if (field.occupied(ElementId(e)) &&
                            uf.unite(tables.bond_a[std::size_t(e)], tables.bond_b[std::size_t(e)]))
                            ++merges;
                    clusters = V - merges;
                } else {
                    std::int64_t occupied = 0, merges = 0;
                    for (std::int64_t s = 0; s < V; ++s) {
                        occ[std::size_t(s)] = field.occupied(ElementId(s));
                        occupied += occ[std::size_t(s)];
                    }
                    for (std::int64_t s = 0; s < V; ++s) {
                        if (!occ[std::size_t(s)]) continue;
                        for (int k = 0; k < 3; ++k) {
                            std::uint32_t w = tables.fwd[std::size_t(s) * 3 + std::size_t(k)];
                            if (w == SpecTables::kNone || !occ[w]) continue;
                            if (uf.unite(std::uint32_t(s), w)) ++merges;
                        }
                    }
                    clusters = occupied - merges;
                }
                a.add(double(clusters) / double(V));
            }
        });
    return finalize(acc, SeedSpec{master_seed, 0});
}

// --- origin-cluster histogram ------------------------------------------------

namespace {

struct HistAcc {
    std::vector<std::int64_t> finite;
    std::int64_t boundary = 0;
    std::int64_t vacant = 0;
    std::int64_t samples = 0;
    void merge(const HistAcc& o) {
        if (finite.size() < o.finite.size()) finite.resize(o.finite.size(), 0);
        for (std::size_t i = 0; i < o.finite.size(); ++i) finite[i] += o.finite[i];
        boundary += o.boundary;
        vacant += o.vacant;
        samples += o.samples;
    }
};

// Grows the origin cluster lazily over a Bernoulli field; visits only the
// cluster. Epoch marks avoid clearing the visited array per sample.
struct LazyClusterWalker {
    explicit LazyClusterWalker(const LatticeSpec& spec)
        : spec(spec), mark(std::size_t(spec.vertex_count()), 0) {}

    // returns (size, max_ring_reached, touches_box_boundary); size 0 for a
    // vacant origin site. Stops early when stop_ring >= 0 and the cluster
    // reaches that ring (size then undercounts; callers that only need reach
    // flags use this).
    void walk(const BernoulliField& field, int stop_ring = -1) {
        ++epoch;
        size = 0;
        max_ring = -1;
        const bool site = spec.kind() == LatticeKind::TriangularSite;
        Vertex origin{0, 0};
        if (site && !field.occupied(ElementId(spec.vertex_index(origin)))) return;
        stack.clear();
        stack.push_back(origin);
        mark[spec.vertex_index(origin)] = epoch;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            ++size;
            int r = std::max(std::abs(v.x), std::abs(v.y));
            if (r > max_ring) {
                max_ring = r;
                if (stop_ring >= 0 && max_ring >= stop_ring) return;
            }
            NeighborList nb = spec.neighbors(v);
            for (int k = 0; k < nb.count; ++k) {
                Vertex w = nb.v[k];
                VertexId wi = spec.vertex_index(w);
                if (mark[wi] == epoch) continue;
                if (site) {
                    if (!field.occupied(ElementId(wi))) continue;
                } else {
                    bool horizontal = (w.y == v.y);
                    Vertex lo = horizontal ? (w.x < v.x ? w : v) : (w.y < v.y ? w : v);
                    if (!field.occupied(spec.bond_id(lo, horizontal))) continue;
                }
                mark[wi] = epoch;
                stack.push_back(w);
            }
        }
    }

    LatticeSpec spec;
    std::vector<std::uint32_t> mark;
    std::uint32_t epoch = 0;
    std::vector<Vertex> stack;
    std::int64_t size = 0;
    int max_ring = -1;
};

} // namespace

ClusterSizeHistogram origin_cluster_histogram(const LatticeSpec& spec, double p,
                                              std::int64_t samples, std::uint64_t master_seed) {
    require_p(p);
    if (spec.is_torus()) throw std::invalid_argument("histogram requires a free box");
    const int n = spec.box_radius();
    HistAcc acc = run_blocks<HistAcc>(
        samples, kDefaultBlock,
        [&](std::int64_t first, std::int64_t last, HistAcc& a) {
            LazyClusterWalker walker(spec);
            a.finite.assign(std::size_t(spec.vertex_count()) + 1, 0);
            for (std::int64_t i = first; i < last; ++i) {
                BernoulliField field(p, SeedSpec{master_seed, std::uint64_t(i)});
                walker.walk(field);
                ++a.samples;
                if (walker.size == 0) {
                    ++a.vacant;
                } else if (walker.max_ring >= n) {
                    ++a.boundary;
                } else {
                    a.finite[std::size_t(walker.size)] += 1;
                }
            }
        });
    ClusterSizeHistogram hist;
    hist.kind = spec.kind();
    hist.samples = acc.samples;
    hist.finite_counts = std::move(acc.finite);
    hist.boundary_count = acc.boundary;
    hist.vacant_count = acc.vacant;
    return hist;
}

namespace {

// Shared moment machinery: F, M, chi are all plug-in means of a per-sample
// function of the origin-cluster size class.
template <typename Fn>
Estimate histogram_functional(const ClusterSizeHistogram& hist, Fn value) {
    Accumulator acc;
    auto feed = [&](double v, std::int64_t count) {
        acc.count += count;
        acc.sum += v * double(count);
        acc.sumsq += v * v * double(count);
    };
    for (std::size_t s = 1; s < hist.finite_counts.size(); ++s)
        if (hist.finite_counts[s] != 0) feed(value(std::int64_t(s), false), hist.finite_counts[s]);
    if (hist.boundary_count != 0) feed(value(0, true), hist.boundary_count);
    if (hist.vacant_count != 0) feed(value(0, false), hist.vacant_count);
    return finalize(acc, SeedSpec{});
}

} // namespace

Estimate free_energy_estimate(const ClusterSizeHistogram& hist, double h) {
    if (h < 0) throw std::invalid_argument("h must be >= 0");
    return histogram_functional(hist, [h](std::int64_t size, bool infinite) {
        if (infinite) return h; // |C| = infinity proxy: only the h(1-theta_0) term
        if (size == 0) return 0.0;
        return h + std::exp(-h * double(size)) / double(size);
    });
}

Estimate magnetization_estimate(const ClusterSizeHistogram& hist, double h) {
    if (h < 0) throw std::invalid_argument("h must be >= 0");
    return histogram_functional(hist, [h](std::int64_t size, bool infinite) {
        if (infinite) return 1.0;
        return 1.0 - std::exp(-h * double(size)); // size 0 contributes 0
    });
}

Estimate chi_f_estimate(const ClusterSizeHistogram& hist) {
    return histogram_functional(hist, [](std::int64_t size, bool infinite) {
        return infinite ? 0.0 : double(size);
    });
}

double free_energy(const ClusterSizeHistogram& hist, double h) {
    return free_energy_estimate(hist, h).mean;
}
double magnetization(const ClusterSizeHistogram& hist, double h) {
    return magnetization_estimate(hist, h).mean;
}
double chi_f(const ClusterSizeHistogram& hist) { return chi_f_estimate(hist).mean; }

// --- crossings ----------------------------------------------------------------

namespace {

// A crossing indicator as a union-find program: test-gated edges plus two
// virtual terminals.
struct CrossingProblem {
    struct Edge {
        std::uint32_t a, b;
        ElementId element;
    };
    std::int64_t nodes = 0; // excluding the two terminals
    std::vector<Edge> edges;
    // attachments to SRC (nodes+0) / DST (nodes+1); element == kNoElement
    // attaches unconditionally, otherwise gated by the same medium test
    std::vector<std::pair<std::uint32_t, ElementId>> src, dst;
    bool test_vacant = false; // medium test: occupied (false) or vacant (true)

    bool evaluate(UnionFind& uf, const BernoulliField& field) const {
        uf.reset(std::size_t(nodes) + 2);
        const std::uint32_t SRC = std::uint32_t(nodes), DST = SRC + 1;
        auto pass = [&](ElementId e) {
            bool occ = field.occupied(e);
            return test_vacant ? !occ : occ;
        };
        for (const Edge& e : edges)
            if (pass(e.element)) uf.unite(e.a, e.b);
        for (auto [node, elem] : src)
            if (elem == kNoElement || pass(elem)) uf.unite(SRC, node);
        for (auto [node, elem] : dst)
            if (elem == kNoElement || pass(elem)) uf.unite(DST, node);
        return uf.same(SRC, DST);
    }

    bool evaluate_config(UnionFind& uf, const Configuration& cfg) const {
        uf.reset(std::size_t(nodes) + 2);
        const std::uint32_t SRC = std::uint32_t(nodes), DST = SRC + 1;
        auto pass = [&](ElementId e) { return test_vacant ? !cfg.get(e) : cfg.get(e); };
        for (const Edge& e : edges)
            if (pass(e.element)) uf.unite(e.a, e.b);
        for (auto [node, elem] : src)
            if (elem == kNoElement || pass(elem)) uf.unite(SRC, node);
        for (auto [node, elem] : dst)
            if (elem == kNoElement || pass(elem)) uf.unite(DST, node);
        return uf.same(SRC, DST);
    }
};

// Occupied bond crossing of B(n) (square-bond). The crossing may not use
// edges joining two boundary vertices (paper convention).
CrossingProblem build_occupied_crossing(const LatticeSpec& spec, CrossingOrientation orient) {
    if (spec.kind() != LatticeKind::SquareBond)
        throw std::logic_error("bond crossing on a site lattice");
    const int n = spec.box_radius();
    CrossingProblem prob;
    prob.nodes = spec.vertex_count();
    prob.test_vacant = false;
    auto on_boundary = [n](Vertex v) {
        return std::max(std::abs(v.x), std::abs(v.y)) == n;
    };
    const bool lr = orient == CrossingOrientation::LeftRight;
    const std::int64_t E = spec.element_count();
    for (std::int64_t e = 0; e < E; ++e) {
        BondGeom g = spec.bond_geometry(ElementId(e));
        if (on_boundary(g.v1) && on_boundary(g.v2)) continue;
        prob.edges.push_back({spec.vertex_index(g.v1), spec.vertex_index(g.v2), ElementId(e)});
    }
    for (int t = -n; t <= n; ++t) {
        Vertex s = lr ? Vertex{-n, t} : Vertex{t, n};
        Vertex d = lr ? Vertex{n, t} : Vertex{t, -n};
        prob.src.push_back({spec.vertex_index(s), kNoElement});
        prob.dst.push_back({spec.vertex_index(d), kNoElement});
    }
    return prob;
}

} // namespace

// Site crossings need per-site gating, which the generic edge program above
// cannot express; dedicated evaluator instead.
namespace {

struct SiteCrossing {
    LatticeSpec spec;
    CrossingOrientation orient;
    bool test_vacant;

    bool evaluate(UnionFind& uf, std::vector<std::uint8_t>& state,
                  const BernoulliField& field) const {
        const std::int64_t V = spec.vertex_count();
        state.resize(std::size_t(V));
        for (std::int64_t s = 0; s < V; ++s) {
            bool occ = field.occupied(ElementId(s));
            state[std::size_t(s)] = test_vacant ? !occ : occ;
        }
        return evaluate_states(uf, state);
    }

    bool evaluate_states(UnionFind& uf, const std::vector<std::uint8_t>& state) const {
        const std::int64_t V = spec.vertex_count();
        const int n = spec.box_radius();
        uf.reset(std::size_t(V) + 2);
        const std::uint32_t SRC = std::uint32_t(V), DST = SRC + 1;
        auto on_boundary = [n](Vertex v) {
            return std::max(std::abs(v.x), std::abs(v.y)) == n;
        };
        static constexpr std::array<Vertex, 3> steps = {Vertex{1, 0}, Vertex{0, 1}, Vertex{1, 1}};
        for (std::int64_t s = 0; s < V; ++s) {
            if (!state[std::size_t(s)]) continue;
            Vertex v = spec.vertex_at(VertexId(s));
            for (Vertex d : steps) {
                Vertex w{v.x + d.x, v.y + d.y};
                if (!spec.in_box(w)) continue;
                if (!state[spec.vertex_index(w)]) continue;
                if (on_boundary(v) && on_boundary(w)) continue;
                uf.unite(std::uint32_t(s), spec.vertex_index(w));
            }
        }
        const bool lr = orient == CrossingOrientation::LeftRight;
        for (int t = -n; t <= n; ++t) {
            Vertex s = lr ? Vertex{-n, t} : Vertex{t, n};
            Vertex d = lr ? Vertex{n, t} : Vertex{t, -n};
            if (state[spec.vertex_index(s)]) uf.unite(SRC, spec.vertex_index(s));
            if (state[spec.vertex_index(d)]) uf.unite(DST, spec.vertex_index(d));
        }
        return uf.same(SRC, DST);
    }
};

// Vacant dual crossing over the face grid of B(n) (square-bond): dual
// vertices (i,j), i,j in [-n, n-1]; the mirrored no-boundary-edge convention
// applies on the face grid.
CrossingProblem build_vacant_dual_crossing(const LatticeSpec& spec, CrossingOrientation orient) {
    const int n = spec.box_radius();
    const int f = 2 * n; // face grid side
    CrossingProblem prob;
    prob.nodes = std::int64_t(f) * f;
    prob.test_vacant = true;
    auto face_index = [&](int i, int j) { return std::uint32_t((j + n) * f + (i + n)); };
    auto face_boundary = [&](int i, int j) {
        return i == -n || i == n - 1 || j == -n || j == n - 1;
    };
    for (int j = -n; j < n; ++j) {
        for (int i = -n; i < n; ++i) {
            // right step crosses the vertical bond (i+1, j)-(i+1, j+1)
            if (i + 1 < n && !(face_boundary(i, j) && face_boundary(i + 1, j)))
                prob.edges.push_back(
                    {face_index(i, j), face_index(i + 1, j), spec.bond_id({i + 1, j}, false)});
            // up step crosses the horizontal bond (i, j+1)-(i+1, j+1)
            if (j + 1 < n && !(face_boundary(i, j) && face_boundary(i, j + 1)))
                prob.edges.push_back(
                    {face_index(i, j), face_index(i, j + 1), spec.bond_id({i, j + 1}, true)});
        }
    }
    const bool lr = orient == CrossingOrientation::LeftRight;
    for (int t = -n; t < n; ++t) {
        if (lr) {
            prob.src.push_back({face_index(-n, t), kNoElement});
            prob.dst.push_back({face_index(n - 1, t), kNoElement});
        } else {
            prob.src.push_back({face_index(t, n - 1), kNoElement});
            prob.dst.push_back({face_index(t, -n), kNoElement});
        }
    }
    return prob;
}

} // namespace

bool has_crossing(const Configuration& cfg, CrossingOrientation orientation,
                  CrossingMedium medium) {
    const LatticeSpec& spec = cfg.spec();
    if (spec.is_torus()) throw std::invalid_argument("crossings require a free box");
    UnionFind uf;
    if (spec.kind() == LatticeKind::TriangularSite) {
        SiteCrossing sc{spec, orientation, medium == CrossingMedium::VacantDual};
        std::vector<std::uint8_t> state(std::size_t(spec.vertex_count()));
        for (std::int64_t s = 0; s < spec.vertex_count(); ++s) {
            bool occ = cfg.get(ElementId(s));
            state[std::size_t(s)] = sc.test_vacant ? !occ : occ;
        }
        return sc.evaluate_states(uf, state);
    }
    if (medium == CrossingMedium::OccupiedPrimal) {
        CrossingProblem prob = build_occupied_crossing(spec, orientation);
        return prob.evaluate_config(uf, cfg);
    }
    CrossingProblem prob = build_vacant_dual_crossing(spec, orientation);
    return prob.evaluate_config(uf, cfg);
}

Estimate crossing_probability(LatticeKind kind, double p, int n,
                              CrossingOrientation orientation, CrossingMedium medium,
                              std::int64_t samples, std::uint64_t master_seed) {
    require_p(p);
    LatticeSpec spec = LatticeSpec::free_box(kind, n);
    Accumulator acc;
    if (kind == LatticeKind::TriangularSite) {
        SiteCrossing sc{spec, orientation, medium == CrossingMedium::VacantDual};
        acc = run_blocks<Accumulator>(
            samples, kDefaultBlock, [&](std::int64_t first, std::int64_t last, Accumulator& a) {
                UnionFind uf;
                std::vector<std::uint8_t> state;
                for (std::int64_t i = first; i < last; ++i) {
                    BernoulliField field(p, SeedSpec{master_seed, std::uint64_t(i)});
                    a.add(sc.evaluate(uf, state, field) ? 1.0 : 0.0);
                }
            });
    } else {
        CrossingProblem prob = medium == CrossingMedium::OccupiedPrimal
                                   ? build_occupied_crossing(spec, orientation)
                                   : build_vacant_dual_crossing(spec, orientation);
        acc = run_blocks<Accumulator>(
            samples, kDefaultBlock, [&](std::int64_t first, std::int64_t last, Accumulator& a) {
                UnionFind uf;
                for (std::int64_t i = first; i < last; ++i) {
                    BernoulliField field(p, SeedSpec{master_seed, std::uint64_t(i)});
                    a.add(prob.evaluate(uf, field) ? 1.0 : 0.0);
                }
            });
    }
    return finalize(acc, SeedSpec{master_seed, 0});
}

// --- radial reach --------------------------------------------------------------

RadialReachProfile radial_reach_profile(const LatticeSpec& spec, double p,
                                        const std::vector<int>& radii, std::int64_t samples,
                                        std::uint64_t master_seed) {
    require_p(p);
    if (spec.is_torus()) throw std::invalid_argument("radial profile requires a free box");
    if (radii.empty()) throw std::invalid_argument("need at least one radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 1 || radii[i] > spec.box_radius())
            throw std::invalid_argument("radius outside box");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw std::invalid_argument("radii must be increasing");
    }

    struct ReachAcc {
        std::vector<std::int64_t> reach, reach_fin;
        std::int64_t samples = 0;
        void merge(const ReachAcc& o) {
            if (reach.size() < o.reach.size()) reach.resize(o.reach.size(), 0);
            if (reach_fin.size() < o.reach_fin.size()) reach_fin.resize(o.reach_fin.size(), 0);
            for (std::size_t i = 0; i < o.reach.size(); ++i) reach[i] += o.reach[i];
            for (std::size_t i = 0; i < o.reach_fin.size(); ++i) reach_fin[i] += o.reach_fin[i];
            samples += o.samples;
        }
    };

    const int box_n = spec.box_radius();
    ReachAcc acc = run_blocks<ReachAcc>(
        samples, kDefaultBlock, [&](std::int64_t first, std::int64_t last, ReachAcc& a) {
            a.reach.assign(radii.size(), 0);
            a.reach_fin.assign(radii.size(), 0);
            LazyClusterWalker walker(spec);
            for (std::int64_t i = first; i < last; ++i) {
                BernoulliField field(p, SeedSpec{master_seed, std::uint64_t(i)});
                walker.walk(field);
                ++a.samples;
                const int reached = walker.max_ring;
                const bool touched = reached >= box_n;
                for (std::size_t r = 0; r < radii.size(); ++r) {
                    if (reached >= radii[r]) {
                        a.reach[r] += 1;
                        if (!touched) a.reach_fin[r] += 1;
                    }
                }
            }
        });

    RadialReachProfile prof;
    prof.radii = radii;
    prof.samples = acc.samples;
    for (std::size_t r = 0; r < radii.size(); ++r) {
        auto indicator_acc = [&](std::int64_t hits) {
            Accumulator x;
            x.count = acc.samples;
            x.sum = double(hits);
            x.sumsq = double(hits); // 0/1 values
            x.min = hits == 0 ? 0.0 : (hits == acc.samples ? 1.0 : 0.0);
            x.max = hits == 0 ? 0.0 : 1.0;
            return x;
        };
        prof.reach.push_back(finalize(indicator_acc(acc.reach[r]), SeedSpec{master_seed, 0}));
        prof.reach_finite.push_back(
            finalize(indicator_acc(acc.reach_fin[r]), SeedSpec{master_seed, 0}));
    }
    return prof;
}

Estimate pi_n(const LatticeSpec& spec, int n_inner, double p, std::int64_t samples,
              std::uint64_t master_seed) {
    if (n_inner > spec.box_radius() / 2)
        throw std::invalid_argument("pi_n requires n_inner <= box radius / 2");
    RadialReachProfile prof = radial_reach_profile(spec, p, {n_inner}, samples, master_seed);
    return prof.reach[0];
}

double xi_decay_estimate(const LatticeSpec& spec, double p, const std::vector<int>& radii,
                         std::int64_t samples, std::uint64_t master_seed) {
    if (!(p < 0.5)) throw std::invalid_argument("xi estimate implements the subcritical branch");
    if (radii.size() < 2) throw std::invalid_argument("need at least two radii");
    if (radii.back() > spec.box_radius() / 2)
        throw std::invalid_argument("largest radius must be <= box radius / 2 (buffer)");
    RadialReachProfile prof = radial_reach_profile(spec, p, radii, samples, master_seed);
    // least squares of -log P over r; slope = 1/xi
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = double(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (prof.reach_finite[i].mean <= 0.0)
            throw std::runtime_error("insufficient samples: zero reach probability at r=" +
                                     std::to_string(radii[i]));
        double x = double(radii[i]);
        double y = -std::log(prof.reach_finite[i].mean);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    if (!(slope > 0)) throw std::runtime_error("non-positive decay slope");
    return 1.0 / slope;
}

// --- Kesten correlation length ----------------------------------------------

std::vector<int> correlation_length_schedule(int n_max) {
    std::vector<int> out;
    for (int n = 1; n <= 16 && n <= n_max; ++n) out.push_back(n);
    int n = 16;
    while (true) {
        n = int(std::ceil(n * 1.25));
        if (n > n_max) break;
        out.push_back(n);
    }
    return out;
}

CorrelationLengthResult correlation_length_L(LatticeKind kind, double p, double epsilon0,
                                             std::int64_t samples_per_step, int n_max,
                                             std::uint64_t master_seed) {
    if (!(p < 0.5)) throw std::invalid_argument("L(p) implements the subcritical branch p < 1/2");
    if (!(epsilon0 > 0.0 && epsilon0 < 0.5))
        throw std::invalid_argument("epsilon0 must be in (0, 1/2)");
    CorrelationLengthResult res;
    const double target = 1.0 - epsilon0;
    for (int n : correlation_length_schedule(n_max)) {
        // step-local seeds: stream = n * 2^32 + i so steps never share draws
        std::uint64_t base = std::uint64_t(n) << 32;
        LatticeSpec spec = LatticeSpec::free_box(kind, n);
        std::int64_t hits = 0;
        if (kind == LatticeKind::TriangularSite) {
            SiteCrossing sc{spec, CrossingOrientation::TopBottom, true};
            struct CountAcc {
                std::int64_t hits = 0;
                void merge(const CountAcc& o) { hits += o.hits; }
            };
            CountAcc acc = run_blocks<CountAcc>(
                samples_per_step, kDefaultBlock,
                [&](std::int64_t first, std::int64_t last, CountAcc& a) {
                    UnionFind uf;
                    std::vector<std::uint8_t> state;
                    for (std::int64_t i = first; i < last; ++i) {
                        BernoulliField field(p, SeedSpec{master_seed, base + std::uint64_t(i)});
                        if (sc.evaluate(uf, state, field)) ++a.hits;
                    }
                });
            hits = acc.hits;
        } else {
            CrossingProblem prob =
                build_vacant_dual_crossing(spec, CrossingOrientation::TopBottom);
            struct CountAcc {
                std::int64_t hits = 0;
                void merge(const CountAcc& o) { hits += o.hits; }
            };
            CountAcc acc = run_blocks<CountAcc>(
                samples_per_step, kDefaultBlock,
                [&](std::int64_t first, std::int64_t last, CountAcc& a) {
                    UnionFind uf;
                    for (std::int64_t i = first; i < last; ++i) {
                        BernoulliField field(p, SeedSpec{master_seed, base + std::uint64_t(i)});
                        if (prob.evaluate(uf, field)) ++a.hits;
                    }
                });
            hits = acc.hits;
        }
        res.trace.push_back({n, double(hits) / double(samples_per_step)});
        if (wilson_interval(hits, samples_per_step).lower >= target) {
            res.L = n;
            res.resolved = true;
            return res;
        }
    }
    res.resolved = false;
    res.L = n_max;
    return res;
}

} // namespace perc
