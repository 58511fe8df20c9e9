#include "perc/microcanonical.hpp"

#include <cmath>
#include <stdexcept>

#include "perc/clusters.hpp"
#include "perc/config.hpp"
#include "perc/runner.hpp"
#include "perc/tables.hpp"

namespace perc {

namespace {

// One insertion sweep: cluster count after each of the E insertions, plus
// the empty-lattice value at m=0.
void run_sweep(const LatticeSpec& spec, const SpecTables& tables, SeedSpec seed, UnionFind& uf,
               std::vector<std::uint8_t>& occupied, std::vector<double>& curve) {
    const std::int64_t V = spec.vertex_count();
    const std::int64_t E = spec.element_count();
    const bool site = spec.kind() == LatticeKind::TriangularSite;
    std::vector<ElementId> order = occupancy_sequence(spec, seed);
    uf.reset(std::size_t(V));
    curve.resize(std::size_t(E) + 1);
    std::int64_t clusters = site ? 0 : V;
    curve[0] = double(clusters);
    if (site) {
        std::fill(occupied.begin(), occupied.end(), 0);
        for (std::int64_t m = 0; m < E; ++m) {
            std::uint32_t s = order[std::size_t(m)];
            occupied[s] = 1;
            ++clusters;
            Vertex v = spec.vertex_at(s);
            NeighborList nb = spec.neighbors(v);
            for (int k = 0; k < nb.count; ++k) {
                std::uint32_t w = spec.vertex_index(nb.v[k]);
                if (occupied[w] && uf.unite(s, w)) --clusters;
            }
            curve[std::size_t(m) + 1] = double(clusters);
        }
    } else {
        for (std::int64_t m = 0; m < E; ++m) {
            ElementId e = order[std::size_t(m)];
            if (uf.unite(tables.bond_a[e], tables.bond_b[e])) --clusters;
            curve[std::size_t(m) + 1] = double(clusters);
        }
    }
}

} // namespace

MicrocanonicalCurve sweep(const LatticeSpec& spec, std::int64_t replicates,
                          std::uint64_t master_seed) {
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    const SpecTables tables(spec);
    const std::int64_t E = spec.element_count();
    const bool site = spec.kind() == LatticeKind::TriangularSite;

    struct CurveAcc {
        std::vector<double> sum, sumsq;
        std::int64_t count = 0;
        void merge(const CurveAcc& o) {
            if (sum.size() < o.sum.size()) {
                sum.resize(o.sum.size(), 0);
                sumsq.resize(o.sumsq.size(), 0);
            }
            for (std::size_t i = 0; i < o.sum.size(); ++i) {
                sum[i] += o.sum[i];
                sumsq[i] += o.sumsq[i];
            }
            count += o.count;
        }
    };

    CurveAcc acc = run_blocks<CurveAcc>(
        replicates, 1024, [&](std::int64_t first, std::int64_t last, CurveAcc& a) {
            a.sum.assign(std::size_t(E) + 1, 0.0);
            a.sumsq.assign(std::size_t(E) + 1, 0.0);
            UnionFind uf;
            std::vector<std::uint8_t> occupied(site ? std::size_t(spec.vertex_count()) : 0);
            std::vector<double> curve;
            for (std::int64_t r = first; r < last; ++r) {
                run_sweep(spec, tables, SeedSpec{master_seed, std::uint64_t(r)}, uf, occupied,
                          curve);
                ++a.count;
                for (std::size_t m = 0; m < curve.size(); ++m) {
                    a.sum[m] += curve[m];
                    a.sumsq[m] += curve[m] * curve[m];
                }
            }
        });

    MicrocanonicalCurve out;
    out.spec = spec;
    out.replicates = acc.count;
    out.mean.resize(std::size_t(E) + 1);
    out.variance.assign(std::size_t(E) + 1, 0.0);
    for (std::size_t m = 0; m <= std::size_t(E); ++m) {
        out.mean[m] = acc.sum[m] / double(acc.count);
        if (acc.count > 1) {
            double var = (acc.sumsq[m] - acc.sum[m] * acc.sum[m] / double(acc.count)) /
                         double(acc.count - 1);
            out.variance[m] = var < 0 ? 0 : var;
        }
    }
    return out;
}

BinomialWeights binomial_weights(std::int64_t E, double p, int order) {
    if (order < 0 || order > 4) throw std::invalid_argument("derivative order must be in 0..4");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");
    BinomialWeights out;
    if (p == 0.0 || p == 1.0) {
        if (order > 0)
            throw std::invalid_argument("weight derivatives need p strictly inside (0,1)");
        out.m_lo = out.m_hi = (p == 0.0) ? 0 : E;
        out.w = {1.0};
        return out;
    }
    const double q = 1.0 - p;
    const double sigma = std::sqrt(double(E) * p * q);
    const double half_width = 8.0 * sigma + 4.0 * double(order) * std::sqrt(double(E));
    std::int64_t lo = std::int64_t(std::floor(double(E) * p - half_width));
    std::int64_t hi = std::int64_t(std::ceil(double(E) * p + half_width));
    lo = std::max<std::int64_t>(0, lo);
    hi = std::min<std::int64_t>(E, hi);
    out.m_lo = lo;
    out.m_hi = hi;
    out.w.resize(std::size_t(hi - lo + 1));
    const double lgE = std::lgamma(double(E) + 1.0);
    const double lp = std::log(p), lq = std::log(q);
    // raw weights, then renormalize: the lgamma wobble is a common factor
    // and sum_m w_m = 1 exactly
    double total = 0;
    for (std::int64_t m = lo; m <= hi; ++m) {
        double logw = lgE - std::lgamma(double(m) + 1.0) - std::lgamma(double(E - m) + 1.0) +
                      double(m) * lp + double(E - m) * lq;
        out.w[std::size_t(m - lo)] = std::exp(logw);
        total += out.w[std::size_t(m - lo)];
    }
    const double inv_total = 1.0 / total;
    for (std::int64_t m = lo; m <= hi; ++m) {
        double w = out.w[std::size_t(m - lo)] * inv_total;
        double value = w;
        if (order > 0) {
            // successive derivatives of log w: L_k = (k-1)! [(-1)^(k-1) m/p^k - (E-m)/q^k]
            const double a = double(m), b = double(E - m);
            const double L1 = a / p - b / q;
            const double L2 = -a / (p * p) - b / (q * q);
            const double L3 = 2.0 * (a / (p * p * p) - b / (q * q * q));
            const double L4 = -6.0 * (a / (p * p * p * p) + b / (q * q * q * q));
            switch (order) {
                case 1: value = w * L1; break;
                case 2: value = w * (L1 * L1 + L2); break;
                case 3: value = w * (L1 * L1 * L1 + 3.0 * L1 * L2 + L3); break;
                case 4:
                    value = w * (L1 * L1 * L1 * L1 + 6.0 * L1 * L1 * L2 + 4.0 * L1 * L3 +
                                 3.0 * L2 * L2 + L4);
                    break;
                default: break;
            }
        }
        out.w[std::size_t(m - lo)] = value;
    }
    return out;
}

double canonical_value(const MicrocanonicalCurve& curve, double p, int order, bool per_vertex) {
    const std::int64_t E = curve.spec.element_count();
    BinomialWeights w = binomial_weights(E, p, order);
    double acc = 0;
    for (std::int64_t m = w.m_lo; m <= w.m_hi; ++m)
        acc += curve.mean[std::size_t(m)] * w.w[std::size_t(m - w.m_lo)];
    if (per_vertex) acc /= double(curve.spec.vertex_count());
    return acc;
}

DerivativeProfile kappa_derivative_profile(const LatticeSpec& spec,
                                           const std::vector<double>& p_grid, int order,
                                           std::int64_t replicates, std::uint64_t master_seed) {
    if (replicates < 2) throw std::invalid_argument("profile needs at least 2 replicates");
    for (double p : p_grid)
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("grid must lie inside (0,1)");
    const SpecTables tables(spec);
    const std::int64_t E = spec.element_count();
    const double V = double(spec.vertex_count());
    const bool site = spec.kind() == LatticeKind::TriangularSite;

    std::vector<BinomialWeights> weights;
    weights.reserve(p_grid.size());
    for (double p : p_grid) weights.push_back(binomial_weights(E, p, order));

    struct GridAcc {
        std::vector<double> sum, sumsq;
        std::int64_t count = 0;
        void merge(const GridAcc& o) {
            if (sum.size() < o.sum.size()) {
                sum.resize(o.sum.size(), 0);
                sumsq.resize(o.sumsq.size(), 0);
            }
            for (std::size_t i = 0; i < o.sum.size(); ++i) {
                sum[i] += o.sum[i];
                sumsq[i] += o.sumsq[i];
            }
            count += o.count;
        }
    };

    GridAcc acc = run_blocks<GridAcc>(
        replicates, 256, [&](std::int64_t first, std::int64_t last, GridAcc& a) {
            a.sum.assign(p_grid.size(), 0.0);
            a.sumsq.assign(p_grid.size(), 0.0);
            UnionFind uf;
            std::vector<std::uint8_t> occupied(site ? std::size_t(spec.vertex_count()) : 0);
            std::vector<double> curve;
            for (std::int64_t r = first; r < last; ++r) {
                run_sweep(spec, tables, SeedSpec{master_seed, std::uint64_t(r)}, uf, occupied,
                          curve);
                ++a.count;
                for (std::size_t g = 0; g < p_grid.size(); ++g) {
                    const BinomialWeights& w = weights[g];
                    double t = 0;
                    for (std::int64_t m = w.m_lo; m <= w.m_hi; ++m)
                        t += curve[std::size_t(m)] * w.w[std::size_t(m - w.m_lo)];
                    t /= V;
                    a.sum[g] += t;
                    a.sumsq[g] += t * t;
                }
            }
        });

    DerivativeProfile prof;
    prof.p_grid = p_grid;
    prof.order = order;
    prof.replicates = acc.count;
    prof.value.resize(p_grid.size());
    prof.stderr_.resize(p_grid.size());
    for (std::size_t g = 0; g < p_grid.size(); ++g) {
        const double R = double(acc.count);
        prof.value[g] = acc.sum[g] / R;
        double var = (acc.sumsq[g] - acc.sum[g] * acc.sum[g] / R) / (R - 1.0);
        if (var < 0) var = 0;
        prof.stderr_[g] = std::sqrt(var / R);
    }
    return prof;
}

} // namespace perc
