#pragma once

#include <cstdint>
#include <vector>

#include "perc/lattice.hpp"

namespace perc {

// Per-occupation-count averages of the cluster count: one insertion sweep per
// replicate (never deletions), averaged across replicates.
struct MicrocanonicalCurve {
    LatticeSpec spec{LatticeSpec::free_box(LatticeKind::SquareBond, 1)};
    std::vector<double> mean;     // A_m, m = 0..E
    std::vector<double> variance; // across replicates, per m
    std::int64_t replicates = 0;
};

MicrocanonicalCurve sweep(const LatticeSpec& spec, std::int64_t replicates,
                          std::uint64_t master_seed);

// d^r/dp^r of the binomial weight C(E,m) p^m (1-p)^(E-m) for all m, via the
// factored log-derivative representation. Outside the window
// |m - Ep| <= 8 sqrt(Ep(1-p)) + 4r sqrt(E) weights are below 1e-14 of the
// peak and are returned as exact zeros.
struct BinomialWeights {
    std::int64_t m_lo = 0, m_hi = -1; // inclusive support
    std::vector<double> w;            // w[m - m_lo]
    double at(std::int64_t m) const {
        return (m < m_lo || m > m_hi) ? 0.0 : w[std::size_t(m - m_lo)];
    }
};

BinomialWeights binomial_weights(std::int64_t element_count, double p, int order);

// sum_m A_m d^r w_m(p); per_vertex divides by |B(n)|. r = 0 at p in {0,1}
// returns the exact endpoint value; derivatives require 0 < p < 1.
double canonical_value(const MicrocanonicalCurve& curve, double p, int order,
                       bool per_vertex = false);

// Per-vertex derivative estimates on a p-grid with standard errors across
// replicates (leave-one-out jackknife; identical to sd/sqrt(R) for this
// linear statistic).
struct DerivativeProfile {
    std::vector<double> p_grid;
    int order = 0;
    std::vector<double> value;
    std::vector<double> stderr_;
    std::int64_t replicates = 0;
};

DerivativeProfile kappa_derivative_profile(const LatticeSpec& spec,
                                           const std::vector<double>& p_grid, int order,
                                           std::int64_t replicates, std::uint64_t master_seed);

} // namespace perc
