#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "perc/clusters.hpp"
#include "perc/config.hpp"
#include "perc/estimate.hpp"
#include "perc/lattice.hpp"

namespace perc {

// --- kappa ---------------------------------------------------------------

// Mean of M_n/|B(n)| over independent configurations (streams 0..samples-1
// of master_seed).
Estimate kappa_estimate(const LatticeSpec& spec, double p, std::int64_t samples,
                        std::uint64_t master_seed);

// --- origin-cluster histogram and its functionals -------------------------

struct ClusterSizeHistogram {
    LatticeKind kind = LatticeKind::SquareBond;
    std::int64_t samples = 0;
    std::vector<std::int64_t> finite_counts; // index = size; boundary-free clusters only
    std::int64_t boundary_count = 0;         // cluster touches the box boundary (infinite proxy)
    std::int64_t vacant_count = 0;           // site lattice: origin vacant (size 0)

    double theta_hat(std::int64_t size) const {
        if (size <= 0 || size >= std::int64_t(finite_counts.size())) return 0.0;
        return double(finite_counts[std::size_t(size)]) / double(samples);
    }
};

ClusterSizeHistogram origin_cluster_histogram(const LatticeSpec& spec, double p,
                                              std::int64_t samples, std::uint64_t master_seed);

// Plug-in estimates from the histogram. At h=0 the free energy reduces to
// E[1/|C|; 0 < |C| < infinity-proxy].
double free_energy(const ClusterSizeHistogram& hist, double h);
double magnetization(const ClusterSizeHistogram& hist, double h);
double chi_f(const ClusterSizeHistogram& hist);

// Same values with multinomial standard errors (for consistency gates).
Estimate free_energy_estimate(const ClusterSizeHistogram& hist, double h);
Estimate magnetization_estimate(const ClusterSizeHistogram& hist, double h);
Estimate chi_f_estimate(const ClusterSizeHistogram& hist);

// --- crossings -------------------------------------------------------------

enum class CrossingOrientation { LeftRight, TopBottom };
enum class CrossingMedium { OccupiedPrimal, VacantDual };

// One crossing indicator on a sampled configuration. Occupied crossings
// follow the convention that the path uses no edges joining two boundary
// vertices; vacant dual crossings run over the face grid of B(n) with the
// mirrored convention. On the triangular lattice VacantDual means a vacant
// *site* crossing (self-matching lattice).
Estimate crossing_probability(LatticeKind kind, double p, int n,
                              CrossingOrientation orientation, CrossingMedium medium,
                              std::int64_t samples, std::uint64_t master_seed);

// Deterministic per-configuration predicates (exposed for tests/oracles).
bool has_crossing(const Configuration& cfg, CrossingOrientation orientation,
                  CrossingMedium medium);

// --- radial reach: pi(n) and xi --------------------------------------------

// P(0 -> ring r) and P(0 -> ring r, cluster does not reach the box boundary)
// for every r in radii, measured on shared samples with lazy cluster growth.
struct RadialReachProfile {
    std::vector<int> radii;
    std::vector<Estimate> reach;        // 0 -> ring r
    std::vector<Estimate> reach_finite; // ... and not touching the box boundary
    std::int64_t samples = 0;
};

RadialReachProfile radial_reach_profile(const LatticeSpec& spec, double p,
                                        const std::vector<int>& radii, std::int64_t samples,
                                        std::uint64_t master_seed);

// P(0 -> ring n_inner); requires n_inner <= spec.n/2 (boundary buffer).
Estimate pi_n(const LatticeSpec& spec, int n_inner, double p, std::int64_t samples,
              std::uint64_t master_seed);

// Least-squares slope of -log P(0 -> ring r, finite) over r gives 1/xi.
double xi_decay_estimate(const LatticeSpec& spec, double p, const std::vector<int>& radii,
                         std::int64_t samples, std::uint64_t master_seed);

// --- Kesten correlation length L(p) ----------------------------------------

struct CorrelationLengthResult {
    int L = 0;
    bool resolved = false; // false: scan hit n_max before the criterion was met
    std::vector<std::pair<int, double>> trace; // (n, sigma*-hat)
};

// Smallest n in the scan schedule (1..16 then geometric x1.25) whose vacant
// crossing probability sigma*(p,n) reaches 1-epsilon0 at 95% confidence
// (Wilson lower bound). Subcritical branch: requires p < 1/2.
CorrelationLengthResult correlation_length_L(LatticeKind kind, double p, double epsilon0,
                                             std::int64_t samples_per_step, int n_max,
                                             std::uint64_t master_seed);

std::vector<int> correlation_length_schedule(int n_max);

} // namespace perc
