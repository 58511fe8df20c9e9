#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "perc/config.hpp"
#include "perc/estimate.hpp"
#include "perc/lattice.hpp"

namespace perc {

// E(b): no occupied path joins the endpoints of b inside B(n) \ b, i.e. b is
// pivotal for its own endpoints' connection.
bool pivotal_for_connection(const Configuration& cfg, ElementId b);

// D(b): a vacant dual path joins the endpoints of b* without using b*. The
// dual graph carries the free outer ring (dual bonds crossing out-of-box
// bonds are unconditionally vacant), i.e. it is the planar dual with the
// outer face; under that convention D(b) computes E(b) through the dual
// route.
bool dual_separation(const Configuration& cfg, ElementId b);

// Per-configuration answers for every bond at once (bridge-finding instead
// of one union-find pass per bond).
std::vector<std::uint8_t> all_pivotal_connection(const Configuration& cfg); // E(b) per bond
std::vector<std::uint8_t> all_dual_separation(const Configuration& cfg);    // D(b) per bond

// Monte Carlo mean of -(1/|B(n)|) sum_b 1[D(b)]  (estimates kappa'(p)).
Estimate lemma3_estimator(const LatticeSpec& spec, double p, std::int64_t samples,
                          std::uint64_t master_seed);

// --- Russo machinery ---------------------------------------------------------

struct PivotalReport {
    std::vector<std::uint8_t> pivotal; // per element
    std::int64_t count = 0;
};

// e is pivotal iff the event indicator differs between the two states of e
// with everything else fixed. Evaluates both flips per element.
PivotalReport pivotal_edges(const Configuration& cfg, const ConfigPredicate& event);

// Refined classification for the generalized Russo formula on a pair
// (A decreasing, B increasing): per element, pivotality for each event plus
// the event values at the given configuration.
struct PivotalPairReport {
    std::vector<std::uint8_t> pivotal_a, pivotal_b;
    bool a_occurs = false;
    bool b_occurs = false;
};

PivotalPairReport pivotal_pair(const Configuration& cfg, const ConfigPredicate& event_a,
                               const ConfigPredicate& event_b);

} // namespace perc
