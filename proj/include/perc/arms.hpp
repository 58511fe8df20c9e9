#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "perc/config.hpp"
#include "perc/estimate.hpp"
#include "perc/lattice.hpp"

namespace perc {

enum class ArmColor : std::uint8_t { Occupied, Vacant };

// Cyclic sequence of arm colors crossing the annulus A(m,n). Occupied arms
// are primal paths; vacant arms are vacant-site paths on the (self-matching)
// triangular lattice and vacant dual paths on the square-bond lattice.
struct ArmSpec {
    std::vector<ArmColor> colors;
    int m = 1;
    int n = 2;
};

// Exact k-arm detection, k <= 4. Monochromatic and mixed counts are
// resolved by max-flow widths (the cyclic word is rotation-unique there, so
// any disjoint arm system realizes it). The (2,2) sequences split by
// lattice: on the triangular lattice the cyclic order is well defined on
// the shared site ring, the alternating event uses the interleaving
// criterion, and the blocked (O,O,V,V) order is rejected as unsupported
// (it would need same-cluster double-crossing search); on the square-bond
// lattice occupied and vacant arms live half a step apart, cross-media
// cyclic order is a convention, and the (2,2) event is the order-free one
// (two disjoint arms of each color), which is what the edge-centered
// four-arm event embeds into.
//
// Conventions, fixed here and mirrored by the test oracle:
//  - arms live inside the annulus region A(m,n); cyclic order is read off
//    the arms' inner endpoints along the ring walk (primal before dual on
//    exact angular ties);
//  - triangular: the two diagonal edges joining ring-m sites at the inner
//    corners cut through the hole and are excluded;
//  - square-bond: occupied arms may not use bonds joining two ring-m or two
//    ring-n vertices; vacant dual arms live on the dual band of radii
//    [m-1/2, n+1/2], excluding dual bonds that join two extreme-ring dual
//    vertices. Under these rules each color's arms cut the other color's
//    region, so the interleaving criterion on cluster attachment arcs is
//    exact.
class ArmDetector {
  public:
    ArmDetector(const LatticeSpec& spec, const ArmSpec& arm);
    ~ArmDetector();
    ArmDetector(ArmDetector&&) noexcept;

    bool evaluate(const Configuration& cfg);
    bool evaluate(const BernoulliField& field); // lazy: visits only ring-attached clusters

    const ArmSpec& arm() const { return arm_; }

  private:
    struct Impl;
    ArmSpec arm_;
    std::unique_ptr<Impl> impl_;
};

bool arm_event(const Configuration& cfg, const ArmSpec& arm);

Estimate arm_probability(const LatticeSpec& spec, double p, const ArmSpec& arm,
                         std::int64_t samples, std::uint64_t master_seed);

// --- edge-centered events (square-bond) ------------------------------------

// Four arms from the bond e: occupied primal arms from both endpoints of e
// to the ring at distance `radius` around v1(e), vacant dual arms from both
// endpoints of e* to the dual ring just outside; pairwise disjoint except at
// e, which is deleted (with e*) before the connectivity queries.
bool edge_four_arm(const Configuration& cfg, ElementId e, int radius);

// Two vacant dual arms plus one occupied primal arm from v1(e).
bool edge_three_arm(const Configuration& cfg, ElementId e, int radius);

Estimate edge_four_arm_probability(const LatticeSpec& spec, double p, ElementId e, int radius,
                                   std::int64_t samples, std::uint64_t master_seed);
Estimate edge_three_arm_probability(const LatticeSpec& spec, double p, ElementId e, int radius,
                                    std::int64_t samples, std::uint64_t master_seed);

} // namespace perc
