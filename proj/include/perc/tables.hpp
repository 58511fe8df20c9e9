#pragma once

#include <cstdint>
#include <vector>

#include "perc/lattice.hpp"

namespace perc {

// Flattened incidence tables for the hot sampling loops.
struct SpecTables {
    explicit SpecTables(const LatticeSpec& spec) : spec(spec) {
        if (spec.kind() == LatticeKind::SquareBond) {
            const std::int64_t E = spec.element_count();
            bond_a.resize(std::size_t(E));
            bond_b.resize(std::size_t(E));
            for (std::int64_t e = 0; e < E; ++e) {
                BondGeom g = spec.bond_geometry(ElementId(e));
                bond_a[std::size_t(e)] = spec.vertex_index(g.v1);
                bond_b[std::size_t(e)] = spec.vertex_index(g.v2);
            }
        } else {
            const std::int64_t V = spec.vertex_count();
            fwd.assign(std::size_t(V) * 3, kNone);
            static constexpr std::array<Vertex, 3> steps = {Vertex{1, 0}, Vertex{0, 1},
                                                            Vertex{1, 1}};
            for (std::int64_t s = 0; s < V; ++s) {
                Vertex v = spec.vertex_at(VertexId(s));
                for (int k = 0; k < 3; ++k) {
                    Vertex w{v.x + steps[std::size_t(k)].x, v.y + steps[std::size_t(k)].y};
                    if (spec.is_torus())
                        w = spec.wrap(w);
                    else if (!spec.in_box(w))
                        continue;
                    fwd[std::size_t(s) * 3 + std::size_t(k)] = spec.vertex_index(w);
                }
            }
        }
    }

    static constexpr std::uint32_t kNone = 0xffffffffu;

    LatticeSpec spec;
    std::vector<std::uint32_t> bond_a, bond_b; // SquareBond
    std::vector<std::uint32_t> fwd;            // TriangularSite, 3 slots per site
};

} // namespace perc
