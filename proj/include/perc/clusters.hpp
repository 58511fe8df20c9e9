#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "perc/config.hpp"
#include "perc/lattice.hpp"

namespace perc {

constexpr ElementId kNoElement = std::numeric_limits<ElementId>::max();

// Union-find with path halving and union by size.
class UnionFind {
  public:
    void reset(std::size_t n) {
        parent_.resize(n);
        size_.assign(n, 1);
        for (std::size_t i = 0; i < n; ++i) parent_[i] = std::uint32_t(i);
    }

    std::uint32_t find(std::uint32_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]]; // path halving
            a = parent_[a];
        }
        return a;
    }

    // true iff the two were in different components
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    bool same(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }
    std::int64_t component_size(std::uint32_t a) { return size_[find(a)]; }
    std::size_t node_count() const { return parent_.size(); }

  private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::int64_t> size_;
};

// Unite along every occupied element. Returns the number of merges.
// Bond kind: vertices are always present and occupied bonds join them.
// Site kind: occupied sites join occupied neighbors (forward steps only).
inline std::int64_t unite_occupied(UnionFind& uf, const Configuration& cfg) {
    const LatticeSpec& spec = cfg.spec();
    std::int64_t merges = 0;
    if (spec.kind() == LatticeKind::SquareBond) {
        const std::int64_t E = spec.element_count();
        for (std::int64_t e = 0; e < E; ++e) {
            if (!cfg.get(ElementId(e))) continue;
            BondGeom g = spec.bond_geometry(ElementId(e));
            if (uf.unite(spec.vertex_index(g.v1), spec.vertex_index(g.v2))) ++merges;
        }
        return merges;
    }
    const int side = spec.side();
    const bool torus = spec.is_torus();
    static constexpr std::array<Vertex, 3> fwd = {Vertex{1, 0}, Vertex{0, 1}, Vertex{1, 1}};
    for (std::int64_t s = 0; s < spec.vertex_count(); ++s) {
        if (!cfg.get(ElementId(s))) continue;
        Vertex v = spec.vertex_at(VertexId(s));
        for (Vertex d : fwd) {
            Vertex w{v.x + d.x, v.y + d.y};
            if (torus)
                w = spec.wrap(w);
            else if (w.x > spec.box_radius() || w.y > spec.box_radius())
                continue;
            ElementId we = ElementId(spec.vertex_index(w));
            if (!cfg.get(we)) continue;
            if (uf.unite(VertexId(s), we)) ++merges;
        }
    }
    (void)side;
    return merges;
}

// Cluster count M_n under the paper's convention: every vertex of the bond
// lattice belongs to a cluster (isolated vertices count); on the site
// lattice only occupied sites do.
inline std::int64_t cluster_count(const Configuration& cfg, UnionFind& uf) {
    const LatticeSpec& spec = cfg.spec();
    uf.reset(std::size_t(spec.vertex_count()));
    std::int64_t merges = unite_occupied(uf, cfg);
    if (spec.kind() == LatticeKind::SquareBond) return spec.vertex_count() - merges;
    return cfg.occupied_count() - merges;
}

struct ClusterLabeling {
    std::vector<std::int32_t> component;       // per vertex; -1 = in no cluster
    std::int64_t cluster_count = 0;            // M_n
    std::map<std::int64_t, std::int64_t> size_histogram;
    std::vector<std::uint8_t> touches_boundary; // per component id
    std::vector<std::int64_t> component_sizes;  // per component id
};

inline ClusterLabeling label(const Configuration& cfg) {
    const LatticeSpec& spec = cfg.spec();
    const std::int64_t V = spec.vertex_count();
    UnionFind uf;
    uf.reset(std::size_t(V));
    unite_occupied(uf, cfg);

    const bool site = spec.kind() == LatticeKind::TriangularSite;
    ClusterLabeling out;
    out.component.assign(std::size_t(V), -1);
    std::vector<std::int32_t> root_label(std::size_t(V), -1);
    for (std::int64_t v = 0; v < V; ++v) {
        if (site && !cfg.get(ElementId(v))) continue;
        std::uint32_t r = uf.find(VertexId(v));
        if (root_label[r] < 0) {
            root_label[r] = std::int32_t(out.cluster_count++);
            out.component_sizes.push_back(uf.component_size(r));
        }
        out.component[std::size_t(v)] = root_label[r];
    }
    out.touches_boundary.assign(std::size_t(out.cluster_count), 0);
    if (!spec.is_torus()) {
        for (Vertex b : spec.boundary_vertices()) {
            std::int32_t c = out.component[spec.vertex_index(b)];
            if (c >= 0) out.touches_boundary[std::size_t(c)] = 1;
        }
    }
    for (std::int64_t s : out.component_sizes) out.size_histogram[s] += 1;
    return out;
}

struct OriginCluster {
    std::int64_t size = 0;       // |C(vertex)| inside the box; 0 for a vacant site
    bool touches_boundary = false;
};

// BFS restricted to the occupied structure; visits only the cluster itself.
inline OriginCluster cluster_of(const Configuration& cfg, Vertex start) {
    const LatticeSpec& spec = cfg.spec();
    if (!spec.in_box(start)) throw std::invalid_argument("vertex outside box");
    const bool site = spec.kind() == LatticeKind::TriangularSite;
    OriginCluster out;
    if (site && !cfg.get(ElementId(spec.vertex_index(start)))) return out;

    std::vector<std::uint8_t> seen(std::size_t(spec.vertex_count()), 0);
    std::vector<Vertex> stack{start};
    seen[spec.vertex_index(start)] = 1;
    const int n = spec.box_radius();
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        ++out.size;
        if (!spec.is_torus() && std::max(std::abs(v.x), std::abs(v.y)) == n)
            out.touches_boundary = true;
        NeighborList nb = spec.neighbors(v);
        for (int k = 0; k < nb.count; ++k) {
            Vertex w = nb.v[k];
            VertexId wi = spec.vertex_index(w);
            if (seen[wi]) continue;
            if (site) {
                if (!cfg.get(ElementId(wi))) continue;
            } else {
                bool horizontal = (w.y == v.y);
                Vertex lo = horizontal ? (w.x < v.x ? w : v) : (w.y < v.y ? w : v);
                if (!cfg.get(spec.bond_id(lo, horizontal))) continue;
            }
            seen[wi] = 1;
            stack.push_back(w);
        }
    }
    return out;
}

// Occupied-path connectivity between two vertex sets.
inline bool connects(const Configuration& cfg, const std::vector<Vertex>& A,
                     const std::vector<Vertex>& B) {
    const LatticeSpec& spec = cfg.spec();
    const bool site = spec.kind() == LatticeKind::TriangularSite;
    UnionFind uf;
    uf.reset(std::size_t(spec.vertex_count()));
    unite_occupied(uf, cfg);
    auto eligible = [&](Vertex v) {
        return !site || cfg.get(ElementId(spec.vertex_index(v)));
    };
    for (Vertex a : A) {
        if (!spec.in_box(a)) throw std::invalid_argument("vertex outside box");
        if (!eligible(a)) continue;
        for (Vertex b : B) {
            if (!spec.in_box(b)) throw std::invalid_argument("vertex outside box");
            if (!eligible(b)) continue;
            if (uf.same(spec.vertex_index(a), spec.vertex_index(b))) return true;
        }
    }
    return false;
}

// Vacant dual connectivity over the (2n+2)^2 dual grid (square-bond, free
// boundary). Dual bonds crossing bonds outside B(n) are unconditionally
// vacant, which makes the outer dual ring a free corridor: this is the
// planar dual with the outer face included. `excluded` removes one primal
// bond's dual from the graph.
inline void unite_vacant_dual(UnionFind& uf, const Configuration& cfg,
                              ElementId excluded = kNoElement) {
    const LatticeSpec& spec = cfg.spec();
    const int s = spec.dual_grid_side();
    uf.reset(std::size_t(s) * s);
    const int lo = -spec.box_radius() - 1, hi = spec.box_radius();
    for (int j = lo; j <= hi; ++j) {
        for (int i = lo; i <= hi; ++i) {
            DualVertex d{i, j};
            std::uint32_t di = spec.dual_vertex_index(d);
            for (int step = 0; step < 2; ++step) {
                const bool right = step == 0;
                DualVertex e = right ? DualVertex{i + 1, j} : DualVertex{i, j + 1};
                if (!spec.dual_in_grid(e)) continue;
                ElementId crossed;
                bool in_box = spec.dual_step_crosses(d, right, crossed);
                bool vacant = !in_box || !cfg.get(crossed);
                if (in_box && crossed == excluded) vacant = false;
                if (vacant) uf.unite(di, spec.dual_vertex_index(e));
            }
        }
    }
}

} // namespace perc
