#include "perc/pivotal.hpp"

#include <stdexcept>

#include "perc/clusters.hpp"
#include "perc/runner.hpp"

namespace perc {

namespace {

void require_square_free(const LatticeSpec& spec) {
    if (spec.kind() != LatticeKind::SquareBond || spec.is_torus())
        throw std::invalid_argument("operation requires the free square-bond lattice");
}

// Components and bridges of an undirected graph in one DFS pass (iterative
// Tarjan low-link). Edge ids are caller-chosen; parallel edges unsupported
// (grid graphs have none).
class BridgeFinder {
  public:
    void reset(std::uint32_t nodes, std::size_t edge_id_space) {
        nodes_ = nodes;
        adj_head_.assign(nodes, kNil);
        half_.clear();
        bridge_.assign(edge_id_space, 0);
        comp_.assign(nodes, kNil);
    }

    void add_edge(std::uint32_t u, std::uint32_t v, std::uint32_t edge_id) {
        half_.push_back({v, edge_id, adj_head_[u]});
        adj_head_[u] = std::uint32_t(half_.size() - 1);
        half_.push_back({u, edge_id, adj_head_[v]});
        adj_head_[v] = std::uint32_t(half_.size() - 1);
    }

    void run() {
        disc_.assign(nodes_, 0);
        low_.assign(nodes_, 0);
        iter_.assign(nodes_, kNil);
        std::uint32_t time = 0;
        stack_.clear();
        for (std::uint32_t root = 0; root < nodes_; ++root) {
            if (disc_[root] != 0) continue;
            const std::uint32_t comp_id = root;
            // iterative DFS; parent arc tracked to skip the tree edge back
            stack_.push_back({root, kNil});
            disc_[root] = low_[root] = ++time;
            comp_[root] = comp_id;
            iter_[root] = adj_head_[root];
            while (!stack_.empty()) {
                const std::uint32_t u = stack_.back().first;
                const std::uint32_t parent_arc = stack_.back().second;
                std::uint32_t a = iter_[u];
                if (a == kNil) {
                    stack_.pop_back();
                    if (!stack_.empty()) {
                        std::uint32_t p = stack_.back().first;
                        low_[p] = std::min(low_[p], low_[u]);
                        if (low_[u] > disc_[p]) bridge_[half_[parent_arc].edge_id] = 1;
                    }
                    continue;
                }
                iter_[u] = half_[a].next;
                if (parent_arc != kNil && (a ^ 1) == parent_arc) continue; // tree edge back
                std::uint32_t v = half_[a].to;
                if (disc_[v] == 0) {
                    disc_[v] = low_[v] = ++time;
                    comp_[v] = comp_id;
                    iter_[v] = adj_head_[v];
                    stack_.push_back({v, a});
                } else {
                    low_[u] = std::min(low_[u], disc_[v]);
                }
            }
        }
    }

    bool is_bridge(std::uint32_t edge_id) const { return bridge_[edge_id] != 0; }
    std::uint32_t component(std::uint32_t node) const { return comp_[node]; }

  private:
    struct Half {
        std::uint32_t to;
        std::uint32_t edge_id;
        std::uint32_t next;
    };
    static constexpr std::uint32_t kNil = 0xffffffffu;
    std::uint32_t nodes_ = 0;
    std::vector<std::uint32_t> adj_head_;
    std::vector<Half> half_;
    std::vector<std::uint8_t> bridge_;
    std::vector<std::uint32_t> comp_, disc_, low_, iter_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack_;
};

// Vacant dual graph (with the free outer ring) into a BridgeFinder. Edge ids:
// the crossed primal bond for in-box edges, E + counter for ring edges.
void build_vacant_dual(BridgeFinder& bf, const Configuration& cfg) {
    const LatticeSpec& spec = cfg.spec();
    const int s = spec.dual_grid_side();
    const std::int64_t E = spec.element_count();
    const std::int64_t max_ring_edges = std::int64_t(2) * s * s;
    bf.reset(std::uint32_t(s) * std::uint32_t(s), std::size_t(E + max_ring_edges));
    const int lo = -spec.box_radius() - 1, hi = spec.box_radius();
    std::uint32_t ring_id = std::uint32_t(E);
    for (int j = lo; j <= hi; ++j) {
        for (int i = lo; i <= hi; ++i) {
            DualVertex d{i, j};
            for (int step = 0; step < 2; ++step) {
                const bool right = step == 0;
                DualVertex e = right ? DualVertex{i + 1, j} : DualVertex{i, j + 1};
                if (!spec.dual_in_grid(e)) continue;
                ElementId crossed;
                bool in_box = spec.dual_step_crosses(d, right, crossed);
                if (in_box) {
                    if (!cfg.get(crossed))
                        bf.add_edge(spec.dual_vertex_index(d), spec.dual_vertex_index(e), crossed);
                } else {
                    bf.add_edge(spec.dual_vertex_index(d), spec.dual_vertex_index(e), ring_id++);
                }
            }
        }
    }
    bf.run();
}

// Occupied primal graph into a BridgeFinder (edge id = bond id).
void build_occupied_primal(BridgeFinder& bf, const Configuration& cfg) {
    const LatticeSpec& spec = cfg.spec();
    const std::int64_t E = spec.element_count();
    bf.reset(std::uint32_t(spec.vertex_count()), std::size_t(E));
    for (std::int64_t e = 0; e < E; ++e) {
        if (!cfg.get(ElementId(e))) continue;
        BondGeom g = spec.bond_geometry(ElementId(e));
        bf.add_edge(spec.vertex_index(g.v1), spec.vertex_index(g.v2), std::uint32_t(e));
    }
    bf.run();
}

} // namespace

bool pivotal_for_connection(const Configuration& cfg, ElementId b) {
    require_square_free(cfg.spec());
    const LatticeSpec& spec = cfg.spec();
    UnionFind uf;
    uf.reset(std::size_t(spec.vertex_count()));
    const std::int64_t E = spec.element_count();
    for (std::int64_t e = 0; e < E; ++e) {
        if (ElementId(e) == b || !cfg.get(ElementId(e))) continue;
        BondGeom g = spec.bond_geometry(ElementId(e));
        uf.unite(spec.vertex_index(g.v1), spec.vertex_index(g.v2));
    }
    BondGeom gb = spec.bond_geometry(b);
    return !uf.same(spec.vertex_index(gb.v1), spec.vertex_index(gb.v2));
}

bool dual_separation(const Configuration& cfg, ElementId b) {
    require_square_free(cfg.spec());
    const LatticeSpec& spec = cfg.spec();
    UnionFind uf;
    unite_vacant_dual(uf, cfg, /*excluded=*/b);
    DualBond bs = spec.dual_bond_of(b);
    return uf.same(spec.dual_vertex_index(bs.d1), spec.dual_vertex_index(bs.d2));
}

std::vector<std::uint8_t> all_pivotal_connection(const Configuration& cfg) {
    require_square_free(cfg.spec());
    const LatticeSpec& spec = cfg.spec();
    const std::int64_t E = spec.element_count();
    BridgeFinder bf;
    build_occupied_primal(bf, cfg);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(E));
    for (std::int64_t e = 0; e < E; ++e) {
        BondGeom g = spec.bond_geometry(ElementId(e));
        if (cfg.get(ElementId(e))) {
            out[std::size_t(e)] = bf.is_bridge(std::uint32_t(e));
        } else {
            out[std::size_t(e)] = bf.component(spec.vertex_index(g.v1)) !=
                                  bf.component(spec.vertex_index(g.v2));
        }
    }
    return out;
}

std::vector<std::uint8_t> all_dual_separation(const Configuration& cfg) {
    require_square_free(cfg.spec());
    const LatticeSpec& spec = cfg.spec();
    const std::int64_t E = spec.element_count();
    BridgeFinder bf;
    build_vacant_dual(bf, cfg);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(E));
    for (std::int64_t e = 0; e < E; ++e) {
        DualBond bs = spec.dual_bond_of(ElementId(e));
        if (cfg.get(ElementId(e))) {
            out[std::size_t(e)] = bf.component(spec.dual_vertex_index(bs.d1)) ==
                                  bf.component(spec.dual_vertex_index(bs.d2));
        } else {
            out[std::size_t(e)] = !bf.is_bridge(std::uint32_t(e));
        }
    }
    return out;
}

Estimate lemma3_estimator(const LatticeSpec& spec, double p, std::int64_t samples,
                          std::uint64_t master_seed) {
    require_square_free(spec);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");
    const std::int64_t E = spec.element_count();
    const double V = double(spec.vertex_count());
    Accumulator acc = run_blocks<Accumulator>(
        samples, 256, [&](std::int64_t first, std::int64_t last, Accumulator& a) {
            Configuration cfg(spec);
            BridgeFinder bf;
            for (std::int64_t i = first; i < last; ++i) {
                BernoulliField field(p, SeedSpec{master_seed, std::uint64_t(i)});
                for (std::int64_t e = 0; e < E; ++e)
                    cfg.set(ElementId(e), field.occupied(ElementId(e)));
                build_vacant_dual(bf, cfg);
                std::int64_t count = 0;
                for (std::int64_t e = 0; e < E; ++e) {
                    DualBond bs = spec.dual_bond_of(ElementId(e));
                    if (cfg.get(ElementId(e))) {
                        count += bf.component(spec.dual_vertex_index(bs.d1)) ==
                                 bf.component(spec.dual_vertex_index(bs.d2));
                    } else {
                        count += !bf.is_bridge(std::uint32_t(e));
                    }
                }
                a.add(-double(count) / V);
            }
        });
    return finalize(acc, SeedSpec{master_seed, 0});
}

PivotalReport pivotal_edges(const Configuration& cfg, const ConfigPredicate& event) {
    const std::int64_t E = cfg.spec().element_count();
    PivotalReport rep;
    rep.pivotal.assign(std::size_t(E), 0);
    Configuration work = cfg;
    for (std::int64_t e = 0; e < E; ++e) {
        work.set(ElementId(e), true);
        bool with = event(work);
        work.set(ElementId(e), false);
        bool without = event(work);
        work.set(ElementId(e), cfg.get(ElementId(e)));
        if (with != without) {
            rep.pivotal[std::size_t(e)] = 1;
            ++rep.count;
        }
    }
    return rep;
}

PivotalPairReport pivotal_pair(const Configuration& cfg, const ConfigPredicate& event_a,
                               const ConfigPredicate& event_b) {
    const std::int64_t E = cfg.spec().element_count();
    PivotalPairReport rep;
    rep.pivotal_a.assign(std::size_t(E), 0);
    rep.pivotal_b.assign(std::size_t(E), 0);
    rep.a_occurs = event_a(cfg);
    rep.b_occurs = event_b(cfg);
    Configuration work = cfg;
    for (std::int64_t e = 0; e < E; ++e) {
        work.set(ElementId(e), true);
        bool a1 = event_a(work), b1 = event_b(work);
        work.set(ElementId(e), false);
        bool a0 = event_a(work), b0 = event_b(work);
        work.set(ElementId(e), cfg.get(ElementId(e)));
        rep.pivotal_a[std::size_t(e)] = a1 != a0;
        rep.pivotal_b[std::size_t(e)] = b1 != b0;
    }
    return rep;
}

} // namespace perc
