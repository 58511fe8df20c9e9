#include "perc/arms.hpp"

#include <algorithm>
#include <stdexcept>

#include "perc/clusters.hpp"
#include "perc/estimate.hpp"
#include "perc/runner.hpp"

namespace perc {

namespace {

// --- unit-capacity max flow for vertex-disjoint path counting ----------------

// Nodes are split (in = 2v, out = 2v+1); S and T appended. Paths found by
// BFS augmentation, early exit at `limit` (limit <= 4 here).
class DisjointPathFlow {
  public:
    void reset(std::uint32_t real_nodes) {
        n_ = real_nodes;
        head_.assign(2 * std::size_t(real_nodes) + 2, kNil);
        arcs_.clear();
    }

    std::uint32_t S() const { return 2 * n_; }
    std::uint32_t T() const { return 2 * n_ + 1; }

    void enable_node(std::uint32_t v) { add_arc(2 * v, 2 * v + 1, 1); }
    void add_edge(std::uint32_t u, std::uint32_t v) {
        add_arc(2 * u + 1, 2 * v, 1);
        add_arc(2 * v + 1, 2 * u, 1);
    }
    void add_source(std::uint32_t v) { add_arc(S(), 2 * v, 1); }
    void add_sink(std::uint32_t v) { add_arc(2 * v + 1, T(), 1); }

    int max_paths(int limit) {
        int flow = 0;
        while (flow < limit && augment()) ++flow;
        return flow;
    }

  private:
    struct Arc {
        std::uint32_t to;
        std::int32_t cap;
        std::uint32_t next;
    };
    static constexpr std::uint32_t kNil = 0xffffffffu;

    void add_arc(std::uint32_t from, std::uint32_t to, std::int32_t cap) {
        arcs_.push_back({to, cap, head_[from]});
        head_[from] = std::uint32_t(arcs_.size() - 1);
        arcs_.push_back({from, 0, head_[to]}); // residual
        head_[to] = std::uint32_t(arcs_.size() - 1);
    }

    bool augment() {
        prev_arc_.assign(head_.size(), kNil);
        queue_.clear();
        queue_.push_back(S());
        prev_arc_[S()] = kNil - 1; // visited marker
        for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
            std::uint32_t u = queue_[qi];
            for (std::uint32_t a = head_[u]; a != kNil; a = arcs_[a].next) {
                if (arcs_[a].cap <= 0) continue;
                std::uint32_t v = arcs_[a].to;
                if (prev_arc_[v] != kNil) continue;
                prev_arc_[v] = a;
                if (v == T()) {
                    for (std::uint32_t x = T(); x != S();) {
                        std::uint32_t arc = prev_arc_[x];
                        arcs_[arc].cap -= 1;
                        arcs_[arc ^ 1].cap += 1;
                        x = arcs_[arc ^ 1].to;
                    }
                    return true;
                }
                queue_.push_back(v);
            }
        }
        return false;
    }

    std::uint32_t n_ = 0;
    std::vector<std::uint32_t> head_;
    std::vector<Arc> arcs_;
    std::vector<std::uint32_t> prev_arc_;
    std::vector<std::uint32_t> queue_;
};

// --- annulus geometry ---------------------------------------------------------

struct AnnulusGraph {
    // local node space with CSR adjacency; edges carry the element whose
    // state gates them (square lattices) or kNoElement (site graphs gate by
    // node state)
    std::vector<std::uint32_t> adj_start;
    std::vector<std::uint32_t> adj_node;
    std::vector<ElementId> adj_elem;
    std::vector<std::uint8_t> inner, outer;
    std::vector<ElementId> node_elem; // site graphs: the site gating the node
    std::uint32_t nodes = 0;

    // inner-ring nodes in cyclic walk order
    std::vector<std::uint32_t> inner_order;
    std::vector<long> inner_pos; // doubled-walk position, parallel to inner_order
    long ring8 = 0;              // 8R of the inner ring in doubled coordinates
};

struct EdgeTriple {
    std::uint32_t a, b;
    ElementId elem;
};

AnnulusGraph build_graph(std::uint32_t global_space, const std::vector<std::uint32_t>& nodes,
                         const std::vector<EdgeTriple>& edges_global,
                         const std::vector<std::uint8_t>& inner_flags,
                         const std::vector<std::uint8_t>& outer_flags,
                         const std::vector<ElementId>& node_elems,
                         const std::vector<long>& inner_positions, long ring8) {
    AnnulusGraph g;
    g.nodes = std::uint32_t(nodes.size());
    std::vector<std::uint32_t> local(global_space, 0xffffffffu);
    for (std::uint32_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;

    std::vector<std::vector<std::pair<std::uint32_t, ElementId>>> adj(nodes.size());
    for (const EdgeTriple& e : edges_global) {
        std::uint32_t la = local[e.a], lb = local[e.b];
        adj[la].push_back({lb, e.elem});
        adj[lb].push_back({la, e.elem});
    }
    g.adj_start.assign(nodes.size() + 1, 0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        g.adj_start[i + 1] = g.adj_start[i] + std::uint32_t(adj[i].size());
    g.adj_node.resize(g.adj_start.back());
    g.adj_elem.resize(g.adj_start.back());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::uint32_t at = g.adj_start[i];
        for (auto [nb, el] : adj[i]) {
            g.adj_node[at] = nb;
            g.adj_elem[at] = el;
            ++at;
        }
    }
    g.inner = inner_flags;
    g.outer = outer_flags;
    g.node_elem = node_elems;
    g.ring8 = ring8;
    // inner order: sort inner nodes by walk position
    std::vector<std::pair<long, std::uint32_t>> order;
    for (std::uint32_t i = 0; i < nodes.size(); ++i)
        if (inner_flags[i]) order.push_back({inner_positions[i], i});
    std::sort(order.begin(), order.end());
    for (auto [pos, i] : order) {
        g.inner_order.push_back(i);
        g.inner_pos.push_back(pos);
    }
    return g;
}

enum class PatternClass { Mono, MixedWidths, Alternating22, Unsupported };

PatternClass classify(LatticeKind kind, const std::vector<ArmColor>& colors, int& occ,
                      int& vac) {
    occ = 0;
    vac = 0;
    for (ArmColor c : colors) (c == ArmColor::Occupied ? occ : vac) += 1;
    const int k = int(colors.size());
    if (occ == 0 || vac == 0) return PatternClass::Mono;
    if (k == 4 && occ == 2) {
        // On the square-bond lattice the two media sit half a step apart and
        // cross-media cyclic order is a convention, so the (2,2) event is the
        // order-free one (two disjoint arms of each color); on the triangular
        // lattice the order is well defined on the shared site ring.
        if (kind == LatticeKind::SquareBond) return PatternClass::MixedWidths;
        bool alternating = true;
        for (int t = 0; t < 4; ++t)
            if (colors[std::size_t(t)] == colors[std::size_t((t + 1) % 4)]) alternating = false;
        return alternating ? PatternClass::Alternating22 : PatternClass::Unsupported;
    }
    return PatternClass::MixedWidths;
}

} // namespace

// --- detector -------------------------------------------------------------------

struct ArmDetector::Impl {
    LatticeSpec spec;
    ArmSpec arm;
    PatternClass pattern;
    int need_occ = 0, need_vac = 0;
    bool site_lattice = false;

    AnnulusGraph sites;          // triangular
    AnnulusGraph primal, dual;   // square-bond
    // merged inner-ring scan order: (graph flag: 0 = primal/sites, 1 = dual)
    struct RingItem {
        std::uint8_t medium;
        std::uint32_t node;
    };
    std::vector<RingItem> ring_scan;

    // workspaces
    struct ColorState {
        std::vector<std::uint32_t> comp;     // per node, epoch-gated
        std::vector<std::uint32_t> epoch_of; // epoch at which comp was written
        std::vector<std::uint8_t> crossing;  // per cluster id
        std::uint32_t clusters = 0;
        std::uint32_t crossing_clusters = 0;
        std::uint32_t epoch = 0;
        std::vector<std::uint32_t> visited_nodes; // nodes touched this epoch
        void start(std::size_t n) {
            if (comp.size() < n) {
                comp.assign(n, 0);
                epoch_of.assign(n, 0);
            }
            ++epoch;
            clusters = 0;
            crossing_clusters = 0;
            crossing.clear();
            visited_nodes.clear();
        }
        bool seen(std::uint32_t v) const { return epoch_of[v] == epoch; }
    };
    ColorState occ_state, vac_state;
    std::vector<std::uint32_t> bfs_queue;
    DisjointPathFlow flow;

    struct Item {
        long pos;
        std::uint8_t medium; // tie-break: primal/site first
        ArmColor color;
        std::uint64_t cluster;
    };
    std::vector<Item> items;

    Impl(const LatticeSpec& s, const ArmSpec& a) : spec(s), arm(a) {
        if (arm.colors.empty() || arm.colors.size() > 4)
            throw std::invalid_argument("arm sequences support k = 1..4");
        if (arm.m < 1 || arm.m >= arm.n)
            throw std::invalid_argument("arm radii must satisfy 1 <= m < n");
        if (spec.is_torus()) throw std::invalid_argument("arm events require a free box");
        if (arm.n > spec.box_radius())
            throw std::invalid_argument("outer arm radius exceeds the box");
        pattern = classify(s.kind(), arm.colors, need_occ, need_vac);
        if (pattern == PatternClass::Unsupported)
            throw std::invalid_argument(
                "unsupported color sequence: cyclic (O,O,V,V) needs same-cluster "
                "double-crossing search");
        site_lattice = spec.kind() == LatticeKind::TriangularSite;
        if (site_lattice)
            build_site_graph();
        else
            build_bond_graphs();
        build_ring_scan();
    }

    static int norm(Vertex v) { return std::max(std::abs(v.x), std::abs(v.y)); }

    void build_site_graph() {
        const int m = arm.m, n = arm.n;
        std::vector<std::uint32_t> nodes;
        std::vector<std::uint8_t> inner_f, outer_f;
        std::vector<ElementId> node_el;
        std::vector<long> pos;
        for (Vertex v : spec.annulus_vertices(m, n)) {
            std::uint32_t gi = spec.vertex_index(v);
            nodes.push_back(gi);
            int r = norm(v);
            inner_f.push_back(r == m);
            outer_f.push_back(r == n);
            node_el.push_back(ElementId(gi));
            pos.push_back(r == m ? ring_position_doubled(2 * v.x, 2 * v.y, 2 * m) : -1);
        }
        std::vector<std::uint32_t> local(std::size_t(spec.vertex_count()), 0xffffffffu);
        for (std::uint32_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
        std::vector<EdgeTriple> edges;
        for (std::uint32_t i = 0; i < nodes.size(); ++i) {
            Vertex v = spec.vertex_at(nodes[i]);
            // forward steps only, both endpoints in the annulus
            static constexpr std::array<Vertex, 3> steps = {Vertex{1, 0}, Vertex{0, 1},
                                                            Vertex{1, 1}};
            for (Vertex d : steps) {
                Vertex w{v.x + d.x, v.y + d.y};
                if (!spec.in_box(w)) continue;
                int r = norm(w);
                if (r < arm.m || r > arm.n) continue;
                // a diagonal joining two ring-m sites cuts through the hole:
                // its segment leaves the annulus region, so arms may not use
                // it (and clusters must not see it)
                if (d.x == 1 && d.y == 1 && norm(v) == arm.m && r == arm.m) continue;
                edges.push_back({nodes[i], spec.vertex_index(w), kNoElement});
            }
        }
        sites = build_graph(std::uint32_t(spec.vertex_count()), nodes, edges, inner_f, outer_f,
                            node_el, pos, 8L * (2 * m));
    }

    void build_bond_graphs() {
        const int m = arm.m, n = arm.n;
        // primal: annulus vertices; occupied bonds; no bonds joining two
        // ring-m or two ring-n vertices
        {
            std::vector<std::uint32_t> nodes;
            std::vector<std::uint8_t> inner_f, outer_f;
            std::vector<ElementId> node_el;
            std::vector<long> pos;
            for (Vertex v : spec.annulus_vertices(m, n)) {
                nodes.push_back(spec.vertex_index(v));
                int r = norm(v);
                inner_f.push_back(r == m);
                outer_f.push_back(r == n);
                node_el.push_back(kNoElement);
                pos.push_back(r == m ? ring_position_doubled(2 * v.x, 2 * v.y, 2 * m) : -1);
            }
            std::vector<EdgeTriple> edges;
            for (Vertex v : spec.annulus_vertices(m, n)) {
                for (int hdir = 0; hdir < 2; ++hdir) {
                    const bool horizontal = hdir == 0;
                    Vertex w = horizontal ? Vertex{v.x + 1, v.y} : Vertex{v.x, v.y + 1};
                    if (!spec.in_box(w)) continue;
                    int rv = norm(v), rw = norm(w);
                    if (rw < m || rw > n) continue;
                    if (rv == m && rw == m) continue;
                    if (rv == n && rw == n) continue;
                    edges.push_back({spec.vertex_index(v), spec.vertex_index(w),
                                     spec.bond_id(v, horizontal)});
                }
            }
            primal = build_graph(std::uint32_t(spec.vertex_count()), nodes, edges, inner_f,
                                 outer_f, std::vector<ElementId>(nodes.size(), kNoElement), pos,
                                 8L * (2 * m));
        }
        // dual band: dual vertices with radius in [m-1/2, n+1/2], so vacant
        // arms span the full primal annulus and cut it; dual bonds joining
        // two extreme-ring dual vertices are excluded (mirror of the primal
        // same-ring rule), which blocks sliding around the arm tips
        {
            auto dual_norm2 = [](DualVertex d) { // doubled-coordinate norm
                return std::max(std::abs(2 * d.i + 1), std::abs(2 * d.j + 1));
            };
            const int lo2 = 2 * m - 1, hi2 = 2 * n + 1;
            std::vector<std::uint32_t> nodes;
            std::vector<std::uint8_t> inner_f, outer_f;
            std::vector<long> pos;
            const int gs = spec.dual_grid_side();
            std::vector<DualVertex> all;
            for (int j = -spec.box_radius() - 1; j <= spec.box_radius(); ++j)
                for (int i = -spec.box_radius() - 1; i <= spec.box_radius(); ++i) {
                    DualVertex d{i, j};
                    int r2 = dual_norm2(d);
                    if (r2 < lo2 || r2 > hi2) continue;
                    all.push_back(d);
                    nodes.push_back(spec.dual_vertex_index(d));
                    inner_f.push_back(r2 == lo2);
                    outer_f.push_back(r2 == hi2);
                    pos.push_back(
                        r2 == lo2 ? ring_position_doubled(2 * d.i + 1, 2 * d.j + 1, lo2) : -1);
                }
            std::vector<EdgeTriple> edges;
            for (DualVertex d : all) {
                for (int step = 0; step < 2; ++step) {
                    const bool right = step == 0;
                    DualVertex e = right ? DualVertex{d.i + 1, d.j} : DualVertex{d.i, d.j + 1};
                    if (!spec.dual_in_grid(e)) continue;
                    int r2 = dual_norm2(e);
                    if (r2 < lo2 || r2 > hi2) continue;
                    int rd2 = dual_norm2(d);
                    if (rd2 == lo2 && r2 == lo2) continue;
                    if (rd2 == hi2 && r2 == hi2) continue;
                    ElementId crossed;
                    if (!spec.dual_step_crosses(d, right, crossed)) continue;
                    edges.push_back({spec.dual_vertex_index(d), spec.dual_vertex_index(e),
                                     crossed});
                }
            }
            dual = build_graph(std::uint32_t(gs) * std::uint32_t(gs), nodes, edges, inner_f,
                               outer_f, std::vector<ElementId>(nodes.size(), kNoElement), pos,
                               8L * lo2);
        }
    }

    void build_ring_scan() {
        if (site_lattice) {
            for (std::size_t i = 0; i < sites.inner_order.size(); ++i)
                ring_scan.push_back({0, sites.inner_order[i]});
            return;
        }
        // merge primal and dual inner rings by cyclic fraction pos/ring8;
        // primal first on exact ties
        std::size_t ip = 0, id = 0;
        while (ip < primal.inner_order.size() || id < dual.inner_order.size()) {
            bool take_primal;
            if (ip == primal.inner_order.size())
                take_primal = false;
            else if (id == dual.inner_order.size())
                take_primal = true;
            else
                take_primal = !ring_fraction_less(dual.inner_pos[id], dual.ring8,
                                                  primal.inner_pos[ip], primal.ring8);
            if (take_primal) {
                ring_scan.push_back({0, primal.inner_order[ip]});
                ++ip;
            } else {
                ring_scan.push_back({1, dual.inner_order[id]});
                ++id;
            }
        }
    }

    // BFS cluster growth from the inner ring for one color. `usable(elem)`
    // gates edges (square) ; `node_pass(node)` gates nodes (site lattice).
    template <typename EdgePass, typename NodePass>
    void grow(const AnnulusGraph& g, ColorState& st, EdgePass&& edge_pass, NodePass&& node_pass) {
        st.start(g.nodes);
        for (std::uint32_t start : g.inner_order) {
            if (st.seen(start) || !node_pass(start)) continue;
            std::uint32_t cid = st.clusters++;
            bool crossing = false;
            bfs_queue.clear();
            bfs_queue.push_back(start);
            st.epoch_of[start] = st.epoch;
            st.comp[start] = cid;
            for (std::size_t qi = 0; qi < bfs_queue.size(); ++qi) {
                std::uint32_t u = bfs_queue[qi];
                st.visited_nodes.push_back(u);
                if (g.outer[u]) crossing = true;
                for (std::uint32_t a = g.adj_start[u]; a < g.adj_start[u + 1]; ++a) {
                    std::uint32_t v = g.adj_node[a];
                    if (st.seen(v)) continue;
                    if (!edge_pass(g.adj_elem[a])) continue;
                    if (!node_pass(v)) continue;
                    st.epoch_of[v] = st.epoch;
                    st.comp[v] = cid;
                    bfs_queue.push_back(v);
                }
            }
            st.crossing.push_back(crossing ? 1 : 0);
            if (crossing) ++st.crossing_clusters;
        }
    }

    // max vertex-disjoint inner->outer paths within one color subgraph,
    // restricted to the visited (ring-attached) nodes
    template <typename EdgePass, typename NodePass>
    int width(const AnnulusGraph& g, const ColorState& st, int limit, EdgePass&& edge_pass,
              NodePass&& node_pass) {
        if (int(st.crossing_clusters) >= limit) return limit;
        flow.reset(g.nodes);
        for (std::uint32_t u : st.visited_nodes) {
            if (!st.crossing[st.comp[u]]) continue; // only crossing clusters matter
            flow.enable_node(u);
            if (g.inner[u]) flow.add_source(u);
            if (g.outer[u]) flow.add_sink(u);
        }
        for (std::uint32_t u : st.visited_nodes) {
            if (!st.crossing[st.comp[u]]) continue;
            for (std::uint32_t a = g.adj_start[u]; a < g.adj_start[u + 1]; ++a) {
                std::uint32_t v = g.adj_node[a];
                if (v < u) continue; // one direction per undirected edge
                if (!st.seen(v) || !st.crossing[st.comp[v]]) continue;
                if (!edge_pass(g.adj_elem[a])) continue;
                if (!node_pass(v) || !node_pass(u)) continue;
                flow.add_edge(u, v);
            }
        }
        return flow.max_paths(limit);
    }

    // alternating (O,V,O,V): four crossing clusters, pairwise distinct within
    // each color, interleaved along the inner ring
    bool find_alternating() {
        items.clear();
        long walk = 0;
        for (const RingItem& ri : ring_scan) {
            ++walk; // strictly increasing scan index = cyclic order
            ArmColor color;
            std::uint64_t cluster;
            if (site_lattice) {
                const ColorState* st = nullptr;
                if (occ_state.seen(ri.node) ) st = &occ_state;
                if (vac_state.seen(ri.node)) st = &vac_state;
                if (!st) continue;
                color = (st == &occ_state) ? ArmColor::Occupied : ArmColor::Vacant;
                if (!st->crossing[st->comp[ri.node]]) continue;
                cluster = st->comp[ri.node];
            } else {
                if (ri.medium == 0) {
                    if (!occ_state.seen(ri.node) || !occ_state.crossing[occ_state.comp[ri.node]])
                        continue;
                    color = ArmColor::Occupied;
                    cluster = occ_state.comp[ri.node];
                } else {
                    if (!vac_state.seen(ri.node) || !vac_state.crossing[vac_state.comp[ri.node]])
                        continue;
                    color = ArmColor::Vacant;
                    cluster = vac_state.comp[ri.node];
                }
            }
            cluster = (cluster << 1) | (color == ArmColor::Vacant ? 1u : 0u);
            items.push_back({walk, ri.medium, color, cluster});
        }
        const std::size_t len = items.size();
        if (len < 4) return false;
        auto item = [&](std::size_t idx) -> const Item& { return items[idx % len]; };
        for (std::size_t a = 0; a < len; ++a) {
            if (item(a).color != ArmColor::Occupied) continue;
            // first two distinct vacant clusters after a
            std::uint64_t cand[2];
            std::size_t cand_pos[2];
            int ncand = 0;
            for (std::size_t b = a + 1; b < a + len && ncand < 2; ++b) {
                if (item(b).color != ArmColor::Vacant) continue;
                if (ncand == 1 && item(b).cluster == cand[0]) continue;
                cand[ncand] = item(b).cluster;
                cand_pos[ncand] = b;
                ++ncand;
            }
            for (int ci = 0; ci < ncand; ++ci) {
                // earliest occupied item with a different cluster after b
                std::size_t c = cand_pos[ci] + 1;
                for (; c < a + len; ++c)
                    if (item(c).color == ArmColor::Occupied && item(c).cluster != item(a).cluster)
                        break;
                if (c >= a + len) continue;
                for (std::size_t d = c + 1; d < a + len; ++d)
                    if (item(d).color == ArmColor::Vacant && item(d).cluster != cand[ci])
                        return true;
            }
        }
        return false;
    }

    template <typename StateFn>
    bool run(StateFn&& occupied) {
        auto edge_occ = [&](ElementId e) { return occupied(e); };
        auto edge_vac = [&](ElementId e) { return !occupied(e); };
        auto node_any = [](std::uint32_t) { return true; };

        if (site_lattice) {
            auto edge_any = [](ElementId) { return true; };
            auto node_occ = [&](std::uint32_t v) { return occupied(sites.node_elem[v]); };
            auto node_vac = [&](std::uint32_t v) { return !occupied(sites.node_elem[v]); };
            if (need_occ > 0) grow(sites, occ_state, edge_any, node_occ);
            if (need_vac > 0) grow(sites, vac_state, edge_any, node_vac);
            switch (pattern) {
                case PatternClass::Mono:
                    return need_occ > 0
                               ? width(sites, occ_state, need_occ, edge_any, node_occ) >= need_occ
                               : width(sites, vac_state, need_vac, edge_any, node_vac) >= need_vac;
                case PatternClass::MixedWidths:
                    return width(sites, occ_state, need_occ, edge_any, node_occ) >= need_occ &&
                           width(sites, vac_state, need_vac, edge_any, node_vac) >= need_vac;
                case PatternClass::Alternating22:
                    return find_alternating();
                default:
                    return false;
            }
        }

        if (need_occ > 0) grow(primal, occ_state, edge_occ, node_any);
        if (need_vac > 0) grow(dual, vac_state, edge_vac, node_any);
        switch (pattern) {
            case PatternClass::Mono:
                return need_occ > 0
                           ? width(primal, occ_state, need_occ, edge_occ, node_any) >= need_occ
                           : width(dual, vac_state, need_vac, edge_vac, node_any) >= need_vac;
            case PatternClass::MixedWidths:
                return width(primal, occ_state, need_occ, edge_occ, node_any) >= need_occ &&
                       width(dual, vac_state, need_vac, edge_vac, node_any) >= need_vac;
            default:
                return false;
        }
    }
};

ArmDetector::ArmDetector(const LatticeSpec& spec, const ArmSpec& arm)
    : arm_(arm), impl_(std::make_unique<Impl>(spec, arm)) {}
ArmDetector::~ArmDetector() = default;
ArmDetector::ArmDetector(ArmDetector&&) noexcept = default;

bool ArmDetector::evaluate(const Configuration& cfg) {
    return impl_->run([&](ElementId e) { return cfg.get(e); });
}

bool ArmDetector::evaluate(const BernoulliField& field) {
    return impl_->run([&](ElementId e) { return field.occupied(e); });
}

bool arm_event(const Configuration& cfg, const ArmSpec& arm) {
    ArmDetector det(cfg.spec(), arm);
    return det.evaluate(cfg);
}

Estimate arm_probability(const LatticeSpec& spec, double p, const ArmSpec& arm,
                         std::int64_t samples, std::uint64_t master_seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");
    Accumulator acc = run_blocks<Accumulator>(
        samples, kDefaultBlock, [&](std::int64_t first, std::int64_t last, Accumulator& a) {
            ArmDetector det(spec, arm);
            for (std::int64_t i = first; i < last; ++i) {
                BernoulliField field(p, SeedSpec{master_seed, std::uint64_t(i)});
                a.add(det.evaluate(field) ? 1.0 : 0.0);
            }
        });
    return finalize(acc, SeedSpec{master_seed, 0});
}

// --- edge-centered events ---------------------------------------------------

namespace {

void require_edge_event(const LatticeSpec& spec, ElementId e, int radius) {
    if (spec.kind() != LatticeKind::SquareBond || spec.is_torus())
        throw std::invalid_argument("edge events are defined on the free square-bond lattice");
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    BondGeom g = spec.bond_geometry(e);
    const int n = spec.box_radius();
    if (std::abs(g.v1.x) + radius > n || std::abs(g.v1.y) + radius > n)
        throw std::invalid_argument("edge too close to the box boundary for this radius");
}

// 2 vertex-disjoint occupied paths from the endpoints of e (e deleted) to the
// relative ring at `radius` around v1(e); limit=1 with `single_from_v1` asks
// only for the v1 arm.
int primal_arm_count(const Configuration& cfg, ElementId e, int radius, int limit,
                     bool single_from_v1, DisjointPathFlow& flow) {
    const LatticeSpec& spec = cfg.spec();
    BondGeom g = spec.bond_geometry(e);
    const Vertex c = g.v1;
    const int side = 2 * radius + 1;
    auto local = [&](Vertex v) {
        return std::uint32_t((v.y - c.y + radius) * side + (v.x - c.x + radius));
    };
    auto rel_norm = [&](Vertex v) {
        return std::max(std::abs(v.x - c.x), std::abs(v.y - c.y));
    };
    flow.reset(std::uint32_t(side) * std::uint32_t(side));
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            Vertex v{c.x + dx, c.y + dy};
            flow.enable_node(local(v));
            if (rel_norm(v) == radius) flow.add_sink(local(v));
            for (int hdir = 0; hdir < 2; ++hdir) {
                const bool horizontal = hdir == 0;
                Vertex w = horizontal ? Vertex{v.x + 1, v.y} : Vertex{v.x, v.y + 1};
                if (rel_norm(w) > radius) continue;
                ElementId b = spec.bond_id(v, horizontal);
                if (b == e || !cfg.get(b)) continue;
                flow.add_edge(local(v), local(w));
            }
        }
    }
    flow.add_source(local(g.v1));
    if (!single_from_v1) flow.add_source(local(g.v2));
    return flow.max_paths(limit);
}

// 2 vertex-disjoint vacant dual paths from the endpoints of e* (e* deleted)
// to the dual ring just outside the relative box.
int dual_arm_count(const Configuration& cfg, ElementId e, int radius, int limit,
                   DisjointPathFlow& flow) {
    const LatticeSpec& spec = cfg.spec();
    BondGeom g = spec.bond_geometry(e);
    const Vertex c = g.v1;
    // dual vertices d with d.i - c.x in [-radius-1, radius], same for j
    const int dside = 2 * radius + 2;
    auto local = [&](DualVertex d) {
        return std::uint32_t((d.j - c.y + radius + 1) * dside + (d.i - c.x + radius + 1));
    };
    auto rel_norm2 = [&](DualVertex d) {
        return std::max(std::abs(2 * (d.i - c.x) + 1), std::abs(2 * (d.j - c.y) + 1));
    };
    const int ring2 = 2 * radius + 1;
    flow.reset(std::uint32_t(dside) * std::uint32_t(dside));
    for (int j = c.y - radius - 1; j <= c.y + radius; ++j) {
        for (int i = c.x - radius - 1; i <= c.x + radius; ++i) {
            DualVertex d{i, j};
            flow.enable_node(local(d));
            if (rel_norm2(d) == ring2) flow.add_sink(local(d));
            for (int step = 0; step < 2; ++step) {
                const bool right = step == 0;
                DualVertex w = right ? DualVertex{i + 1, j} : DualVertex{i, j + 1};
                if (w.i > c.x + radius || w.j > c.y + radius) continue;
                ElementId crossed;
                if (!spec.dual_step_crosses(d, right, crossed)) continue;
                // crossed bond must lie within the relative box
                BondGeom cb = spec.bond_geometry(crossed);
                if (std::max(std::abs(cb.v1.x - c.x), std::abs(cb.v1.y - c.y)) > radius ||
                    std::max(std::abs(cb.v2.x - c.x), std::abs(cb.v2.y - c.y)) > radius)
                    continue;
                if (crossed == e || cfg.get(crossed)) continue;
                flow.add_edge(local(d), local(w));
            }
        }
    }
    DualBond estar = spec.dual_bond_of(e);
    flow.add_source(local(estar.d1));
    flow.add_source(local(estar.d2));
    return flow.max_paths(limit);
}

} // namespace

bool edge_four_arm(const Configuration& cfg, ElementId e, int radius) {
    require_edge_event(cfg.spec(), e, radius);
    DisjointPathFlow flow;
    if (dual_arm_count(cfg, e, radius, 2, flow) < 2) return false;
    return primal_arm_count(cfg, e, radius, 2, false, flow) >= 2;
}

bool edge_three_arm(const Configuration& cfg, ElementId e, int radius) {
    require_edge_event(cfg.spec(), e, radius);
    DisjointPathFlow flow;
    if (dual_arm_count(cfg, e, radius, 2, flow) < 2) return false;
    return primal_arm_count(cfg, e, radius, 1, true, flow) >= 1;
}

namespace {

Estimate edge_event_probability(const LatticeSpec& spec, double p, ElementId e, int radius,
                                bool four, std::int64_t samples, std::uint64_t master_seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");
    require_edge_event(spec, e, radius);
    Accumulator acc = run_blocks<Accumulator>(
        samples, kDefaultBlock, [&](std::int64_t first, std::int64_t last, Accumulator& a) {
            Configuration cfg(spec);
            const std::int64_t E = spec.element_count();
            for (std::int64_t i = first; i < last; ++i) {
                BernoulliField field(p, SeedSpec{master_seed, std::uint64_t(i)});
                for (std::int64_t el = 0; el < E; ++el)
                    cfg.set(ElementId(el), field.occupied(ElementId(el)));
                bool hit = four ? edge_four_arm(cfg, e, radius) : edge_three_arm(cfg, e, radius);
                a.add(hit ? 1.0 : 0.0);
            }
        });
    return finalize(acc, SeedSpec{master_seed, 0});
}

} // namespace

Estimate edge_four_arm_probability(const LatticeSpec& spec, double p, ElementId e, int radius,
                                   std::int64_t samples, std::uint64_t master_seed) {
    return edge_event_probability(spec, p, e, radius, true, samples, master_seed);
}

Estimate edge_three_arm_probability(const LatticeSpec& spec, double p, ElementId e, int radius,
                                    std::int64_t samples, std::uint64_t master_seed) {
    return edge_event_probability(spec, p, e, radius, false, samples, master_seed);
}

} // namespace perc
