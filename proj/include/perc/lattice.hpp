#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace perc {

enum class LatticeKind { SquareBond, TriangularSite };
enum class BoundaryMode { Free, Torus };

using ElementId = std::uint32_t;
using VertexId = std::uint32_t;

struct Vertex {
    int x = 0;
    int y = 0;
    friend bool operator==(Vertex a, Vertex b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(Vertex a, Vertex b) { return !(a == b); }
};

// Dual vertex (i,j) stands for the point (i+1/2, j+1/2). Square-bond, free
// boundary only.
struct DualVertex {
    int i = 0;
    int j = 0;
    friend bool operator==(DualVertex a, DualVertex b) { return a.i == b.i && a.j == b.j; }
};

struct BondGeom {
    Vertex v1; // left (horizontal) or lower (vertical) endpoint
    Vertex v2; // right or upper endpoint
    bool horizontal = true;
};

struct DualBond {
    DualVertex d1; // left or lower dual endpoint
    DualVertex d2;
    bool horizontal = true; // orientation of the dual bond itself
};

struct NeighborList {
    std::array<Vertex, 6> v{};
    int count = 0;
};

// Box B(n) = [-n,n]^2 with free boundary, or an LxL torus. The triangular
// lattice lives on the square grid with (+1,+1)/(-1,-1) diagonals added;
// that diagonal choice is fixed here and used everywhere.
class LatticeSpec {
  public:
    static LatticeSpec free_box(LatticeKind kind, int n) {
        if (n < 1) throw std::invalid_argument("box radius must be >= 1");
        LatticeSpec s;
        s.kind_ = kind;
        s.boundary_ = BoundaryMode::Free;
        s.n_ = n;
        s.side_ = 2 * n + 1;
        return s;
    }

    static LatticeSpec torus(LatticeKind kind, int L) {
        if (L < 3) throw std::invalid_argument("torus side must be >= 3");
        LatticeSpec s;
        s.kind_ = kind;
        s.boundary_ = BoundaryMode::Torus;
        s.n_ = 0;
        s.side_ = L;
        return s;
    }

    LatticeKind kind() const { return kind_; }
    BoundaryMode boundary() const { return boundary_; }
    bool is_torus() const { return boundary_ == BoundaryMode::Torus; }
    int box_radius() const { return n_; }
    int side() const { return side_; }

    std::int64_t vertex_count() const { return std::int64_t(side_) * side_; }

    std::int64_t element_count() const {
        if (kind_ == LatticeKind::TriangularSite) return vertex_count();
        if (is_torus()) return 2 * vertex_count();
        return std::int64_t(2) * side_ * (side_ - 1); // horizontal + vertical
    }

    bool in_box(Vertex v) const {
        if (is_torus()) return v.x >= 0 && v.x < side_ && v.y >= 0 && v.y < side_;
        return v.x >= -n_ && v.x <= n_ && v.y >= -n_ && v.y <= n_;
    }

    VertexId vertex_index(Vertex v) const {
        if (is_torus()) return VertexId(v.y * side_ + v.x);
        return VertexId((v.y + n_) * side_ + (v.x + n_));
    }

    Vertex vertex_at(VertexId id) const {
        int x = int(id) % side_;
        int y = int(id) / side_;
        if (is_torus()) return {x, y};
        return {x - n_, y - n_};
    }

    Vertex wrap(Vertex v) const {
        if (!is_torus()) return v;
        auto m = [this](int a) { return ((a % side_) + side_) % side_; };
        return {m(v.x), m(v.y)};
    }

    NeighborList neighbors(Vertex v) const {
        if (!in_box(v)) throw std::invalid_argument("vertex outside box");
        static constexpr std::array<Vertex, 6> offs = {
            Vertex{1, 0}, Vertex{-1, 0}, Vertex{0, 1},
            Vertex{0, -1}, Vertex{1, 1}, Vertex{-1, -1}};
        const int deg = (kind_ == LatticeKind::TriangularSite) ? 6 : 4;
        NeighborList out;
        for (int k = 0; k < deg; ++k) {
            Vertex w{v.x + offs[k].x, v.y + offs[k].y};
            if (is_torus()) {
                out.v[out.count++] = wrap(w);
            } else if (in_box(w)) {
                out.v[out.count++] = w;
            }
        }
        return out;
    }

    // --- bond indexing (SquareBond) ------------------------------------

    // Free mode: horizontal bonds first, row-major by (y, x of the left
    // endpoint); then vertical bonds row-major by (y of lower endpoint, x).
    // Torus: Right bonds indexed by vertex, then Up bonds.
    ElementId bond_id(Vertex v, bool horizontal) const {
        require_bond_kind();
        if (is_torus()) {
            VertexId vi = vertex_index(wrap(v));
            return horizontal ? vi : ElementId(vertex_count() + vi);
        }
        if (horizontal) {
            if (v.x < -n_ || v.x >= n_ || v.y < -n_ || v.y > n_)
                throw std::invalid_argument("horizontal bond outside box");
            return ElementId((v.y + n_) * (side_ - 1) + (v.x + n_));
        }
        if (v.y < -n_ || v.y >= n_ || v.x < -n_ || v.x > n_)
            throw std::invalid_argument("vertical bond outside box");
        const std::int64_t H = std::int64_t(side_) * (side_ - 1);
        return ElementId(H + (v.y + n_) * side_ + (v.x + n_));
    }

    BondGeom bond_geometry(ElementId id) const {
        require_bond_kind();
        BondGeom g;
        if (is_torus()) {
            const std::int64_t V = vertex_count();
            g.horizontal = id < V;
            Vertex v = vertex_at(VertexId(id % V));
            g.v1 = v;
            g.v2 = g.horizontal ? wrap({v.x + 1, v.y}) : wrap({v.x, v.y + 1});
            return g;
        }
        const std::int64_t H = std::int64_t(side_) * (side_ - 1);
        if (id < H) {
            g.horizontal = true;
            int y = int(id) / (side_ - 1) - n_;
            int x = int(id) % (side_ - 1) - n_;
            g.v1 = {x, y};
            g.v2 = {x + 1, y};
        } else {
            g.horizontal = false;
            std::int64_t r = id - H;
            int y = int(r) / side_ - n_;
            int x = int(r) % side_ - n_;
            g.v1 = {x, y};
            g.v2 = {x, y + 1};
        }
        return g;
    }

    // --- planar duality (SquareBond, free boundary) ---------------------

    // b* crosses b: a horizontal bond has a vertical dual bond and vice
    // versa. Dual vertices live on the (2n+2)^2 grid i,j in [-n-1, n].
    DualBond dual_bond_of(ElementId id) const {
        require_free_bond();
        BondGeom g = bond_geometry(id);
        DualBond d;
        if (g.horizontal) {
            d.horizontal = false;
            d.d1 = {g.v1.x, g.v1.y - 1};
            d.d2 = {g.v1.x, g.v1.y};
        } else {
            d.horizontal = true;
            d.d1 = {g.v1.x - 1, g.v1.y};
            d.d2 = {g.v1.x, g.v1.y};
        }
        return d;
    }

    ElementId primal_bond_of(DualBond d) const {
        require_free_bond();
        if (d.horizontal) {
            // crosses the vertical primal bond (d2.i, d2.j)-(d2.i, d2.j+1)
            return bond_id({d.d2.i, d.d2.j}, false);
        }
        return bond_id({d.d2.i, d.d2.j}, true);
    }

    int dual_grid_side() const { return side_ + 1; }

    std::uint32_t dual_vertex_index(DualVertex d) const {
        const int s = dual_grid_side();
        return std::uint32_t((d.j + n_ + 1) * s + (d.i + n_ + 1));
    }

    DualVertex dual_vertex_at(std::uint32_t id) const {
        const int s = dual_grid_side();
        return {int(id) % s - n_ - 1, int(id) / s - n_ - 1};
    }

    bool dual_in_grid(DualVertex d) const {
        return d.i >= -n_ - 1 && d.i <= n_ && d.j >= -n_ - 1 && d.j <= n_;
    }

    // Primal bond crossed by the dual-grid bond from d in direction
    // (Right: di=1) or (Up: dj=1). Returns false if that bond lies outside
    // B(n); such dual bonds are treated as unconditionally vacant.
    bool dual_step_crosses(DualVertex d, bool step_right, ElementId& out) const {
        require_free_bond();
        if (step_right) {
            // (d.i,d.j)-(d.i+1,d.j) crosses vertical bond (d.i+1, d.j)-(d.i+1, d.j+1)
            Vertex lo{d.i + 1, d.j};
            if (lo.x < -n_ || lo.x > n_ || lo.y < -n_ || lo.y >= n_) return false;
            out = bond_id(lo, false);
            return true;
        }
        // (d.i,d.j)-(d.i,d.j+1) crosses horizontal bond (d.i, d.j+1)-(d.i+1, d.j+1)
        Vertex lo{d.i, d.j + 1};
        if (lo.x < -n_ || lo.x >= n_ || lo.y < -n_ || lo.y > n_) return false;
        out = bond_id(lo, true);
        return true;
    }

    // --- boundaries and annuli (free boundary) ---------------------------

    std::vector<Vertex> boundary_vertices() const {
        require_free();
        return ring_vertices(n_);
    }

    std::vector<Vertex> ring_vertices(int r) const {
        require_free();
        std::vector<Vertex> out;
        if (r == 0) {
            out.push_back({0, 0});
            return out;
        }
        for (int y = -r; y <= r; ++y)
            for (int x = -r; x <= r; ++x)
                if (std::max(std::abs(x), std::abs(y)) == r) out.push_back({x, y});
        return out;
    }

    // A(m,n') = {B(n') \ B(m)} together with the ring at radius m.
    std::vector<Vertex> annulus_vertices(int m, int nOuter) const {
        require_free();
        if (m < 1 || m >= nOuter || nOuter > n_)
            throw std::invalid_argument("annulus radii must satisfy 1 <= m < n <= box radius");
        std::vector<Vertex> out;
        for (int y = -nOuter; y <= nOuter; ++y)
            for (int x = -nOuter; x <= nOuter; ++x) {
                int r = std::max(std::abs(x), std::abs(y));
                if (r >= m && r <= nOuter) out.push_back({x, y});
            }
        return out;
    }

  private:
    void require_bond_kind() const {
        if (kind_ != LatticeKind::SquareBond)
            throw std::logic_error("bond operation on a site lattice");
    }
    void require_free() const {
        if (is_torus()) throw std::logic_error("operation requires free boundary");
    }
    void require_free_bond() const {
        require_bond_kind();
        require_free();
    }

    LatticeKind kind_ = LatticeKind::SquareBond;
    BoundaryMode boundary_ = BoundaryMode::Free;
    int n_ = 1;
    int side_ = 3;
};

// Position of a point on the square ring max(|px|,|py|) = R, in doubled
// coordinates (primal vertex (x,y) -> (2x,2y), dual vertex -> (2i+1,2j+1)).
// Counterclockwise walk starting at the corner (R,-R); result in [0, 8R).
inline long ring_position_doubled(int px, int py, int R) {
    if (px == R && py < R) return long(py) + R;
    if (py == R && px > -R) return 2L * R + (R - px);
    if (px == -R && py > -R) return 4L * R + (R - py);
    if (py == -R && px < R) return 6L * R + (px + R);
    throw std::logic_error("point not on ring");
}

// Cyclic comparison of ring fractions pos/(8R) across rings of different
// radii; exact in integers. Ties (same angle) order primal before dual via
// the caller's tie key.
inline bool ring_fraction_less(long pos1, int r8_1, long pos2, int r8_2) {
    return std::int64_t(pos1) * r8_2 < std::int64_t(pos2) * r8_1;
}

} // namespace perc
