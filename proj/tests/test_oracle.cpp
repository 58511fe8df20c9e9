#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "perc/clusters.hpp"
#include "perc/observables.hpp"
#include "perc/oracle.hpp"
#include "perc/pivotal.hpp"

using namespace perc;

TEST_CASE("constant observable gives the constant polynomial") {
    auto spec = LatticeSpec::free_box(LatticeKind::TriangularSite, 1);
    ExactPoly one = exact_expectation(spec, [](const Configuration&) { return 1; });
    CHECK(one == ExactPoly::constant(1));
}

TEST_CASE("indicator evaluated at the endpoints matches the extreme configurations") {
    auto spec = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    ExactPoly p_full = exact_event_probability(
        spec, [](const Configuration& cfg) { return cfg.occupied_count() >= 6; });
    CHECK(p_full.eval(mpq_class(0)) == 0);
    CHECK(p_full.eval(mpq_class(1)) == 1);
}

TEST_CASE("cluster count polynomial on SquareBond n=1") {
    auto spec = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    UnionFind uf;
    ExactPoly m = exact_expectation(
        spec, [&](const Configuration& cfg) { return cluster_count(cfg, uf); });
    CHECK(m.degree() <= 12);
    CHECK(m.eval(mpq_class(0)) == 9);
    CHECK(m.eval(mpq_class(1)) == 1);

    // independent direct sum at p = 1/2: all 4096 configurations weigh 2^-12
    mpz_class total = 0;
    enumerate_all(spec, [&](const Configuration& cfg) { total += long(cluster_count(cfg, uf)); });
    mpq_class direct = mpq_class(total) / mpq_class(4096);
    CHECK(m.eval(mpq_class(1, 2)) == direct);
}

TEST_CASE("linearity of exact_expectation") {
    auto spec = LatticeSpec::free_box(LatticeKind::TriangularSite, 1);
    auto occ = [](const Configuration& cfg) { return cfg.occupied_count(); };
    auto ind = [](const Configuration& cfg) { return std::int64_t(cfg.get(4)); };
    ExactPoly a = exact_expectation(spec, occ);
    ExactPoly b = exact_expectation(spec, ind);
    ExactPoly combo = exact_expectation(spec, [&](const Configuration& cfg) {
        return 3 * occ(cfg) - 7 * ind(cfg);
    });
    CHECK(combo == a * mpq_class(3) - b * mpq_class(7));
}

TEST_CASE("derivative of a constant vanishes; factored form matches") {
    CHECK(ExactPoly::constant(5).derivative(1).is_zero());

    // d/dp [p^m (1-p)^(E-m)] == w * (m/p - (E-m)/(1-p)) at rational points
    const long E = 9, m = 4;
    std::vector<mpz_class> buckets(E + 1, mpz_class(0));
    buckets[m] = 1; // binomial factor intentionally absent: bare p^m(1-p)^(E-m)...
    // poly_from_buckets includes no C(E,m); it expands sum b_k p^k (1-p)^(E-k)
    ExactPoly w = poly_from_buckets(buckets, E);
    ExactPoly dw = w.derivative(1);
    for (int t = 1; t < 20; ++t) {
        mpq_class p(t, 21);
        p.canonicalize();
        mpq_class q = 1 - p;
        mpq_class expect = w.eval(p) * (mpq_class(m) / p - mpq_class(E - m) / q);
        CHECK(dw.eval(p) == expect);
    }
}

TEST_CASE("microcanonical bucket means at the deterministic ends") {
    auto spec = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    UnionFind uf;
    auto means = exact_bucket_means(
        spec, [&](const Configuration& cfg) { return cluster_count(cfg, uf); });
    CHECK(means[0] == 9);
    CHECK(means[12] == 1);
}

TEST_CASE("Russo identity: K'_n(p) = -sum_b P(E(b)) as exact polynomials") {
    auto spec = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    UnionFind uf;
    ExactPoly k = exact_expectation(
        spec, [&](const Configuration& cfg) { return cluster_count(cfg, uf); });
    ExactPoly pivot_sum = exact_expectation(spec, [&](const Configuration& cfg) {
        auto e = all_pivotal_connection(cfg);
        std::int64_t s = 0;
        for (auto v : e) s += v;
        return s;
    });
    CHECK((k.derivative(1) + pivot_sum) == ExactPoly());
}

TEST_CASE("Russo identity for an increasing event: d/dp P(LR) = sum_e P(e pivotal)") {
    auto spec = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    auto crossing = [](const Configuration& cfg) {
        return has_crossing(cfg, CrossingOrientation::LeftRight, CrossingMedium::OccupiedPrimal);
    };
    ExactPoly lhs = exact_event_probability(spec, crossing).derivative(1);
    ExactPoly rhs = exact_expectation(spec, [&](const Configuration& cfg) {
        return pivotal_edges(cfg, crossing).count;
    });
    CHECK(lhs == rhs);
}

TEST_CASE("generalized Russo for a decreasing-increasing pair") {
    // A = E(b0) (decreasing), B = left-right crossing (increasing):
    // d/dp P(A and B) = sum_f [ P(f piv B, not A, A occurs)
    //                           - P(f piv A, not B, B occurs) ]
    auto spec = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    ElementId b0 = spec.bond_id({0, 0}, true);
    auto eventA = [b0](const Configuration& cfg) { return pivotal_for_connection(cfg, b0); };
    auto eventB = [](const Configuration& cfg) {
        return has_crossing(cfg, CrossingOrientation::LeftRight, CrossingMedium::OccupiedPrimal);
    };
    ExactPoly lhs = exact_event_probability(spec, [&](const Configuration& cfg) {
                        return eventA(cfg) && eventB(cfg);
                    }).derivative(1);
    ExactPoly rhs = exact_expectation(spec, [&](const Configuration& cfg) {
        PivotalPairReport rep = pivotal_pair(cfg, eventA, eventB);
        std::int64_t s = 0;
        for (std::size_t f = 0; f < rep.pivotal_a.size(); ++f) {
            if (rep.pivotal_b[f] && !rep.pivotal_a[f] && rep.a_occurs) s += 1;
            if (rep.pivotal_a[f] && !rep.pivotal_b[f] && rep.b_occurs) s -= 1;
        }
        return s;
    });
    CHECK(lhs == rhs);
}

TEST_CASE("matching polynomial: antisymmetry, zero at 1/2, stabilized coefficients") {
    auto tri = matching_polynomial(LatticeKind::TriangularSite, {3, 4});
    for (const ExactPoly& g : tri.per_size) {
        CHECK(g.compose_one_minus_p() == (g * mpq_class(-1))); // g(p) = -g(1-p)
        CHECK(g.eval(mpq_class(1, 2)) == 0);
    }
    // stabilized identity: p - 3p^2 + 2p^3 = p(1-p)(1-2p)
    CHECK(tri.stabilized.coeff(0) == 0);
    CHECK(tri.stabilized.coeff(1) == 1);
    CHECK(tri.stabilized.coeff(2) == -3);
    CHECK(tri.stabilized.coeff(3) == 2);
    CHECK(tri.stabilized.degree() == 3);
    for (double r : tri.residual_sup) CHECK(r < 0.15); // finite-size + wrap corrections

    auto sq = matching_polynomial(LatticeKind::SquareBond, {3});
    CHECK(sq.stabilized.coeff(0) == 1);
    CHECK(sq.stabilized.coeff(1) == -2);
    CHECK(sq.stabilized.degree() == 1); // 1 - 2p
    CHECK(sq.per_size[0].eval(mpq_class(1, 2)) == 0);
}

TEST_CASE("probability polynomials stay in [0,1] on a rational grid") {
    auto spec = LatticeSpec::free_box(LatticeKind::TriangularSite, 1);
    ExactPoly prob = exact_event_probability(spec, [](const Configuration& cfg) {
        return cfg.get(4) && cfg.occupied_count() >= 3;
    });
    for (int t = 0; t <= 24; ++t) {
        mpq_class p(t, 24);
        p.canonicalize();
        mpq_class v = prob.eval(p);
        CHECK(v >= 0);
        CHECK(v <= 1);
    }
}

TEST_CASE("enumeration guard is a hard error") {
    auto spec = LatticeSpec::free_box(LatticeKind::SquareBond, 2);
    CHECK_THROWS(exact_expectation(spec, [](const Configuration&) { return 1; }));
}
