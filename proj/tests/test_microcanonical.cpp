#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "perc/clusters.hpp"
#include "perc/microcanonical.hpp"
#include "perc/oracle.hpp"
#include "perc/pivotal.hpp"

#include <cmath>

using namespace perc;

namespace {

MicrocanonicalCurve exact_curve(const LatticeSpec& spec) {
    UnionFind uf;
    auto means = exact_bucket_means(
        spec, [&](const Configuration& cfg) { return cluster_count(cfg, uf); });
    MicrocanonicalCurve curve;
    curve.spec = spec;
    curve.replicates = 1;
    for (const mpq_class& m : means) curve.mean.push_back(m.get_d());
    curve.variance.assign(curve.mean.size(), 0.0);
    return curve;
}

} // namespace

TEST_CASE("sweep endpoints are deterministic") {
    auto sq = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    MicrocanonicalCurve c = sweep(sq, 16, 11);
    CHECK(c.mean[0] == 9.0);
    CHECK(c.mean[12] == 1.0);
    CHECK(c.variance[0] == 0.0);
    CHECK(c.variance[12] == 0.0);

    auto tri = LatticeSpec::free_box(LatticeKind::TriangularSite, 1);
    MicrocanonicalCurve ct = sweep(tri, 16, 11);
    CHECK(ct.mean[0] == 0.0);
    CHECK(ct.mean[9] == 1.0);
}

TEST_CASE("one insertion changes the bond cluster count by 0 or -1 along each path") {
    auto sq = LatticeSpec::free_box(LatticeKind::SquareBond, 3);
    for (std::uint64_t r = 0; r < 10; ++r) {
        MicrocanonicalCurve c = sweep(sq, 1, 3000 + r);
        for (std::size_t m = 0; m + 1 < c.mean.size(); ++m) {
            double d = c.mean[m + 1] - c.mean[m];
            CHECK(d <= 0.0);
            CHECK(d >= -1.0);
        }
    }
}

TEST_CASE("sweep averages match the exact microcanonical means at every m") {
    auto sq = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    MicrocanonicalCurve exact = exact_curve(sq);
    MicrocanonicalCurve mc = sweep(sq, 40000, 909);
    for (std::size_t m = 0; m < mc.mean.size(); ++m) {
        double sigma = std::sqrt(mc.variance[m] / double(mc.replicates));
        if (sigma == 0) {
            CHECK(mc.mean[m] == exact.mean[m]);
        } else {
            CHECK(std::abs(mc.mean[m] - exact.mean[m]) < 4 * sigma);
        }
    }
}

TEST_CASE("binomial weights: normalization and derivative sums") {
    for (std::int64_t E : {12LL, 5000LL}) {
        for (double p : {0.2, 0.5, 0.73}) {
            BinomialWeights w0 = binomial_weights(E, p, 0);
            double s0 = 0;
            for (double w : w0.w) s0 += w;
            CHECK(std::abs(s0 - 1.0) < 1e-12);
            for (int r = 1; r <= 4; ++r) {
                BinomialWeights wr = binomial_weights(E, p, r);
                double sr = 0, amax = 0;
                for (double w : wr.w) {
                    sr += w;
                    amax = std::max(amax, std::abs(w));
                }
                CHECK(std::abs(sr) < 1e-9 * std::max(1.0, amax));
            }
        }
    }
}

TEST_CASE("canonical_value reproduces the exact polynomial through the transform") {
    auto sq = LatticeSpec::free_box(LatticeKind::SquareBond, 1);
    UnionFind uf;
    ExactPoly k = exact_expectation(
        sq, [&](const Configuration& cfg) { return cluster_count(cfg, uf); });
    MicrocanonicalCurve curve = exact_curve(sq);

    CHECK(canonical_value(curve, 0.0, 0) == curve.mean[0]); // A_0 exactly

    for (double p : {0.2, 0.5, 0.8}) {
        double got = canonical_value(curve, p, 0);
        double expect = k.eval_double(p);
        CHECK(std::abs(got - expect) < 1e-12 * std::abs(expect));
    }
    for (int r : {1, 2, 3}) {
        double got = canonical_value(curve, 0.4, r);
        double expect = k.derivative(r).eval_double(0.4);
        CHECK(std::abs(got - expect) < 1e-9 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("canonical_value(r=0) per vertex is nonincreasing in p on the bond lattice") {
    auto sq = LatticeSpec::free_box(LatticeKind::SquareBond, 4);
    MicrocanonicalCurve curve = sweep(sq, 400, 2024);
    double prev = 2.0;
    for (int i = 1; i <= 19; ++i) {
        double p = i / 20.0;
        double v = canonical_value(curve, p, 0, /*per_vertex=*/true);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("profile stderr shrinks like replicates^(-1/2)") {
    auto sq = LatticeSpec::free_box(LatticeKind::SquareBond, 3);
    std::vector<double> logR, logSE;
    for (int R : {32, 64, 128, 256, 512, 1024}) {
        DerivativeProfile prof =
            kappa_derivative_profile(sq, {0.45}, 1, R, 777);
        logR.push_back(std::log(double(R)));
        logSE.push_back(std::log(prof.stderr_[0]));
    }
    double n = double(logR.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logR.size(); ++i) {
        sx += logR[i];
        sy += logSE[i];
        sxx += logR[i] * logR[i];
        sxy += logR[i] * logSE[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope + 0.5) < 0.1);
}

TEST_CASE("microcanonical first derivative agrees with the Lemma-3 estimator") {
    auto sq = LatticeSpec::free_box(LatticeKind::SquareBond, 8);
    const double p = 0.30;
    DerivativeProfile prof = kappa_derivative_profile(sq, {p}, 1, 20000, 1001);
    Estimate l3 = lemma3_estimator(sq, p, 20000, 1002);
    double sigma = std::sqrt(prof.stderr_[0] * prof.stderr_[0] + l3.stderr_ * l3.stderr_);
    CHECK(std::abs(prof.value[0] - l3.mean) < 4 * sigma);
}

TEST_CASE("third-derivative antisymmetry on a torus (matching identity, square bond)") {
    // kappa(p) - kappa(1-p) = 1 - 2p on the torus up to wrap terms of degree
    // >= L, so at p well below 1/2 the third derivatives cancel
    auto torus = LatticeSpec::torus(LatticeKind::SquareBond, 14);
    const double p = 0.25;
    DerivativeProfile prof = kappa_derivative_profile(torus, {p, 1 - p}, 3, 6000, 313);
    double sum = prof.value[0] + prof.value[1];
    double sigma = std::sqrt(prof.stderr_[0] * prof.stderr_[0] +
                             prof.stderr_[1] * prof.stderr_[1]);
    CHECK(std::abs(sum) < 4 * sigma + 1e-3);
}

TEST_CASE("derivative weights at the endpoints are guarded") {
    CHECK_THROWS(binomial_weights(10, 0.0, 1));
    CHECK_THROWS(binomial_weights(10, 1.0, 2));
    CHECK_THROWS(binomial_weights(10, 0.5, 5));
}
