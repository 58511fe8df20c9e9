#pragma once

#include <cmath>
#include <limits>
#include <cstdint>

#include "perc/rng.hpp"

namespace perc {

// (count, sum, sum of squares): merging is associative, so block results can
// be folded in a fixed order for bit-exact reproducibility.
struct Accumulator {
    std::int64_t count = 0;
    double sum = 0.0;
    double sumsq = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void add(double x) {
        ++count;
        sum += x;
        sumsq += x * x;
        if (x < min) min = x;
        if (x > max) max = x;
    }

    void merge(const Accumulator& o) {
        count += o.count;
        sum += o.sum;
        sumsq += o.sumsq;
        if (o.min < min) min = o.min;
        if (o.max > max) max = o.max;
    }
};

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t samples = 0;
    SeedSpec seed{};
};

inline Estimate finalize(const Accumulator& acc, SeedSpec seed) {
    Estimate e;
    e.samples = acc.count;
    e.seed = seed;
    if (acc.count == 0) return e;
    e.mean = acc.sum / double(acc.count);
    if (acc.count > 1 && acc.min != acc.max) { // degenerate spread: exact zero
        double var = (acc.sumsq - acc.sum * acc.sum / double(acc.count)) / double(acc.count - 1);
        if (var < 0) var = 0; // roundoff
        e.stderr_ = std::sqrt(var / double(acc.count));
    }
    return e;
}

// Wilson score interval bounds for a binomial proportion.
struct WilsonInterval {
    double lower = 0.0;
    double upper = 1.0;
};

inline WilsonInterval wilson_interval(std::int64_t hits, std::int64_t n, double z = 1.959963984540054) {
    WilsonInterval w;
    if (n <= 0) return w;
    const double phat = double(hits) / double(n);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / double(n);
    const double center = phat + z2 / (2.0 * double(n));
    const double rad = z * std::sqrt(phat * (1.0 - phat) / double(n) + z2 / (4.0 * double(n) * double(n)));
    w.lower = (center - rad) / denom;
    w.upper = (center + rad) / denom;
    return w;
}

} // namespace perc
