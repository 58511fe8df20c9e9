#pragma once

#include <cstdint>

namespace perc {

// Counter-based generator: every draw is a pure function of
// (master_seed, stream_index, counter), so any bit of any replicate can be
// recomputed without sequential state. One stream per Monte Carlo replicate.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

namespace detail {

// splitmix64 finalizer (Stafford mix13)
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

} // namespace detail

// Keyed counter stream. stream_key() folds (master, stream) once; draws are
// splitmix64 over the counter.
class CounterRng {
  public:
    CounterRng(SeedSpec seed, std::uint64_t domain_tag = 0)
        : key_(stream_key(seed, domain_tag)) {}

    std::uint64_t at(std::uint64_t counter) const {
        return detail::mix64(key_ + detail::kGolden * counter);
    }

    // uniform in [0, 1)
    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
    }

    static std::uint64_t stream_key(SeedSpec seed, std::uint64_t domain_tag) {
        std::uint64_t h = detail::mix64(seed.master_seed + detail::kGolden);
        h = detail::mix64(h ^ (seed.stream_index + 0x243f6a8885a308d3ULL));
        if (domain_tag != 0) h = detail::mix64(h ^ (domain_tag * detail::kGolden));
        return h;
    }

  private:
    std::uint64_t key_;
};

// Sequential convenience wrapper over a counter stream (used where draws are
// inherently ordered, e.g. shuffles). Still replayable: state is the counter.
class SequentialRng {
  public:
    explicit SequentialRng(CounterRng rng) : rng_(rng) {}

    std::uint64_t next() { return rng_.at(counter_++); }

    // unbiased bounded draw (Lemire with rejection)
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t x = next();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t t = (0 - bound) % bound; // 2^64 mod bound
            while (lo < t) {
                x = next();
                m = static_cast<unsigned __int128>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
};

// Bernoulli(p) by 64-bit threshold comparison. p is quantized to the double
// grid; the resulting bias is far below any tolerance used here.
class BernoulliThreshold {
  public:
    explicit BernoulliThreshold(double p) {
        if (p <= 0.0) {
            always_false_ = true;
        } else if (p >= 1.0) {
            always_true_ = true;
        } else {
            threshold_ = static_cast<std::uint64_t>(p * 0x1.0p64);
        }
    }

    bool operator()(std::uint64_t raw) const {
        if (always_true_) return true;
        if (always_false_) return false;
        return raw < threshold_;
    }

  private:
    std::uint64_t threshold_ = 0;
    bool always_true_ = false;
    bool always_false_ = false;
};

} // namespace perc
