#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "perc/lattice.hpp"
#include "perc/rng.hpp"

namespace perc {

class Configuration;
using ConfigValue = std::function<std::int64_t(const Configuration&)>;
using ConfigPredicate = std::function<bool(const Configuration&)>;

// Hard resource guards (e.g. the 24-element enumeration cap) fail loudly and
// distinctly from ordinary argument errors.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Packed occupancy, one bit per element (1 = occupied).
class Configuration {
  public:
    explicit Configuration(const LatticeSpec& spec)
        : spec_(spec),
          nbits_(std::size_t(spec.element_count())),
          words_((nbits_ + 63) / 64, 0) {}

    const LatticeSpec& spec() const { return spec_; }
    std::size_t size() const { return nbits_; }

    bool get(ElementId e) const { return (words_[e >> 6] >> (e & 63)) & 1; }

    void set(ElementId e, bool occupied) {
        std::uint64_t mask = std::uint64_t(1) << (e & 63);
        if (occupied)
            words_[e >> 6] |= mask;
        else
            words_[e >> 6] &= ~mask;
    }

    void flip(ElementId e) { words_[e >> 6] ^= std::uint64_t(1) << (e & 63); }

    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    void fill_all() {
        std::fill(words_.begin(), words_.end(), ~std::uint64_t(0));
        trim();
    }

    std::int64_t occupied_count() const {
        std::int64_t c = 0;
        for (std::uint64_t w : words_) c += __builtin_popcountll(w);
        return c;
    }

    // Low bits = element 0. Only valid for <= 64 elements.
    std::uint64_t as_bits() const {
        if (nbits_ > 64) throw std::logic_error("configuration too large for as_bits");
        return words_.empty() ? 0 : words_[0];
    }

    void set_bits(std::uint64_t bits) {
        if (nbits_ > 64) throw std::logic_error("configuration too large for set_bits");
        words_[0] = bits;
        trim();
    }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.words_ == b.words_;
    }

  private:
    void trim() {
        if (nbits_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t(1) << (nbits_ % 64)) - 1;
    }

    LatticeSpec spec_;
    std::size_t nbits_;
    std::vector<std::uint64_t> words_;
};

// Stateless Bernoulli(p) field over the elements of a spec: bit i of the
// stream is a pure function of (seed, i). Usable without materializing a
// Configuration (lazy cluster growth reads single elements).
class BernoulliField {
  public:
    BernoulliField(double p, SeedSpec seed)
        : rng_(seed), coin_(valid_p(p)) {}

    bool occupied(ElementId e) const { return coin_(rng_.at(e)); }

  private:
    static double valid_p(double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");
        return p;
    }
    CounterRng rng_;
    BernoulliThreshold coin_;
};

inline Configuration sample(const LatticeSpec& spec, double p, SeedSpec seed) {
    BernoulliField field(p, seed);
    Configuration cfg(spec);
    const std::int64_t E = spec.element_count();
    for (std::int64_t e = 0; e < E; ++e)
        if (field.occupied(ElementId(e))) cfg.set(ElementId(e), true);
    return cfg;
}

constexpr std::int64_t kEnumerationGuard = 24;

// All 2^E configurations in increasing integer order of the bit pattern.
template <typename Fn>
void enumerate_all(const LatticeSpec& spec, Fn&& fn) {
    const std::int64_t E = spec.element_count();
    if (E > kEnumerationGuard)
        throw GuardError("enumeration guard: element count exceeds 24");
    Configuration cfg(spec);
    const std::uint64_t total = std::uint64_t(1) << E;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        cfg.set_bits(bits);
        fn(cfg);
    }
}

// Uniformly random permutation of the element ids (Fisher-Yates driven by
// the seed's counter stream; domain-tagged so it never collides with the
// Bernoulli draws of the same stream).
inline std::vector<ElementId> occupancy_sequence(const LatticeSpec& spec, SeedSpec seed) {
    const std::int64_t E = spec.element_count();
    std::vector<ElementId> perm(static_cast<std::size_t>(E));
    for (std::int64_t i = 0; i < E; ++i) perm[std::size_t(i)] = ElementId(i);
    SequentialRng rng{CounterRng(seed, /*domain_tag=*/0x7065726dULL)}; // "perm"
    for (std::int64_t i = E - 1; i > 0; --i) {
        std::uint64_t j = rng.next_below(std::uint64_t(i) + 1);
        std::swap(perm[std::size_t(i)], perm[std::size_t(j)]);
    }
    return perm;
}

} // namespace perc
