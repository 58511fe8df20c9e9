#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "perc/config.hpp"
#include "perc/lattice.hpp"

namespace perc {

// Polynomial in p with exact rational coefficients, index = power.
class ExactPoly {
  public:
    ExactPoly() = default;
    explicit ExactPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }

    static ExactPoly constant(const mpq_class& v) { return ExactPoly({v}); }

    int degree() const { return int(c_.size()) - 1; } // -1 for the zero polynomial
    const mpq_class& coeff(std::size_t k) const {
        static const mpq_class zero = 0;
        return k < c_.size() ? c_[k] : zero;
    }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    mpq_class eval(const mpq_class& p) const {
        mpq_class acc = 0;
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * p + c_[k];
        return acc;
    }
    double eval_double(double p) const {
        double acc = 0;
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * p + c_[k].get_d();
        return acc;
    }

    ExactPoly derivative(int r = 1) const;
    ExactPoly compose_one_minus_p() const; // q(p) = this(1-p)

    ExactPoly operator+(const ExactPoly& o) const;
    ExactPoly operator-(const ExactPoly& o) const;
    ExactPoly operator*(const mpq_class& s) const;
    friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.c_ == b.c_; }

    std::string to_string() const; // human-readable

    // (numerator, denominator) strings per coefficient, constant term first
    std::vector<std::array<std::string, 2>> coeff_fractions() const;

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<mpq_class> c_;
};

// Exact per-occupancy-count totals: bucket[k] = sum of value over all
// configurations with k occupied elements. The workhorse behind everything
// else here; enumeration is parallelized over the index range and the mpz
// accumulators merge exactly.
std::vector<mpz_class> exact_buckets(const LatticeSpec& spec, const ConfigValue& value);

// Sum over configurations of value * p^k (1-p)^(E-k), expanded exactly.
ExactPoly exact_expectation(const LatticeSpec& spec, const ConfigValue& value);
ExactPoly exact_event_probability(const LatticeSpec& spec, const ConfigPredicate& event);

// Exact microcanonical averages: bucket mean at each occupation count,
// i.e. bucket[k] / C(E,k).
std::vector<mpq_class> exact_bucket_means(const LatticeSpec& spec, const ConfigValue& value);

// Assemble sum_k b_k p^k (1-p)^(E-k) from per-count totals.
ExactPoly poly_from_buckets(const std::vector<mpz_class>& buckets, std::int64_t element_count);

// Exact E[M]/V as a polynomial (cluster count per vertex).
ExactPoly kappa_polynomial(const LatticeSpec& spec);

struct MatchingPolyReport {
    std::vector<int> sizes;
    std::vector<ExactPoly> per_size;   // g_L(p) = kappa_L(p) - kappa_L(1-p)
    ExactPoly stabilized;              // coefficients shared by the two largest sizes
    std::vector<double> residual_sup;  // sup_{grid} |g_L - stabilized| per size
};

// kappa_L(p) - kappa_L(1-p) on small tori; the identity's true low-degree
// polynomial is whatever stabilizes across sizes.
MatchingPolyReport matching_polynomial(LatticeKind kind, const std::vector<int>& torus_sides);

} // namespace perc
