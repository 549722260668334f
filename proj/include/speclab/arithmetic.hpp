#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "speclab/numeric.hpp"

namespace speclab {

/// A strictly increasing set of primes p_1 < p_2 < ... with exponents
/// d_j >= 1. Parameterizes every product model and every multiplicity
/// function in the workbench.
class PrimeSpec {
 public:
  PrimeSpec(std::vector<uint64_t> primes, std::vector<uint32_t> exponents)
      : primes_(std::move(primes)), exponents_(std::move(exponents)) {
    if (primes_.empty()) throw std::invalid_argument("PrimeSpec: empty prime list");
    if (primes_.size() != exponents_.size())
      throw std::invalid_argument("PrimeSpec: primes and exponents differ in length");
    for (std::size_t j = 0; j < primes_.size(); ++j) {
      if (!is_prime_u64(primes_[j]))
        throw std::invalid_argument("PrimeSpec: " + std::to_string(primes_[j]) +
                                    " is not prime");
      if (j > 0 && primes_[j - 1] >= primes_[j])
        throw std::invalid_argument("PrimeSpec: primes must be strictly increasing");
      if (exponents_[j] == 0)
        throw std::invalid_argument("PrimeSpec: exponents must be >= 1");
    }
  }

  static PrimeSpec with_unit_exponents(std::vector<uint64_t> primes) {
    std::vector<uint32_t> ones(primes.size(), 1);
    return PrimeSpec(std::move(primes), std::move(ones));
  }

  std::size_t size() const { return primes_.size(); }
  uint64_t prime(std::size_t j) const { return primes_.at(j); }
  uint32_t exponent(std::size_t j) const { return exponents_.at(j); }
  const std::vector<uint64_t>& primes() const { return primes_; }
  const std::vector<uint32_t>& exponents() const { return exponents_; }

  /// Modulus of coordinate j in the product model: m_j = p_j^{d_j}.
  Int modulus(std::size_t j) const { return int_pow(Int(prime(j)), exponent(j)); }

  bool contains(uint64_t p) const {
    return std::binary_search(primes_.begin(), primes_.end(), p);
  }

  bool coprime_to(const Int& n) const {
    for (uint64_t p : primes_)
      if (n % p == 0) return false;
    return true;
  }

 private:
  std::vector<uint64_t> primes_;
  std::vector<uint32_t> exponents_;
};

/// N = residual * prod hits, with the residual coprime to every prime of
/// the spec. Exponents are the true valuations of N, not capped by the
/// spec's d_j.
struct Factorization {
  std::vector<std::pair<uint64_t, uint32_t>> hits;  // (prime, exponent), ascending
  Int residual = 1;

  Int reassemble() const {
    Int n = residual;
    for (const auto& [p, e] : hits) n *= int_pow(Int(p), e);
    return n;
  }
};

inline Factorization factor_against(const Int& n, const PrimeSpec& spec) {
  if (n < 1) throw std::invalid_argument("factor_against: N must be >= 1");
  Factorization f;
  f.residual = n;
  for (uint64_t p : spec.primes()) {
    uint32_t e = 0;
    while (f.residual % p == 0) {
      f.residual /= p;
      ++e;
    }
    if (e > 0) f.hits.emplace_back(p, e);
  }
  return f;
}

/// The set {r, r+m, r+2m, ...}, or the empty set. Intersections of
/// congruence conditions stay in this class, so an unsatisfiable chain of
/// refinements is a value, not an error.
class ArithmeticProgression {
 public:
  ArithmeticProgression(Int residue, Int modulus)
      : residue_(std::move(residue)), modulus_(std::move(modulus)), empty_(false) {
    if (modulus_ < 1)
      throw std::invalid_argument("ArithmeticProgression: modulus must be >= 1");
    if (residue_ < 0)
      throw std::invalid_argument("ArithmeticProgression: residue must be >= 0");
    residue_ %= modulus_;
  }

  static ArithmeticProgression empty_set() {
    ArithmeticProgression ap(0, 1);
    ap.empty_ = true;
    return ap;
  }

  static ArithmeticProgression all_integers() { return ArithmeticProgression(0, 1); }

  bool empty() const { return empty_; }
  const Int& residue() const { return residue_; }
  const Int& modulus() const { return modulus_; }

  bool contains(const Int& n) const {
    if (empty_) return false;
    if (n < residue_) return false;
    return (n - residue_) % modulus_ == 0;
  }

  /// i-th member, counting from 0.
  Int member(uint64_t i) const {
    if (empty_) throw std::domain_error("ArithmeticProgression: empty progression has no members");
    return residue_ + Int(i) * modulus_;
  }

  /// Least member >= bound.
  Int first_at_least(const Int& bound) const {
    if (empty_) throw std::domain_error("ArithmeticProgression: empty progression has no members");
    if (residue_ >= bound) return residue_;
    Int steps = (bound - residue_ + modulus_ - 1) / modulus_;
    return residue_ + steps * modulus_;
  }

  bool operator==(const ArithmeticProgression& o) const {
    if (empty_ || o.empty_) return empty_ == o.empty_;
    return residue_ == o.residue_ && modulus_ == o.modulus_;
  }

 private:
  Int residue_;
  Int modulus_;
  bool empty_;
};

/// CRT intersection of two progressions. Incompatible congruences yield
/// the empty progression.
inline ArithmeticProgression refine_progression(const ArithmeticProgression& base,
                                                const ArithmeticProgression& extra) {
  if (base.empty() || extra.empty()) return ArithmeticProgression::empty_set();
  const Int &r1 = base.residue(), &m1 = base.modulus();
  const Int &r2 = extra.residue(), &m2 = extra.modulus();
  Int g = gcd(m1, m2);
  if ((r2 - r1) % g != 0) return ArithmeticProgression::empty_set();
  // r = r1 + m1 * t with m1 * t == r2 - r1 (mod m2); divide through by g.
  Int m2g = m2 / g;
  Int t = mod_floor(((r2 - r1) / g) * mod_inverse(m1 / g, m2g), m2g);
  Int lcm = m1 / g * m2;
  return ArithmeticProgression(mod_floor(r1 + m1 * t, lcm), lcm);
}

/// Exact solutions n of a*n == 1 (mod b), together with the companion
/// integer (a*n - 1)/b. Realizes the index alignment p_1...p_{k-1} n =
/// p_k n~ + 1 used throughout the weak-limit bookkeeping.
class AlignmentSolution {
 public:
  AlignmentSolution(Int a, Int b)
      : a_(std::move(a)),
        b_(std::move(b)),
        progression_(ArithmeticProgression::all_integers()) {
    if (a_ < 1 || b_ < 1)
      throw std::invalid_argument("AlignmentSolution: a and b must be positive");
    if (gcd(a_, b_) != 1)
      throw std::domain_error("solve_alignment: a*n == 1 (mod b) is unsolvable, gcd(" +
                              a_.str() + "," + b_.str() + ") > 1");
    progression_ = ArithmeticProgression(b_ == 1 ? Int(0) : mod_inverse(a_, b_), b_);
    // Companion is >= 0 from the first member with a*n >= 1; member 0 only
    // fails that when b = 1 admits n = 0.
    n_min_ = progression_.first_at_least(1);
  }

  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const ArithmeticProgression& progression() const { return progression_; }
  const Int& n_min() const { return n_min_; }

  Int companion(const Int& n) const {
    if (!progression_.contains(n))
      throw std::invalid_argument("companion: n is not in the solution progression");
    return (a_ * n - 1) / b_;
  }

 private:
  Int a_, b_;
  ArithmeticProgression progression_;
  Int n_min_;
};

inline AlignmentSolution solve_alignment(Int a, Int b) {
  return AlignmentSolution(std::move(a), std::move(b));
}

/// Convex combination of powers: coefficients a_i >= 0 with sum exactly 1.
struct AdmissiblePolynomial {
  std::map<uint64_t, Rational> coefficients;  // degree -> weight
};

struct AdmissibleCheckResult {
  bool valid = false;
  std::string violation;  // names the failed condition when !valid
  std::optional<AdmissiblePolynomial> polynomial;
};

inline AdmissibleCheckResult admissible_check(const std::map<uint64_t, Rational>& coefficients) {
  AdmissibleCheckResult result;
  Rational sum = 0;
  for (const auto& [degree, weight] : coefficients) {
    if (weight < 0) {
      result.violation = "negative coefficient at degree " + std::to_string(degree) +
                         ": " + rational_str(weight);
      return result;
    }
    sum += weight;
  }
  if (sum != 1) {
    result.violation = "coefficients sum to " + rational_str(sum) + ", expected 1";
    return result;
  }
  result.valid = true;
  result.polynomial = AdmissiblePolynomial{coefficients};
  return result;
}

}  // namespace speclab
