#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "speclab/numeric.hpp"
#include "speclab/permutation.hpp"

namespace speclab {

/// Dense exact rational matrix; every certificate in the joining module
/// is a small matrix identity.
class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("RationalMatrix: empty shape");
    if (rows > 1000 || cols > 1000)
      throw std::invalid_argument("RationalMatrix: sizes are capped at 1000");
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RationalMatrix from_permutation(const Permutation& sigma) {
    RationalMatrix m(sigma.size(), sigma.size());
    for (uint64_t x = 0; x < sigma.size(); ++x) m(sigma(x), x) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  Rational row_sum(std::size_t i) const {
    Rational s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
  }

  Rational col_sum(std::size_t j) const {
    Rational s = 0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }

  bool doubly_stochastic() const {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (row_sum(i) != 1) return false;
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) < 0) return false;
    }
    for (std::size_t j = 0; j < cols_; ++j)
      if (col_sum(j) != 1) return false;
    return true;
  }

  bool zero_diagonal() const {
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i)
      if ((*this)(i, i) != 0) return false;
    return true;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

inline RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  RationalMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

inline RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum shape mismatch");
  RationalMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

inline RationalMatrix scale(const Rational& t, const RationalMatrix& a) {
  RationalMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = t * a(i, j);
  return c;
}

/// Uniform average of permutation matrices; the Markov operator of a
/// joining supported on the union of their graphs.
inline RationalMatrix uniform_average(const std::vector<Permutation>& perms) {
  if (perms.empty()) throw std::invalid_argument("uniform_average: empty list");
  RationalMatrix sum(perms.front().size(), perms.front().size());
  for (const auto& p : perms) sum = sum + RationalMatrix::from_permutation(p);
  return scale(Rational(1, perms.size()), sum);
}

// ---------------------------------------------------------------------------
// Factor by a periodic automorphism: points of the factor are Phi-orbits,
// named by their lexicographically least member.

class FactorSpace {
 public:
  FactorSpace(const Permutation& phi, uint32_t period) : phi_(phi) {
    if (period == 0) throw std::invalid_argument("FactorSpace: period must be >= 1");
    if (!perm_power(phi, Int(period)).is_identity())
      throw std::invalid_argument("FactorSpace: phi^p is not the identity");
    rep_of_.resize(phi.size());
    shift_to_rep_.resize(phi.size());
    std::vector<bool> seen(phi.size(), false);
    for (uint64_t x = 0; x < phi.size(); ++x) {
      if (seen[x]) continue;
      std::vector<uint64_t> orbit;
      uint64_t y = x;
      do {
        orbit.push_back(y);
        seen[y] = true;
        y = phi(y);
      } while (y != x);
      uint64_t rep = *std::min_element(orbit.begin(), orbit.end());
      for (uint64_t z : orbit) rep_of_[z] = rep;
      // exponent n(z) with Phi^n z = rep
      uint64_t steps = 0;
      y = rep;
      do {
        // walking rep -> z forward means z -> rep needs the complement
        shift_to_rep_[y] = (orbit.size() - steps) % orbit.size();
        y = phi(y);
        ++steps;
      } while (y != rep);
      domain_.push_back(rep);
    }
    std::sort(domain_.begin(), domain_.end());
    index_of_.assign(phi.size(), SIZE_MAX);
    for (std::size_t i = 0; i < domain_.size(); ++i) index_of_[domain_[i]] = i;
  }

  uint64_t space_size() const { return rep_of_.size(); }
  const std::vector<uint64_t>& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }

  uint64_t representative(uint64_t x) const { return rep_of_[x]; }
  uint64_t shift_to_representative(uint64_t x) const { return shift_to_rep_[x]; }
  std::size_t factor_index(uint64_t x) const { return index_of_[rep_of_[x]]; }

  /// The factor map of a transformation commuting with Phi:
  /// rep(orbit) -> rep(T orbit).
  std::vector<std::size_t> factor_map(const Permutation& t) const {
    std::vector<std::size_t> image(size());
    for (std::size_t i = 0; i < size(); ++i) image[i] = factor_index(t(domain_[i]));
    return image;
  }

 private:
  Permutation phi_;
  std::vector<uint64_t> rep_of_;
  std::vector<uint64_t> shift_to_rep_;
  std::vector<uint64_t> domain_;
  std::vector<std::size_t> index_of_;
};

// ---------------------------------------------------------------------------

/// Self-joining of the factor: scaled counting measure
/// nu(a x b) = (1/|X|) #{x in orbit a : R x in orbit b}. Both marginals
/// are uniform on the factor.
struct JoiningMatrix {
  RationalMatrix measure;  // |D| x |D|, entries sum to 1

  bool marginals_uniform() const {
    Rational expected(1, measure.rows());
    for (std::size_t i = 0; i < measure.rows(); ++i)
      if (measure.row_sum(i) != expected) return false;
    for (std::size_t j = 0; j < measure.cols(); ++j)
      if (measure.col_sum(j) != expected) return false;
    return true;
  }

  /// Markov operator: conditional measure, rows summing to 1.
  RationalMatrix markov_operator() const {
    return scale(Rational(measure.rows(), 1), measure);
  }
};

/// Off-diagonal joining of the Phi-factor along a transformation R.
/// Preconditions follow the invariance computation: T is periodic-factor
/// compatible (T Phi = Phi T) and R commutes with T. R itself need not
/// commute with Phi; that is exactly the non-trivial case.
inline JoiningMatrix off_diagonal_joining(const Permutation& phi, uint32_t period,
                                          const Permutation& r, const Permutation& t) {
  if (phi.size() != r.size() || phi.size() != t.size())
    throw std::invalid_argument("off_diagonal_joining: spaces differ");
  if (!commute(t, phi))
    throw std::invalid_argument("off_diagonal_joining: T does not commute with Phi");
  if (!commute(t, r))
    throw std::invalid_argument("off_diagonal_joining: R does not commute with T");
  FactorSpace factor(phi, period);
  RationalMatrix nu(factor.size(), factor.size());
  Rational atom(1, phi.size());
  for (uint64_t x = 0; x < phi.size(); ++x)
    nu(factor.factor_index(x), factor.factor_index(r(x))) += atom;
  return JoiningMatrix{std::move(nu)};
}

/// Decomposition M = alpha I + (1 - alpha) Q of a doubly stochastic
/// matrix with constant diagonal; Q is doubly stochastic with zero
/// diagonal. The valuedness of the underlying multi-valued map is
/// 1/alpha.
struct MarkovDecomposition {
  Rational alpha;
  std::optional<RationalMatrix> remainder;  // absent when alpha = 1
  std::optional<Rational> valuedness() const {
    if (alpha == 0) return std::nullopt;
    return Rational(denominator(alpha), numerator(alpha));
  }
};

inline MarkovDecomposition markov_decompose(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("markov_decompose: matrix not square");
  if (!m.doubly_stochastic())
    throw std::invalid_argument("markov_decompose: matrix is not doubly stochastic");
  Rational alpha = m(0, 0);
  for (std::size_t i = 1; i < m.rows(); ++i)
    if (m(i, i) != alpha)
      throw std::domain_error(
          "markov_decompose: diagonal is not constant, not an n-valued-graph composition "
          "(entries " + rational_str(alpha) + " and " + rational_str(m(i, i)) + ")");
  MarkovDecomposition d{alpha, std::nullopt};
  if (alpha == 1) return d;  // M = I
  RationalMatrix q(m.rows(), m.cols());
  Rational denom = Rational(1) - alpha;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      q(i, j) = (m(i, j) - (i == j ? alpha : Rational(0))) / denom;
  if (!q.doubly_stochastic() || !q.zero_diagonal())
    throw std::domain_error("markov_decompose: remainder is not zero-diagonal doubly stochastic");
  d.remainder = std::move(q);
  return d;
}

/// Decomposes both J*J and JJ* and checks they carry the same diagonal
/// weight (the adjoint of an n-valued map is n-valued).
struct AdjointPairReport {
  MarkovDecomposition jstar_j;
  MarkovDecomposition j_jstar;
  bool alphas_equal() const { return jstar_j.alpha == j_jstar.alpha; }
};

inline AdjointPairReport adjoint_pair_decompose(const RationalMatrix& j) {
  RationalMatrix jt = j.transpose();
  return AdjointPairReport{markov_decompose(jt * j), markov_decompose(j * jt)};
}

// ---------------------------------------------------------------------------

struct GraphDisjointnessReport {
  bool all_disjoint = true;
  // (i, j, witness x) for each coinciding pair
  std::vector<std::tuple<std::size_t, std::size_t, uint64_t>> coincidences;
};

/// Distinct permutations commuting with an ergodic rotation must have
/// pairwise disjoint graphs; this checks the coincidence sets directly.
inline GraphDisjointnessReport graph_disjointness(const Permutation& rotation,
                                                  const std::vector<Permutation>& perms) {
  for (const auto& sigma : perms)
    if (!commute(sigma, rotation))
      throw std::invalid_argument("graph_disjointness: input does not commute with the rotation");
  GraphDisjointnessReport report;
  for (std::size_t i = 0; i < perms.size(); ++i)
    for (std::size_t j = i + 1; j < perms.size(); ++j)
      for (uint64_t x = 0; x < perms[i].size(); ++x)
        if (perms[i](x) == perms[j](x)) {
          report.all_disjoint = false;
          report.coincidences.emplace_back(i, j, x);
          break;
        }
  return report;
}

// ---------------------------------------------------------------------------

/// The p-valued map behind the off-diagonal joining: for x in D the
/// branches are the reductions of R x, R Phi x, ..., R Phi^{p-1} x into
/// the fundamental domain.
struct MultivaluedGraphReport {
  std::vector<uint64_t> domain;                     // D, sorted representatives
  std::vector<std::vector<uint64_t>> branches;      // per x in D: p points of D
  bool lands_in_domain = true;
  bool branch_points_distinct_in_space = true;      // R Phi^{j-1} x pairwise distinct
  bool branches_distinct = true;                    // reduced branches pairwise distinct
  bool graph_injective = true;                      // x -> branch tuple injective on D
  std::optional<uint64_t> coincidence_witness;      // x where reduced branches collide

  bool verdict() const { return lands_in_domain && branch_points_distinct_in_space; }
};

inline MultivaluedGraphReport multivalued_graph_check(const Permutation& phi, uint32_t period,
                                                      const Permutation& r) {
  if (phi.size() != r.size())
    throw std::invalid_argument("multivalued_graph_check: spaces differ");
  FactorSpace factor(phi, period);
  MultivaluedGraphReport report;
  report.domain = factor.domain();

  std::map<std::vector<uint64_t>, uint64_t> seen_tuples;
  for (uint64_t x : factor.domain()) {
    std::vector<uint64_t> raw(period);
    std::vector<uint64_t> reduced(period);
    uint64_t y = x;
    for (uint32_t j = 0; j < period; ++j) {
      raw[j] = r(y);
      reduced[j] = factor.representative(raw[j]);
      y = phi(y);
    }
    for (uint32_t a = 0; a < period; ++a)
      for (uint32_t b = a + 1; b < period; ++b) {
        if (raw[a] == raw[b]) report.branch_points_distinct_in_space = false;
        if (reduced[a] == reduced[b]) {
          if (report.branches_distinct) report.coincidence_witness = x;
          report.branches_distinct = false;
        }
      }
    for (uint64_t v : reduced)
      if (factor.representative(v) != v) report.lands_in_domain = false;
    auto [it, inserted] = seen_tuples.emplace(reduced, x);
    if (!inserted) report.graph_injective = false;
    report.branches.push_back(std::move(reduced));
  }
  return report;
}

}  // namespace speclab
