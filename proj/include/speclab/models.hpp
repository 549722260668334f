#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "speclab/arithmetic.hpp"
#include "speclab/numeric.hpp"
#include "speclab/permutation.hpp"

namespace speclab {

/// Product of cyclic groups Z_{m_1} x ... x Z_{m_k}. Elements are tuples
/// (x_j), 0 <= x_j < m_j, enumerated lexicographically with the first
/// coordinate most significant.
class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<uint64_t> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw std::invalid_argument("FiniteAbelianGroup: no moduli");
    Int order = 1;
    for (uint64_t m : moduli_) {
      if (m < 2) throw std::invalid_argument("FiniteAbelianGroup: moduli must be >= 2");
      order *= m;
    }
    check_order_cap(order, "FiniteAbelianGroup");
    order_ = order.convert_to<uint64_t>();
  }

  const std::vector<uint64_t>& moduli() const { return moduli_; }
  std::size_t rank() const { return moduli_.size(); }
  uint64_t order() const { return order_; }

  std::vector<uint64_t> tuple_of(uint64_t index) const {
    std::vector<uint64_t> x(rank());
    for (std::size_t j = rank(); j-- > 0;) {
      x[j] = index % moduli_[j];
      index /= moduli_[j];
    }
    return x;
  }

  uint64_t index_of(const std::vector<uint64_t>& x) const {
    uint64_t index = 0;
    for (std::size_t j = 0; j < rank(); ++j) index = index * moduli_[j] + (x[j] % moduli_[j]);
    return index;
  }

  bool operator==(const FiniteAbelianGroup& o) const { return moduli_ == o.moduli_; }

 private:
  std::vector<uint64_t> moduli_;
  uint64_t order_;
};

/// Translation x -> x + g on a finite abelian group with uniform measure.
class GroupRotation {
 public:
  explicit GroupRotation(FiniteAbelianGroup group)
      : GroupRotation(group, std::vector<uint64_t>(group.rank(), 1)) {}

  GroupRotation(FiniteAbelianGroup group, std::vector<uint64_t> step)
      : group_(std::move(group)), step_(std::move(step)) {
    if (step_.size() != group_.rank())
      throw std::invalid_argument("GroupRotation: step length does not match rank");
    for (std::size_t j = 0; j < step_.size(); ++j) step_[j] %= group_.moduli()[j];
  }

  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<uint64_t>& step() const { return step_; }

  bool is_identity() const {
    for (uint64_t s : step_)
      if (s != 0) return false;
    return true;
  }

  /// Order of the translation: lcm_j of m_j / gcd(step_j, m_j).
  Int rotation_order() const {
    Int o = 1;
    for (std::size_t j = 0; j < step_.size(); ++j) {
      uint64_t m = group_.moduli()[j];
      uint64_t g = std::gcd(step_[j], m);
      o = lcm(o, Int(m / g));
    }
    return o;
  }

  Permutation as_permutation() const {
    std::vector<uint64_t> im(group_.order());
    for (uint64_t i = 0; i < group_.order(); ++i) {
      auto x = group_.tuple_of(i);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = (x[j] + step_[j]) % group_.moduli()[j];
      im[i] = group_.index_of(x);
    }
    return Permutation(std::move(im));
  }

 private:
  FiniteAbelianGroup group_;
  std::vector<uint64_t> step_;
};

/// Rotation power R^n: the step scales componentwise.
inline GroupRotation power(const GroupRotation& rotation, const Int& n) {
  if (n < 1) throw std::invalid_argument("power: exponent must be >= 1");
  const auto& moduli = rotation.group().moduli();
  std::vector<uint64_t> step(moduli.size());
  for (std::size_t j = 0; j < moduli.size(); ++j) {
    Int s = (Int(rotation.step()[j]) * n) % moduli[j];
    step[j] = s.convert_to<uint64_t>();
  }
  return GroupRotation(rotation.group(), std::move(step));
}

/// The truncatable product model: coordinate j is Z_{p_j^{d_j}}, the
/// rotation adds one to every coordinate. Truncations at level k <= depth
/// are finite groups of pairwise coprime orders.
class ProductModel {
 public:
  ProductModel(PrimeSpec spec, std::size_t depth, std::string id = {})
      : spec_(std::move(spec)), depth_(depth), id_(std::move(id)) {
    if (depth_ == 0 || depth_ > spec_.size())
      throw std::invalid_argument("ProductModel: depth must be in [1, #primes]");
  }

  const PrimeSpec& spec() const { return spec_; }
  std::size_t depth() const { return depth_; }
  const std::string& id() const { return id_; }

  Int modulus(std::size_t j) const { return spec_.modulus(j); }

  Int truncation_order(std::size_t level) const {
    check_level(level);
    Int o = 1;
    for (std::size_t j = 0; j < level; ++j) o *= modulus(j);
    return o;
  }

  std::vector<Int> truncated_moduli(std::size_t level) const {
    check_level(level);
    std::vector<Int> ms;
    for (std::size_t j = 0; j < level; ++j) ms.push_back(modulus(j));
    return ms;
  }

  std::pair<FiniteAbelianGroup, GroupRotation> truncate(std::size_t level) const {
    check_level(level);
    std::vector<uint64_t> moduli;
    for (std::size_t j = 0; j < level; ++j)
      moduli.push_back(to_u64_checked(modulus(j), "ProductModel::truncate"));
    FiniteAbelianGroup group(std::move(moduli));
    GroupRotation rotation(group);
    return {std::move(group), std::move(rotation)};
  }

 private:
  void check_level(std::size_t level) const {
    if (level == 0 || level > depth_)
      throw std::invalid_argument("ProductModel: level " + std::to_string(level) +
                                  " outside configured depth " + std::to_string(depth_));
  }

  PrimeSpec spec_;
  std::size_t depth_;
  std::string id_;
};

/// Coordinatewise multiplication x_j -> c_j * x_j with gcd(c_j, m_j) = 1;
/// a group automorphism of the truncation.
class MultiplierAutomorphism {
 public:
  MultiplierAutomorphism(FiniteAbelianGroup group, std::vector<uint64_t> coefficients)
      : group_(std::move(group)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != group_.rank())
      throw std::invalid_argument("MultiplierAutomorphism: coefficient count mismatch");
    for (std::size_t j = 0; j < coefficients_.size(); ++j) {
      coefficients_[j] %= group_.moduli()[j];
      if (std::gcd(coefficients_[j], group_.moduli()[j]) != 1)
        throw std::domain_error("MultiplierAutomorphism: coefficient not invertible");
    }
  }

  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<uint64_t>& coefficients() const { return coefficients_; }

  Permutation as_permutation() const {
    std::vector<uint64_t> im(group_.order());
    for (uint64_t i = 0; i < group_.order(); ++i) {
      auto x = group_.tuple_of(i);
      for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = mulmod_u64(coefficients_[j], x[j], group_.moduli()[j]);
      im[i] = group_.index_of(x);
    }
    return Permutation(std::move(im));
  }

 private:
  FiniteAbelianGroup group_;
  std::vector<uint64_t> coefficients_;
};

/// Psi_q with c_j = q^{-1} mod m_j, so that Psi^{-1} R Psi = R^q on the
/// level-k truncation. Requires q coprime to every truncated modulus.
inline MultiplierAutomorphism multiplier_for(const ProductModel& model, const Int& q,
                                             std::size_t level) {
  auto [group, rotation] = model.truncate(level);
  std::vector<uint64_t> coeffs(group.rank());
  for (std::size_t j = 0; j < group.rank(); ++j) {
    Int m = group.moduli()[j];
    if (gcd(mod_floor(q, m), m) != 1)
      throw std::domain_error("multiplier_for: q = " + q.str() +
                              " shares a factor with modulus " + m.str());
    coeffs[j] = to_u64_checked(mod_inverse(q, m), "multiplier_for");
  }
  return MultiplierAutomorphism(std::move(group), std::move(coeffs));
}

// ---------------------------------------------------------------------------
// The two-generator group with phi^p = e and commuting conjugates
// t_i = phi^i s phi^{-i}: concretely Z_p acting on Z^p by cyclic shift.

enum class GpLetter { S, SInv, Phi, PhiInv };

/// Normal form phi^a t_0^{b_0} ... t_{p-1}^{b_{p-1}} with a in Z_p and
/// b in Z^p. Multiplication: (a,b)(a',b') = (a+a' mod p, shift_{a'}(b)+b')
/// where shift_c(b)[k] = b[(k+c) mod p].
struct GpNormalForm {
  uint32_t p = 2;
  uint32_t twist = 0;                 // a
  std::vector<std::int64_t> exps;     // b, indexed 0..p-1

  static GpNormalForm identity(uint32_t p) {
    return GpNormalForm{p, 0, std::vector<std::int64_t>(p, 0)};
  }

  bool is_identity() const {
    if (twist != 0) return false;
    for (auto e : exps)
      if (e != 0) return false;
    return true;
  }

  GpNormalForm operator*(const GpNormalForm& o) const {
    if (p != o.p) throw std::invalid_argument("GpNormalForm: mismatched p");
    GpNormalForm r = identity(p);
    r.twist = (twist + o.twist) % p;
    for (uint32_t k = 0; k < p; ++k) r.exps[k] = exps[(k + o.twist) % p] + o.exps[k];
    return r;
  }

  bool operator==(const GpNormalForm& o) const {
    return p == o.p && twist == o.twist && exps == o.exps;
  }
};

inline GpNormalForm gp_letter_form(uint32_t p, GpLetter letter) {
  GpNormalForm f = GpNormalForm::identity(p);
  switch (letter) {
    case GpLetter::S: f.exps[0] = 1; break;
    case GpLetter::SInv: f.exps[0] = -1; break;
    case GpLetter::Phi: f.twist = 1 % p; break;
    case GpLetter::PhiInv: f.twist = (p - 1) % p; break;
  }
  return f;
}

/// Reduces a word in {s, s^-1, phi, phi^-1} to its normal form. The word
/// maps to the product of its letters, so reduction is a homomorphism.
inline GpNormalForm gp_reduce(uint32_t p, const std::vector<GpLetter>& word) {
  if (p < 2) throw std::invalid_argument("gp_reduce: p must be >= 2");
  GpNormalForm acc = GpNormalForm::identity(p);
  for (GpLetter letter : word) acc = acc * gp_letter_form(p, letter);
  return acc;
}

/// Parses whitespace-separated tokens: s, s^-1 (or s'), phi, phi^-1 (or phi').
inline std::vector<GpLetter> parse_gp_word(const std::string& text) {
  std::vector<GpLetter> word;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    std::string tok = text.substr(i, j - i);
    if (tok == "s") word.push_back(GpLetter::S);
    else if (tok == "s^-1" || tok == "s'") word.push_back(GpLetter::SInv);
    else if (tok == "phi") word.push_back(GpLetter::Phi);
    else if (tok == "phi^-1" || tok == "phi'") word.push_back(GpLetter::PhiInv);
    else throw std::invalid_argument("parse_gp_word: unknown token '" + tok + "'");
    i = j;
  }
  return word;
}

// ---------------------------------------------------------------------------
// Finite left-translation realization: the quotient Z_p x| (Z_m)^p of the
// group above, acting on itself. Gives concrete non-commuting Phi and
// R = S*Phi for the joining machinery.

class GpQuotientSpace {
 public:
  GpQuotientSpace(uint32_t p, uint64_t m) : p_(p), m_(m) {
    if (p < 2 || m < 2) throw std::invalid_argument("GpQuotientSpace: need p, m >= 2");
    Int order = Int(p) * int_pow(Int(m), p);
    check_order_cap(order, "GpQuotientSpace");
    size_ = order.convert_to<uint64_t>();
    block_ = size_ / p;  // m^p
  }

  uint32_t p() const { return p_; }
  uint64_t m() const { return m_; }
  uint64_t size() const { return size_; }

  // Element (a, b) with a in Z_p, b in (Z_m)^p; index a*m^p + digits(b).
  uint64_t index_of(uint32_t a, const std::vector<uint64_t>& b) const {
    uint64_t v = 0;
    for (std::size_t k = p_; k-- > 0;) v = v * m_ + (b[k] % m_);
    return static_cast<uint64_t>(a % p_) * block_ + v;
  }

  std::pair<uint32_t, std::vector<uint64_t>> element_of(uint64_t index) const {
    uint32_t a = static_cast<uint32_t>(index / block_);
    uint64_t v = index % block_;
    std::vector<uint64_t> b(p_);
    for (uint32_t k = 0; k < p_; ++k) {
      b[k] = v % m_;
      v /= m_;
    }
    return {a, std::move(b)};
  }

  uint64_t multiply(uint64_t x, uint64_t y) const {
    auto [ax, bx] = element_of(x);
    auto [ay, by] = element_of(y);
    std::vector<uint64_t> b(p_);
    for (uint32_t k = 0; k < p_; ++k) b[k] = (bx[(k + ay) % p_] + by[k]) % m_;
    return index_of((ax + ay) % p_, b);
  }

  uint64_t s_element() const {
    std::vector<uint64_t> b(p_, 0);
    b[0] = 1;
    return index_of(0, b);
  }

  uint64_t phi_element() const { return index_of(1, std::vector<uint64_t>(p_, 0)); }

  Permutation left_translation(uint64_t g) const {
    std::vector<uint64_t> im(size_);
    for (uint64_t x = 0; x < size_; ++x) im[x] = multiply(g, x);
    return Permutation(std::move(im));
  }

  Permutation phi_translation() const { return left_translation(phi_element()); }

  Permutation r_translation() const {
    return left_translation(multiply(s_element(), phi_element()));
  }

 private:
  uint32_t p_;
  uint64_t m_, size_, block_;
};

// ---------------------------------------------------------------------------
// Model 2: the p-fold product space with the cyclic coordinate shift F and
// R = F o (U_1 (x) ... (x) U_p).

struct Model2System {
  uint32_t p = 2;
  uint64_t base_order = 0;
  std::vector<Permutation> bases;  // U_1 .. U_p
  Permutation shift;               // F, with F^p = identity
  Permutation r;                   // R = F o (U_1 (x) ... (x) U_p)
};

/// F rotates coordinates left: (x_1, ..., x_p) -> (x_2, ..., x_p, x_1).
inline Permutation coordinate_shift(uint32_t p, uint64_t base_order) {
  Int total = int_pow(Int(base_order), p);
  check_order_cap(total, "coordinate_shift");
  uint64_t n = total.convert_to<uint64_t>();
  std::vector<uint64_t> im(n);
  for (uint64_t x = 0; x < n; ++x) {
    // digits of x, first coordinate most significant
    std::vector<uint64_t> d(p);
    uint64_t v = x;
    for (uint32_t k = p; k-- > 0;) {
      d[k] = v % base_order;
      v /= base_order;
    }
    uint64_t y = 0;
    for (uint32_t k = 0; k < p; ++k) y = y * base_order + d[(k + 1) % p];
    im[x] = y;
  }
  return Permutation(std::move(im));
}

inline Model2System build_model2(uint32_t p, const std::vector<GroupRotation>& bases) {
  if (bases.size() != p)
    throw std::invalid_argument("build_model2: need exactly p base rotations");
  for (const auto& u : bases)
    if (!(u.group() == bases.front().group()))
      throw std::invalid_argument("build_model2: base rotations act on different spaces");

  uint64_t base_order = bases.front().group().order();
  std::vector<Permutation> ups;
  for (const auto& u : bases) ups.push_back(u.as_permutation());

  Permutation f = coordinate_shift(p, base_order);
  Permutation r = compose(f, tensor(ups));
  if (!perm_power(f, Int(p)).is_identity())
    throw std::logic_error("build_model2: coordinate shift has wrong order");
  return Model2System{p, base_order, std::move(ups), std::move(f), std::move(r)};
}

/// S_j = F^{-j} R F^{j-1}, j = 1..p. The family commutes pairwise and its
/// product is R^p; both facts are asserted before returning.
inline std::vector<Permutation> sigma_family(const Model2System& system) {
  Permutation f_inv = system.shift.inverse();
  std::vector<Permutation> sigmas;
  Permutation left = f_inv;                  // F^{-j}
  Permutation right = Permutation::identity(system.r.size());  // F^{j-1}
  for (uint32_t j = 1; j <= system.p; ++j) {
    sigmas.push_back(compose(left, compose(system.r, right)));
    left = compose(f_inv, left);
    right = compose(system.shift, right);
  }
  for (std::size_t i = 0; i < sigmas.size(); ++i)
    for (std::size_t j = i + 1; j < sigmas.size(); ++j)
      if (!commute(sigmas[i], sigmas[j]))
        throw std::logic_error("sigma_family: members do not commute");
  Permutation prod = sigmas.front();
  for (std::size_t j = 1; j < sigmas.size(); ++j) prod = compose(prod, sigmas[j]);
  if (prod != perm_power(system.r, Int(system.p)))
    throw std::logic_error("sigma_family: product differs from R^p");
  return sigmas;
}

}  // namespace speclab
