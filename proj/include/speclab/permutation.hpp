#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclab/numeric.hpp"

namespace speclab {

// Permutations of finite uniform spaces are materialized as index arrays.
// Composition convention, used everywhere: (f * g)(x) = f(g(x)).
class Permutation {
 public:
  explicit Permutation(std::vector<uint64_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (uint64_t y : images_) {
      if (y >= images_.size() || seen[y])
        throw std::invalid_argument("Permutation: image list is not a bijection");
      seen[y] = true;
    }
  }

  static Permutation identity(uint64_t n) {
    std::vector<uint64_t> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  uint64_t size() const { return images_.size(); }
  uint64_t operator()(uint64_t x) const { return images_[x]; }
  const std::vector<uint64_t>& images() const { return images_; }

  bool is_identity() const {
    for (uint64_t x = 0; x < size(); ++x)
      if (images_[x] != x) return false;
    return true;
  }

  bool operator==(const Permutation& o) const { return images_ == o.images_; }
  bool operator!=(const Permutation& o) const { return !(*this == o); }

  Permutation inverse() const {
    std::vector<uint64_t> inv(size());
    for (uint64_t x = 0; x < size(); ++x) inv[images_[x]] = x;
    return Permutation(std::move(inv));
  }

  std::vector<std::vector<uint64_t>> cycles() const {
    std::vector<std::vector<uint64_t>> cs;
    std::vector<bool> seen(size(), false);
    for (uint64_t x = 0; x < size(); ++x) {
      if (seen[x]) continue;
      std::vector<uint64_t> c;
      uint64_t y = x;
      do {
        seen[y] = true;
        c.push_back(y);
        y = images_[y];
      } while (y != x);
      cs.push_back(std::move(c));
    }
    return cs;
  }

  std::vector<uint64_t> cycle_lengths() const {
    std::vector<uint64_t> ls;
    for (const auto& c : cycles()) ls.push_back(c.size());
    std::sort(ls.begin(), ls.end());
    return ls;
  }

  Int order() const {
    Int o = 1;
    for (uint64_t l : cycle_lengths()) o = lcm(o, Int(l));
    return o;
  }

 private:
  std::vector<uint64_t> images_;
};

inline Permutation compose(const Permutation& f, const Permutation& g) {
  if (f.size() != g.size())
    throw std::invalid_argument("compose: permutations act on different spaces");
  std::vector<uint64_t> im(f.size());
  for (uint64_t x = 0; x < f.size(); ++x) im[x] = f(g(x));
  return Permutation(std::move(im));
}

inline Permutation operator*(const Permutation& f, const Permutation& g) {
  return compose(f, g);
}

inline bool commute(const Permutation& f, const Permutation& g) {
  if (f.size() != g.size()) return false;
  for (uint64_t x = 0; x < f.size(); ++x)
    if (f(g(x)) != g(f(x))) return false;
  return true;
}

// sigma^n with the exponent reduced per cycle; n may be arbitrarily large.
inline Permutation perm_power(const Permutation& sigma, const Int& n) {
  if (n < 0) return perm_power(sigma.inverse(), -n);
  std::vector<uint64_t> im(sigma.size());
  for (const auto& c : sigma.cycles()) {
    uint64_t len = c.size();
    uint64_t shift = (n % len).convert_to<uint64_t>();
    for (uint64_t i = 0; i < len; ++i) im[c[i]] = c[(i + shift) % len];
  }
  return Permutation(std::move(im));
}

// Tensor product on the lexicographic index (first factor most significant).
inline Permutation tensor(const Permutation& sigma, const Permutation& tau) {
  uint64_t n = sigma.size(), m = tau.size();
  std::vector<uint64_t> im(n * m);
  for (uint64_t i = 0; i < n; ++i)
    for (uint64_t j = 0; j < m; ++j) im[i * m + j] = sigma(i) * m + tau(j);
  return Permutation(std::move(im));
}

inline Permutation tensor(const std::vector<Permutation>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: empty factor list");
  Permutation acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor(acc, factors[i]);
  return acc;
}

// Materialization cap for explicit permutations. SPECLAB_MAX_ORDER overrides.
inline uint64_t default_order_cap() {
  static const uint64_t cap = [] {
    if (const char* env = std::getenv("SPECLAB_MAX_ORDER")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<uint64_t>(v);
    }
    return static_cast<uint64_t>(1'000'000);
  }();
  return cap;
}

inline void check_order_cap(const Int& order, const char* what) {
  if (order > Int(default_order_cap()))
    throw std::runtime_error(std::string(what) + ": space of order " + order.str() +
                             " exceeds the materialization cap " +
                             std::to_string(default_order_cap()) +
                             " (set SPECLAB_MAX_ORDER to raise)");
}

}  // namespace speclab
