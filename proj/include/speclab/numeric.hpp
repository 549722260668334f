#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace speclab {

// Exact arithmetic everywhere: products over prime sets overflow 64-bit
// quickly, so the workbench carries arbitrary-precision integers and
// rationals on every arithmetic path.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using std::uint32_t;
using std::uint64_t;

inline Int int_pow(Int base, uint64_t exp) {
  Int acc = 1;
  while (exp != 0) {
    if (exp & 1) acc *= base;
    base *= base;
    exp >>= 1;
  }
  return acc;
}

// Euclidean remainder in [0, m).
inline Int mod_floor(const Int& a, const Int& m) {
  if (m <= 0) throw std::invalid_argument("mod_floor: modulus must be positive");
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Returns x with a*x == 1 (mod m). Throws when gcd(a, m) != 1.
inline Int mod_inverse(const Int& a, const Int& m) {
  if (m <= 0) throw std::invalid_argument("mod_inverse: modulus must be positive");
  Int old_r = mod_floor(a, m), r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1)
    throw std::domain_error("mod_inverse: arguments are not coprime (gcd = " +
                            old_r.str() + ")");
  return mod_floor(old_s, m);
}

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t acc = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) acc = mulmod_u64(acc, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return acc;
}

// Deterministic Miller-Rabin, valid for the full 64-bit range.
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// p-adic valuation of n, capped so the loop always terminates on n != 0.
inline uint32_t valuation(Int n, const Int& p, uint32_t cap = UINT32_MAX) {
  if (n == 0) throw std::invalid_argument("valuation: n must be nonzero");
  if (p < 2) throw std::invalid_argument("valuation: p must be >= 2");
  uint32_t v = 0;
  while (v < cap && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline uint64_t to_u64_checked(const Int& n, const std::string& what) {
  if (n < 0 || n > Int(UINT64_MAX))
    throw std::runtime_error(what + ": value " + n.str() + " does not fit in 64 bits");
  return n.convert_to<uint64_t>();
}

// Exact rational rendering; reports never show decimals.
inline std::string rational_str(const Rational& r) {
  Int num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// FNV-1a, used for the provenance footer of report tables.
inline uint64_t fnv1a_64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace speclab
