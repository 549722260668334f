#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclab/arithmetic.hpp"
#include "speclab/models.hpp"
#include "speclab/numeric.hpp"
#include "speclab/permutation.hpp"

namespace speclab {

/// Rotation number of an eigenvalue: the reduced fraction k/L in [0,1)
/// standing for the root of unity e^{2 pi i k / L}. Exact keys make
/// multiplicities from cycles of different lengths aggregate correctly
/// (2/6 and 1/3 are the same eigenvalue).
struct EigenvalueAngle {
  uint64_t num = 0;
  uint64_t den = 1;

  static EigenvalueAngle reduced(uint64_t j, uint64_t order) {
    if (order == 0) throw std::invalid_argument("EigenvalueAngle: zero order");
    j %= order;
    uint64_t g = std::gcd(j, order);
    if (j == 0) return {0, 1};
    return {j / g, order / g};
  }

  bool operator<(const EigenvalueAngle& o) const {
    return static_cast<unsigned __int128>(num) * o.den <
           static_cast<unsigned __int128>(o.num) * den;
  }
  bool operator==(const EigenvalueAngle& o) const { return num == o.num && den == o.den; }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// Exact eigenvalue -> multiplicity map of a permutation operator, with
/// the derived statistics the multiplicity theorems speak about.
class MultiplicityProfile {
 public:
  using Map = std::map<EigenvalueAngle, uint64_t>;

  Map entries;

  uint64_t mm() const {
    uint64_t m = 0;
    for (const auto& [angle, mult] : entries) m = std::max(m, mult);
    return m;
  }

  std::vector<uint64_t> multiplicity_set() const {
    std::set<uint64_t> s;
    for (const auto& [angle, mult] : entries) s.insert(mult);
    return {s.begin(), s.end()};
  }

  uint64_t cardm() const { return multiplicity_set().size(); }
  bool homogeneous() const { return cardm() == 1; }

  uint64_t dimension() const {
    uint64_t d = 0;
    for (const auto& [angle, mult] : entries) d += mult;
    return d;
  }

  uint64_t multiplicity_at(const EigenvalueAngle& angle) const {
    auto it = entries.find(angle);
    return it == entries.end() ? 0 : it->second;
  }

  bool operator==(const MultiplicityProfile& o) const { return entries == o.entries; }
  bool operator!=(const MultiplicityProfile& o) const { return !(*this == o); }
};

/// Brute-force eigen-oracle. A cycle of length L contributes one
/// eigenvalue at every angle j/L; aggregation is over reduced fractions.
inline MultiplicityProfile oracle_profile(const Permutation& perm) {
  MultiplicityProfile profile;
  for (const auto& cycle : perm.cycles()) {
    uint64_t len = cycle.size();
    for (uint64_t j = 0; j < len; ++j) ++profile.entries[EigenvalueAngle::reduced(j, len)];
  }
  return profile;
}

/// Homogeneous multiplicity of the all-ones rotation power R^n on a group
/// with pairwise coprime moduli: prod_j gcd(n, m_j). No materialization,
/// no size cap.
inline Int closed_form_multiplicity(const std::vector<Int>& moduli, const Int& n) {
  if (n < 1) throw std::invalid_argument("closed_form_multiplicity: n must be >= 1");
  for (std::size_t i = 0; i < moduli.size(); ++i)
    for (std::size_t j = i + 1; j < moduli.size(); ++j)
      if (gcd(moduli[i], moduli[j]) != 1)
        throw std::domain_error("closed form invalid: moduli " + moduli[i].str() + " and " +
                                moduli[j].str() + " are not coprime");
  Int m = 1;
  for (const Int& mod : moduli) m *= gcd(n, mod);
  return m;
}

/// Full closed-form profile of R^n on prod Z_{m_j}: homogeneous of
/// multiplicity M = prod gcd(n, m_j) over the L = (prod m_j)/M angles
/// j/L. Materializes the entry map, so the group order obeys the cap.
inline MultiplicityProfile closed_form_profile(const std::vector<Int>& moduli, const Int& n) {
  Int mult = closed_form_multiplicity(moduli, n);
  Int order = 1;
  for (const Int& m : moduli) order *= m;
  check_order_cap(order, "closed_form_profile");
  uint64_t m64 = to_u64_checked(mult, "closed_form_profile multiplicity");
  uint64_t len = to_u64_checked(order / mult, "closed_form_profile eigenvalue count");
  MultiplicityProfile profile;
  for (uint64_t j = 0; j < len; ++j) profile.entries[EigenvalueAngle::reduced(j, len)] = m64;
  return profile;
}

// ---------------------------------------------------------------------------
// Arithmetic multiplicity functions for the infinite-product constructions.

/// mm(R^N) for the weak-limit product model: the square-free product of
/// the spec primes dividing N. Equals 1 when N is coprime to the spec.
inline Int mm_theorem4(const Int& n, const PrimeSpec& spec) {
  Factorization f = factor_against(n, spec);
  Int mm = 1;
  for (const auto& [p, e] : f.hits) mm *= p;
  return mm;
}

/// The full multiplicity set of R^N: all subset products of the spec
/// primes dividing N. Cardinality 2^m for m hit primes.
inline std::vector<Int> multiplicity_set_theorem5(const Int& n, const PrimeSpec& spec) {
  Factorization f = factor_against(n, spec);
  std::set<Int> products{Int(1)};
  for (const auto& [p, e] : f.hits) {
    std::set<Int> next = products;
    for (const Int& q : products) next.insert(q * p);
    products = std::move(next);
  }
  return {products.begin(), products.end()};
}

/// Homogeneous multiplicity of R^N on the prime-power product space:
/// prod_j gcd(N, p_j^{d_j}).
inline Int hm_prime_powers(const Int& n, const PrimeSpec& spec) {
  if (n < 1) throw std::invalid_argument("hm_prime_powers: N must be >= 1");
  Int hm = 1;
  if (n <= Int(UINT64_MAX)) {  // machine-word path; scans hit this constantly
    uint64_t n64 = n.convert_to<uint64_t>();
    for (std::size_t j = 0; j < spec.size(); ++j) {
      uint64_t p = spec.prime(j);
      if (n64 % p != 0) continue;
      uint64_t q = n64;
      uint32_t v = 0;
      while (v < spec.exponent(j) && q % p == 0) {
        q /= p;
        ++v;
      }
      hm *= int_pow(Int(p), v);
    }
    return hm;
  }
  for (std::size_t j = 0; j < spec.size(); ++j) {
    uint32_t v = valuation(n, Int(spec.prime(j)), spec.exponent(j));
    hm *= int_pow(Int(spec.prime(j)), v);
  }
  return hm;
}

struct RatioPoint {
  Rational value;
  uint64_t witness = 0;  // least n attaining the value
};

/// Distinct exact values of hm(R^n)/n for n up to the horizon, sorted
/// ascending, each with its first witness.
inline std::vector<RatioPoint> ratio_scan(const PrimeSpec& spec, uint64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("ratio_scan: horizon must be >= 1");
  std::map<Rational, uint64_t> seen;
  for (uint64_t n = 1; n <= horizon; ++n) {
    Rational value(hm_prime_powers(Int(n), spec), Int(n));
    seen.emplace(value, n);  // keeps the first witness
  }
  std::vector<RatioPoint> points;
  points.reserve(seen.size());
  for (const auto& [value, witness] : seen) points.push_back({value, witness});
  return points;
}

// ---------------------------------------------------------------------------
// Weak-limit certificates. On a finite truncation, T^{n_i} -> I becomes
// eventual exact operator equality along the progression, which is
// decidable from the progression's residue and modulus.

enum class WLVerdict { Holds, Fails, VacuousEmpty };

struct WLStageReport {
  std::size_t stage = 1;
  std::string claimed_limit;
  WLVerdict verdict = WLVerdict::Fails;
  Int threshold = 0;          // first member from which equality holds
  std::string detail;         // modular criterion and witnesses
  bool decomposition_checked = false;  // power-splitting identities verified
};

struct WLCertificate {
  std::vector<std::size_t> levels;
  std::vector<WLStageReport> stages;

  bool holds() const {
    for (const auto& s : stages)
      if (s.verdict == WLVerdict::Fails) return false;
    return true;
  }
  bool vacuous() const {
    for (const auto& s : stages)
      if (s.verdict == WLVerdict::VacuousEmpty) return true;
    return stages.empty();
  }
};

inline const char* wl_verdict_str(WLVerdict v) {
  switch (v) {
    case WLVerdict::Holds: return "holds";
    case WLVerdict::Fails: return "fails";
    default: return "vacuous-empty";
  }
}

/// Rigidity of the level-k truncation along a progression: R^n is the
/// identity for every sufficiently large member iff the truncation order
/// divides both residue and modulus.
inline WLCertificate check_rigidity(const ProductModel& model,
                                    const ArithmeticProgression& progression,
                                    std::size_t level) {
  Int order = model.truncation_order(level);
  WLStageReport report;
  report.stage = 1;
  report.claimed_limit = "I";

  if (progression.empty()) {
    report.verdict = WLVerdict::VacuousEmpty;
    report.detail = "empty progression: rigidity holds vacuously";
    return WLCertificate{{level}, {report}};
  }

  bool residue_ok = progression.residue() % order == 0;
  bool modulus_ok = progression.modulus() % order == 0;
  report.verdict = (residue_ok && modulus_ok) ? WLVerdict::Holds : WLVerdict::Fails;
  report.threshold = progression.first_at_least(1);

  std::ostringstream detail;
  detail << "truncation order " << order << ": residue " << progression.residue()
         << (residue_ok ? " == 0" : " != 0") << ", modulus " << progression.modulus()
         << (modulus_ok ? " == 0" : " != 0") << " (mod order)";
  if (report.verdict == WLVerdict::Fails) {
    Int stable = mod_floor(progression.residue(), order);
    if (modulus_ok)
      detail << "; members act as R^" << stable << " on the truncation";
    else
      detail << "; witness n=" << report.threshold;
  }

  // Confirm the stated member against the materialized permutation when
  // the truncation is small enough.
  if (order <= Int(default_order_cap())) {
    auto [group, rotation] = model.truncate(level);
    Permutation at_threshold = power(rotation, report.threshold).as_permutation();
    bool should_be_identity = report.threshold % order == 0;
    if (at_threshold.is_identity() != should_be_identity)
      throw std::logic_error("check_rigidity: permutation check contradicts divisibility");
    detail << "; permutation check at n=" << report.threshold << " agrees";
  }
  report.detail = detail.str();
  return WLCertificate{{level}, {report}};
}

/// Verifies the weak-limit chain on truncations: stage j (j = 2..k)
/// claims (R_1 (x) ... (x) R_j)^{p_1...p_{j-1} n} equals
/// I (x) ... (x) I (x) R_j for every progression member n past the
/// threshold. Exact on the chosen level algebras; progressions come from
/// the alignment/refinement pipeline.
inline WLCertificate check_wl(const std::vector<ProductModel>& models,
                              const std::vector<uint64_t>& primes,
                              const std::vector<ArithmeticProgression>& stage_progressions,
                              const std::vector<std::size_t>& levels) {
  const std::size_t k = models.size();
  if (primes.size() != k || levels.size() != k)
    throw std::invalid_argument("check_wl: models, primes and levels must align");
  if (k == 0) throw std::invalid_argument("check_wl: no models");
  if (stage_progressions.size() + 1 != k)
    throw std::invalid_argument("check_wl: need exactly k-1 stage progressions");

  WLCertificate certificate;
  certificate.levels = levels;
  if (k == 1) return certificate;  // no condition: vacuously true

  std::vector<Int> orders;
  for (std::size_t i = 0; i < k; ++i) orders.push_back(models[i].truncation_order(levels[i]));

  for (std::size_t j = 2; j <= k; ++j) {
    const ArithmeticProgression& prog = stage_progressions[j - 2];
    if (prog.empty())
      throw std::invalid_argument("check_wl: empty progression at stage " + std::to_string(j));

    Int multiplier = 1;  // p_1 ... p_{j-1}
    for (std::size_t i = 0; i + 1 < j; ++i) multiplier *= primes[i];

    WLStageReport report;
    report.stage = j;
    {
      std::ostringstream limit;
      for (std::size_t i = 0; i + 1 < j; ++i) limit << "I (x) ";
      limit << "R_" << j;
      report.claimed_limit = limit.str();
    }
    report.threshold = prog.first_at_least(1);

    const Int head = multiplier * prog.residue();
    const Int step = multiplier * prog.modulus();
    bool ok = true;
    std::ostringstream detail;
    detail << "multiplier " << multiplier;
    for (std::size_t i = 0; i + 1 < j; ++i) {
      bool res = head % orders[i] == 0 && step % orders[i] == 0;
      detail << "; factor " << (i + 1) << " (order " << orders[i] << ") -> I: "
             << (res ? "yes" : "no");
      ok = ok && res;
    }
    {
      bool res = mod_floor(head, orders[j - 1]) == 1 % orders[j - 1] &&
                 step % orders[j - 1] == 0;
      detail << "; factor " << j << " (order " << orders[j - 1] << ") -> R_" << j << ": "
             << (res ? "yes" : "no");
      ok = ok && res;
    }
    report.verdict = ok ? WLVerdict::Holds : WLVerdict::Fails;

    // Materialized cross-check of the first two members on the product
    // space, plus the power-splitting identities R_i^{Pn} = T_i^{Pn/p_i}
    // and R_j^{Pn} = T_j^{n~} R_j with P n = p_j n~ + 1.
    Int product_order = 1;
    for (std::size_t i = 0; i < j; ++i) product_order *= orders[i];
    if (product_order <= Int(default_order_cap())) {
      std::vector<Permutation> factors;
      for (std::size_t i = 0; i < j; ++i)
        factors.push_back(models[i].truncate(levels[i]).second.as_permutation());
      Permutation product = tensor(factors);
      std::vector<Permutation> limit_factors;
      for (std::size_t i = 0; i + 1 < j; ++i)
        limit_factors.push_back(Permutation::identity(factors[i].size()));
      limit_factors.push_back(factors[j - 1]);
      Permutation claimed = tensor(limit_factors);

      bool decomposition_ok = true;
      for (int member = 0; member < 2; ++member) {
        Int n = report.threshold + member * prog.modulus();
        Int exponent = multiplier * n;
        bool predicted = mod_floor(exponent, orders[j - 1]) == 1 % orders[j - 1];
        for (std::size_t i = 0; i + 1 < j; ++i)
          predicted = predicted && exponent % orders[i] == 0;
        if ((perm_power(product, exponent) == claimed) != predicted)
          throw std::logic_error("check_wl: permutation check contradicts divisibility");
        for (std::size_t i = 0; i + 1 < j; ++i) {
          Permutation t = perm_power(factors[i], Int(primes[i]));
          decomposition_ok = decomposition_ok &&
                             perm_power(factors[i], exponent) ==
                                 perm_power(t, exponent / primes[i]);
        }
        if (mod_floor(exponent - 1, Int(primes[j - 1])) == 0) {
          Int companion = (exponent - 1) / primes[j - 1];
          Permutation t = perm_power(factors[j - 1], Int(primes[j - 1]));
          decomposition_ok = decomposition_ok &&
                             perm_power(factors[j - 1], exponent) ==
                                 compose(perm_power(t, companion), factors[j - 1]);
        }
      }
      report.decomposition_checked = decomposition_ok;
      detail << "; permutation check on " << product_order.str() << " points agrees";
    }
    report.detail = detail.str();
    certificate.stages.push_back(std::move(report));
  }
  return certificate;
}

// ---------------------------------------------------------------------------
// The prime-power space with one first-power marker prime: the gcd formula
// gives hm(R^marker) = marker when the marker coordinate is present and 1
// when it is omitted, while hm(R^n) = n holds below the marker either way.

struct MarkerDiscrepancyReport {
  uint64_t marker = 0;
  Int hm_at_marker_with;
  Int hm_at_marker_without;
  Int first_mismatch_with = 0;     // least n < marker with hm(n) != n, 0 if none
  Int first_mismatch_without = 0;
  bool below_marker_ok_with = true;
  bool below_marker_ok_without = true;
  bool discrepancy() const { return hm_at_marker_with != hm_at_marker_without; }
};

/// All primes up to bound, exponent d everywhere except exponent 1 at the
/// marker prime. Throws if the marker is not prime or exceeds the bound.
inline PrimeSpec prime_power_space_with_marker(uint64_t marker, uint32_t d, uint64_t bound) {
  if (!is_prime_u64(marker)) throw std::invalid_argument("marker must be prime");
  std::vector<uint64_t> primes;
  std::vector<uint32_t> exponents;
  bool seen = false;
  for (uint64_t p = 2; p <= bound; ++p) {
    if (!is_prime_u64(p)) continue;
    primes.push_back(p);
    exponents.push_back(p == marker ? 1 : d);
    seen = seen || p == marker;
  }
  if (!seen) throw std::invalid_argument("marker prime exceeds the bound");
  return PrimeSpec(std::move(primes), std::move(exponents));
}

inline PrimeSpec drop_prime(const PrimeSpec& spec, uint64_t p) {
  std::vector<uint64_t> primes;
  std::vector<uint32_t> exponents;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (spec.prime(j) == p) continue;
    primes.push_back(spec.prime(j));
    exponents.push_back(spec.exponent(j));
  }
  return PrimeSpec(std::move(primes), std::move(exponents));
}

inline MarkerDiscrepancyReport marker_discrepancy_report(const PrimeSpec& with_marker,
                                                         uint64_t marker) {
  PrimeSpec without_marker = drop_prime(with_marker, marker);
  MarkerDiscrepancyReport report;
  report.marker = marker;
  report.hm_at_marker_with = hm_prime_powers(Int(marker), with_marker);
  report.hm_at_marker_without = hm_prime_powers(Int(marker), without_marker);
  for (uint64_t n = 1; n < marker; ++n) {
    if (report.below_marker_ok_with && hm_prime_powers(Int(n), with_marker) != n) {
      report.below_marker_ok_with = false;
      report.first_mismatch_with = n;
    }
    if (report.below_marker_ok_without && hm_prime_powers(Int(n), without_marker) != n) {
      report.below_marker_ok_without = false;
      report.first_mismatch_without = n;
    }
  }
  return report;
}

}  // namespace speclab
