#pragma once

#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclab/arithmetic.hpp"
#include "speclab/joining.hpp"
#include "speclab/model_spec.hpp"
#include "speclab/models.hpp"
#include "speclab/numeric.hpp"
#include "speclab/permutation.hpp"
#include "speclab/report.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

/// Everything a command run depends on. A fixed config (and seed) yields
/// byte-identical report output.
struct RunConfig {
  std::string command;
  std::string spec_path;                  // primary model spec file
  std::vector<std::string> spec_paths;    // wl-verify: one per factor
  std::string range;                      // "a..b" or single "n"
  uint64_t horizon = 0;
  uint64_t max_n = 0;
  std::size_t level = 0;                  // 0 = full depth
  std::vector<std::size_t> levels;        // wl-verify, per model
  std::string format = "csv";
  std::string out_path;                   // empty = stdout
  uint64_t seed = 1;

  std::string q;                          // conjugacy
  std::string residue, modulus;           // rigidity progression
  std::vector<uint64_t> primes;           // wl-verify
  std::string progressions;               // wl-verify override "r:m,r:m"
  std::string word;                       // gp-word
  uint32_t gp_p = 2;                      // gp-word
  uint64_t random_pairs = 0;              // gp-word homomorphism spot checks
  std::string cyclic;                     // joining "N,phiStep,rStep,p"
  std::string gp_quotient;                // joining "p,m"
  bool marker_check = false;              // hm: prime-power marker discrepancy
  uint64_t marker = 2011;
  uint32_t marker_exponent = 10;
  uint64_t marker_bound = 2017;
  uint64_t product_plus_one = 0;          // theorem4: report p_1...p_k + 1
};

struct RunResult {
  ReportTable table;
  int exit_status = 0;
};

namespace detail {

inline std::pair<Int, Int> parse_range(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("missing --n range");
  auto dots = text.find("..");
  Int lo, hi;
  try {
    if (dots == std::string::npos) {
      lo = hi = Int(text);
    } else {
      lo = Int(text.substr(0, dots));
      hi = Int(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("bad range '" + text + "' (use a..b or a single value)");
  }
  if (lo < 1 || hi < lo) throw std::invalid_argument("range must satisfy 1 <= a <= b");
  return {lo, hi};
}

inline std::vector<uint64_t> parse_u64_list(const std::string& text) {
  std::vector<uint64_t> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoull(item));
  return out;
}

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

inline std::string set_str(const std::vector<Int>& values) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ";" : "") + values[i].str();
  return out + "}";
}

inline std::string set_str_u64(const std::vector<uint64_t>& values) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i)
    out += (i ? ";" : "") + std::to_string(values[i]);
  return out + "}";
}

inline std::string progression_str(const ArithmeticProgression& ap) {
  if (ap.empty()) return "empty";
  return ap.residue().str() + " mod " + ap.modulus().str();
}

inline std::string command_echo(const RunConfig& config) {
  std::ostringstream out;
  out << config.command;
  if (!config.spec_path.empty()) out << " --spec " << config.spec_path;
  for (const auto& s : config.spec_paths) out << " --spec " << s;
  if (!config.range.empty()) out << " --n " << config.range;
  if (config.max_n) out << " --max-n " << config.max_n;
  if (config.horizon) out << " --horizon " << config.horizon;
  if (config.level) out << " --level " << config.level;
  for (auto l : config.levels) out << " --levels " << l;
  if (!config.q.empty()) out << " --q " << config.q;
  if (!config.residue.empty()) out << " --residue " << config.residue;
  if (!config.modulus.empty()) out << " --modulus " << config.modulus;
  for (auto p : config.primes) out << " --primes " << p;
  if (!config.progressions.empty()) out << " --progressions " << config.progressions;
  if (!config.word.empty()) out << " --word '" << config.word << "'";
  if (config.command == "gp-word") out << " --p " << config.gp_p;
  if (config.random_pairs) out << " --random-pairs " << config.random_pairs;
  if (!config.cyclic.empty()) out << " --cyclic " << config.cyclic;
  if (!config.gp_quotient.empty()) out << " --gp " << config.gp_quotient;
  if (config.marker_check)
    out << " --marker-check --marker " << config.marker << " --marker-exponent "
        << config.marker_exponent << " --marker-bound " << config.marker_bound;
  if (config.product_plus_one) out << " --product-plus-one " << config.product_plus_one;
  out << " --format " << config.format << " --seed " << config.seed;
  return out.str();
}

inline MultiplicityProfile profile_for(const std::vector<Int>& moduli, const Int& n) {
  bool coprime = true;
  for (std::size_t i = 0; i < moduli.size() && coprime; ++i)
    for (std::size_t j = i + 1; j < moduli.size() && coprime; ++j)
      if (gcd(moduli[i], moduli[j]) != 1) coprime = false;
  if (coprime) return closed_form_profile(moduli, n);
  std::vector<uint64_t> ms;
  for (const Int& m : moduli) ms.push_back(to_u64_checked(m, "profile modulus"));
  GroupRotation rotation((FiniteAbelianGroup(ms)));
  return oracle_profile(power(rotation, n).as_permutation());
}

}  // namespace detail

inline RunResult run(const RunConfig& config);

namespace detail {

inline RunResult run_profile(const RunConfig& config, const ModelSpecFile& spec,
                             ReportTable table) {
  auto [lo, hi] = parse_range(config.range);
  std::size_t level = config.level ? config.level : spec.depth;
  auto moduli = spec.moduli_at_level(level);
  table.header = {"n", "mm", "cardm", "multiplicity_set", "homogeneous", "dimension", "model_id"};
  for (Int n = lo; n <= hi; ++n) {
    MultiplicityProfile profile = profile_for(moduli, n);
    table.add_row({n.str(), std::to_string(profile.mm()), std::to_string(profile.cardm()),
                   set_str_u64(profile.multiplicity_set()), bool_str(profile.homogeneous()),
                   std::to_string(profile.dimension()), spec.id});
  }
  return {std::move(table), 0};
}

inline RunResult run_theorem4(const RunConfig& config, const ModelSpecFile& spec,
                              ReportTable table) {
  if (!spec.prime_spec) throw std::invalid_argument("theorem4 needs a primes-form model spec");
  table.header = {"n", "mm", "coprime_to_P"};
  if (!config.range.empty()) {
    auto [lo, hi] = parse_range(config.range);
    for (Int n = lo; n <= hi; ++n)
      table.add_row({n.str(), mm_theorem4(n, *spec.prime_spec).str(),
                     bool_str(spec.prime_spec->coprime_to(n))});
  }
  if (config.product_plus_one) {
    if (config.product_plus_one > spec.prime_spec->size())
      throw std::invalid_argument("--product-plus-one exceeds the prime count");
    Int n = 1;
    for (uint64_t i = 0; i < config.product_plus_one; ++i) n *= spec.prime_spec->prime(i);
    n += 1;
    table.add_row({n.str(), mm_theorem4(n, *spec.prime_spec).str(),
                   bool_str(spec.prime_spec->coprime_to(n))});
  }
  if (table.rows.empty()) throw std::invalid_argument("theorem4: give --n or --product-plus-one");
  return {std::move(table), 0};
}

inline RunResult run_theorem5(const RunConfig& config, const ModelSpecFile& spec,
                              ReportTable table) {
  if (!spec.prime_spec) throw std::invalid_argument("theorem5 needs a primes-form model spec");
  auto [lo, hi] = parse_range(config.range);
  table.header = {"n", "cardm", "multiplicity_set"};
  for (Int n = lo; n <= hi; ++n) {
    auto set = multiplicity_set_theorem5(n, *spec.prime_spec);
    table.add_row({n.str(), std::to_string(set.size()), set_str(set)});
  }
  return {std::move(table), 0};
}

inline RunResult run_hm(const RunConfig& config, const ModelSpecFile& spec, ReportTable table) {
  if (!spec.prime_spec) throw std::invalid_argument("hm needs a primes-form model spec");
  if (config.marker_check) {
    PrimeSpec space =
        prime_power_space_with_marker(config.marker, config.marker_exponent, config.marker_bound);
    MarkerDiscrepancyReport report = marker_discrepancy_report(space, config.marker);
    table.header = {"configuration", "check", "value", "status"};
    table.add_row({"with-marker", "hm(R^" + std::to_string(config.marker) + ")",
                   report.hm_at_marker_with.str(),
                   report.hm_at_marker_with == 1 ? "matches-target" : "diverges-from-target"});
    table.add_row({"without-marker", "hm(R^" + std::to_string(config.marker) + ")",
                   report.hm_at_marker_without.str(),
                   report.hm_at_marker_without == 1 ? "matches-target" : "diverges-from-target"});
    table.add_row({"with-marker", "hm(R^n)=n for n<" + std::to_string(config.marker),
                   report.below_marker_ok_with ? "all"
                                               : "fails at " + report.first_mismatch_with.str(),
                   report.below_marker_ok_with ? "PASS" : "FAIL"});
    table.add_row({"without-marker", "hm(R^n)=n for n<" + std::to_string(config.marker),
                   report.below_marker_ok_without
                       ? "all"
                       : "fails at " + report.first_mismatch_without.str(),
                   report.below_marker_ok_without ? "PASS" : "FAIL"});
    table.add_row({"both", "configurations disagree at the marker",
                   bool_str(report.discrepancy()), "REPORTED"});
    return {std::move(table), 0};
  }
  auto [lo, hi] = parse_range(config.range);
  table.header = {"n", "hm"};
  for (Int n = lo; n <= hi; ++n)
    table.add_row({n.str(), hm_prime_powers(n, *spec.prime_spec).str()});
  return {std::move(table), 0};
}

inline RunResult run_limit_points(const RunConfig& config, const ModelSpecFile& spec,
                                  ReportTable table) {
  if (!spec.prime_spec) throw std::invalid_argument("limit-points needs a primes-form model spec");
  if (config.horizon < 1) throw std::invalid_argument("limit-points: give --horizon >= 1");
  table.header = {"value", "first_witness"};
  for (const RatioPoint& point : ratio_scan(*spec.prime_spec, config.horizon))
    table.add_row({rational_str(point.value), std::to_string(point.witness)});
  return {std::move(table), 0};
}

inline RunResult run_verify_oracle(const RunConfig& config, const ModelSpecFile& spec,
                                   ReportTable table) {
  if (config.max_n < 1) throw std::invalid_argument("verify-oracle: give --max-n >= 1");
  std::size_t level = config.level ? config.level : spec.depth;
  auto moduli = spec.moduli_at_level(level);
  std::vector<uint64_t> ms;
  for (const Int& m : moduli) ms.push_back(to_u64_checked(m, "verify-oracle modulus"));
  GroupRotation rotation((FiniteAbelianGroup(ms)));
  table.header = {"n", "status", "detail"};
  uint64_t matches = 0;
  int status = 0;
  for (uint64_t n = 1; n <= config.max_n; ++n) {
    MultiplicityProfile closed = closed_form_profile(moduli, Int(n));
    MultiplicityProfile oracle = oracle_profile(power(rotation, Int(n)).as_permutation());
    if (closed == oracle) {
      ++matches;
    } else {
      status = 1;
      table.add_row({std::to_string(n), "FAIL",
                     "closed mm=" + std::to_string(closed.mm()) +
                         " oracle mm=" + std::to_string(oracle.mm())});
    }
  }
  table.add_row({"1.." + std::to_string(config.max_n),
                 status == 0 ? "PASS" : "FAIL",
                 std::to_string(matches) + " exact matches"});
  return {std::move(table), status};
}

inline RunResult run_rigidity(const RunConfig& config, const ModelSpecFile& spec,
                              ReportTable table) {
  ProductModel model = spec.to_product_model();
  std::size_t level = config.level ? config.level : model.depth();
  if (config.modulus.empty()) throw std::invalid_argument("rigidity: give --modulus");
  ArithmeticProgression prog(Int(config.residue.empty() ? "0" : config.residue),
                             Int(config.modulus));
  WLCertificate cert = check_rigidity(model, prog, level);
  table.header = {"stage", "claimed_limit", "progression", "verdict", "threshold", "detail"};
  for (const auto& stage : cert.stages)
    table.add_row({std::to_string(stage.stage), stage.claimed_limit, progression_str(prog),
                   wl_verdict_str(stage.verdict), stage.threshold.str(), stage.detail});
  return {std::move(table), cert.holds() ? 0 : 1};
}

inline RunResult run_wl_verify(const RunConfig& config, ReportTable table) {
  if (config.spec_paths.size() < 2)
    throw std::invalid_argument("wl-verify: give at least two --spec files");
  std::vector<ModelSpecFile> files;
  for (const auto& path : config.spec_paths) files.push_back(parse_model_spec_file(path));
  std::vector<ProductModel> models;
  for (const auto& f : files) models.push_back(f.to_product_model());
  if (config.primes.size() != models.size())
    throw std::invalid_argument("wl-verify: --primes must list one prime per model");
  std::vector<std::size_t> levels = config.levels;
  if (levels.empty())
    for (const auto& m : models) levels.push_back(m.depth());
  if (levels.size() != models.size())
    throw std::invalid_argument("wl-verify: --levels must list one level per model");

  std::vector<Int> orders;
  for (std::size_t i = 0; i < models.size(); ++i)
    orders.push_back(models[i].truncation_order(levels[i]));

  std::vector<ArithmeticProgression> progressions;
  if (!config.progressions.empty()) {
    std::istringstream in(config.progressions);
    std::string item;
    while (std::getline(in, item, ',')) {
      auto colon = item.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("wl-verify: --progressions entries are r:m");
      progressions.emplace_back(Int(item.substr(0, colon)), Int(item.substr(colon + 1)));
    }
  } else {
    // The nested alignment scheme: stage j members n satisfy
    // p_1...p_{j-1} n == 0 mod the first j-1 truncation orders and
    // == 1 mod the j-th, refined into the previous stage.
    ArithmeticProgression current = ArithmeticProgression::all_integers();
    for (std::size_t j = 2; j <= models.size(); ++j) {
      Int multiplier = 1;
      for (std::size_t i = 0; i + 1 < j; ++i) multiplier *= config.primes[i];
      for (std::size_t i = 0; i + 1 < j; ++i) {
        Int g = gcd(orders[i], multiplier);
        current = refine_progression(current, ArithmeticProgression(0, orders[i] / g));
      }
      current = refine_progression(
          current, solve_alignment(multiplier, orders[j - 1]).progression());
      progressions.push_back(current);
    }
  }
  if (progressions.size() + 1 != models.size())
    throw std::invalid_argument("wl-verify: need one progression per stage (k-1 total)");

  WLCertificate cert = check_wl(models, config.primes, progressions, levels);
  table.header = {"stage", "claimed_limit", "progression", "verdict", "threshold", "detail"};
  for (std::size_t i = 0; i < cert.stages.size(); ++i) {
    const auto& stage = cert.stages[i];
    table.add_row({std::to_string(stage.stage), stage.claimed_limit,
                   progression_str(progressions[i]), wl_verdict_str(stage.verdict),
                   stage.threshold.str(), stage.detail});
  }
  return {std::move(table), cert.holds() ? 0 : 1};
}

inline RunResult run_conjugacy(const RunConfig& config, const ModelSpecFile& spec,
                               ReportTable table) {
  ProductModel model = spec.to_product_model();
  std::size_t level = config.level ? config.level : model.depth();
  if (config.q.empty()) throw std::invalid_argument("conjugacy: give --q");
  Int q(config.q);
  table.header = {"level", "q", "check", "status", "detail"};
  int status = 0;
  for (std::size_t k = 1; k <= level; ++k) {
    MultiplierAutomorphism psi = multiplier_for(model, q, k);
    Permutation psi_perm = psi.as_permutation();
    Permutation r = model.truncate(k).second.as_permutation();
    Permutation conjugated = compose(psi_perm.inverse(), compose(r, psi_perm));
    Permutation r_q = perm_power(r, q);
    bool pointwise = conjugated == r_q;
    bool profiles = oracle_profile(r) == oracle_profile(r_q);
    if (!pointwise || !profiles) status = 1;
    table.add_row({std::to_string(k), q.str(), "psi^-1 R psi = R^q",
                   pointwise ? "PASS" : "FAIL",
                   "order " + std::to_string(r.size())});
    table.add_row({std::to_string(k), q.str(), "profile(R) = profile(R^q)",
                   profiles ? "PASS" : "FAIL",
                   "mm=" + std::to_string(oracle_profile(r).mm())});
  }
  return {std::move(table), status};
}

inline RunResult run_joining(const RunConfig& config, ReportTable table) {
  table.header = {"check", "status", "detail"};
  int status = 0;
  auto add_check = [&](const std::string& name, bool ok, const std::string& detail) {
    if (!ok) status = 1;
    table.add_row({name, ok ? "PASS" : "FAIL", detail});
  };

  Permutation phi = Permutation::identity(1);
  Permutation r = Permutation::identity(1);
  uint32_t period = 1;
  std::string instance;
  if (!config.cyclic.empty()) {
    auto v = parse_u64_list(config.cyclic);
    if (v.size() != 4) throw std::invalid_argument("joining: --cyclic N,phiStep,rStep,p");
    uint64_t n = v[0];
    FiniteAbelianGroup group({n});
    phi = GroupRotation(group, {v[1]}).as_permutation();
    r = GroupRotation(group, {v[2]}).as_permutation();
    period = static_cast<uint32_t>(v[3]);
    instance = "Z_" + std::to_string(n);
  } else if (!config.gp_quotient.empty()) {
    auto v = parse_u64_list(config.gp_quotient);
    if (v.size() != 2) throw std::invalid_argument("joining: --gp p,m");
    GpQuotientSpace space(static_cast<uint32_t>(v[0]), v[1]);
    phi = space.phi_translation();
    r = space.r_translation();
    period = space.p();
    instance = "Z_" + std::to_string(space.p()) + " x| (Z_" + std::to_string(space.m()) + ")^" +
               std::to_string(space.p());
  } else {
    throw std::invalid_argument("joining: give --cyclic or --gp");
  }

  Permutation t = perm_power(r, Int(period));
  JoiningMatrix joining = off_diagonal_joining(phi, period, r, t);
  add_check("marginals_uniform", joining.marginals_uniform(), instance);

  FactorSpace factor(phi, period);
  auto t_map = factor.factor_map(t);
  bool invariant = true;
  for (std::size_t a = 0; a < factor.size() && invariant; ++a)
    for (std::size_t b = 0; b < factor.size() && invariant; ++b)
      invariant = joining.measure(t_map[a], t_map[b]) == joining.measure(a, b);
  add_check("factor_invariance", invariant, "nu(T a, T b) = nu(a, b)");

  MultivaluedGraphReport graph = multivalued_graph_check(phi, period, r);
  add_check("branches_land_in_domain", graph.lands_in_domain,
            std::to_string(factor.size()) + " domain points");
  add_check("branch_points_distinct", graph.branch_points_distinct_in_space,
            "p = " + std::to_string(period));
  table.add_row({"reduced_branches_distinct", bool_str(graph.branches_distinct),
                 graph.coincidence_witness
                     ? "collide at x=" + std::to_string(*graph.coincidence_witness)
                     : "p-valued over the domain"});

  AdjointPairReport pair = adjoint_pair_decompose(joining.markov_operator());
  add_check("adjoint_alphas_equal", pair.alphas_equal(),
            "alpha = " + rational_str(pair.jstar_j.alpha));
  auto valuedness = pair.jstar_j.valuedness();
  table.add_row({"valuedness", valuedness ? rational_str(*valuedness) : "undefined (alpha = 0)",
                 "from J*J diagonal"});
  return {std::move(table), status};
}

inline RunResult run_gp_word(const RunConfig& config, ReportTable table) {
  table.header = {"item", "value", "detail"};
  int status = 0;
  if (!config.word.empty()) {
    auto word = parse_gp_word(config.word);
    GpNormalForm form = gp_reduce(config.gp_p, word);
    std::string exps = "(";
    for (std::size_t i = 0; i < form.exps.size(); ++i)
      exps += (i ? ";" : "") + std::to_string(form.exps[i]);
    exps += ")";
    table.add_row({"word", config.word, "p = " + std::to_string(config.gp_p)});
    table.add_row({"twist", std::to_string(form.twist), ""});
    table.add_row({"exponents", exps, ""});
    table.add_row({"is_identity", bool_str(form.is_identity()), ""});
  }
  if (config.random_pairs > 0) {
    std::mt19937_64 rng(config.seed);
    auto random_word = [&](std::size_t max_len) {
      std::vector<GpLetter> w(1 + rng() % max_len);
      for (auto& letter : w) letter = static_cast<GpLetter>(rng() % 4);
      return w;
    };
    uint64_t failures = 0;
    for (uint64_t i = 0; i < config.random_pairs; ++i) {
      auto w1 = random_word(20), w2 = random_word(20);
      auto concat = w1;
      concat.insert(concat.end(), w2.begin(), w2.end());
      if (!(gp_reduce(config.gp_p, concat) ==
            gp_reduce(config.gp_p, w1) * gp_reduce(config.gp_p, w2)))
        ++failures;
    }
    if (failures) status = 1;
    table.add_row({"homomorphism_pairs", failures == 0 ? "PASS" : "FAIL",
                   std::to_string(config.random_pairs) + " pairs, " + std::to_string(failures) +
                       " failures, seed " + std::to_string(config.seed)});
  }
  if (table.rows.empty())
    throw std::invalid_argument("gp-word: give --word and/or --random-pairs");
  return {std::move(table), status};
}

}  // namespace detail

inline RunResult run(const RunConfig& config) {
  ReportTable table;
  table.command = detail::command_echo(config);
  table.spec_hash = "-";

  auto needs_spec = [&]() -> ModelSpecFile {
    if (config.spec_path.empty())
      throw std::invalid_argument(config.command + ": give --spec <model file>");
    ModelSpecFile spec = parse_model_spec_file(config.spec_path);
    table.spec_hash = spec_hash_of(spec.source_text);
    return spec;
  };

  using Handler = RunResult (*)(const RunConfig&, const ModelSpecFile&, ReportTable);
  Handler handler = nullptr;
  if (config.command == "profile") handler = detail::run_profile;
  else if (config.command == "theorem4") handler = detail::run_theorem4;
  else if (config.command == "theorem5") handler = detail::run_theorem5;
  else if (config.command == "hm") handler = detail::run_hm;
  else if (config.command == "limit-points") handler = detail::run_limit_points;
  else if (config.command == "verify-oracle") handler = detail::run_verify_oracle;
  else if (config.command == "rigidity") handler = detail::run_rigidity;
  if (handler != nullptr) {
    ModelSpecFile spec = needs_spec();  // fills in the provenance hash
    return handler(config, spec, table);
  }
  if (config.command == "wl-verify") {
    if (!config.spec_paths.empty()) {
      std::string joined;
      for (const auto& path : config.spec_paths)
        joined += parse_model_spec_file(path).source_text;
      table.spec_hash = spec_hash_of(joined);
    }
    return detail::run_wl_verify(config, table);
  }
  if (config.command == "conjugacy") {
    ModelSpecFile spec = needs_spec();
    return detail::run_conjugacy(config, spec, table);
  }
  if (config.command == "joining") return detail::run_joining(config, table);
  if (config.command == "gp-word") return detail::run_gp_word(config, table);
  throw std::invalid_argument("unknown command '" + config.command + "'");
}

}  // namespace speclab
