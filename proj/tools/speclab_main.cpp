#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "speclab/speclab.hpp"

namespace {

void add_common(CLI::App* cmd, speclab::RunConfig& config) {
  cmd->add_option("--format", config.format, "Output format: csv or text")
      ->check(CLI::IsMember({"csv", "text", "structured", "json"}));
  cmd->add_option("--out", config.out_path, "Write the report to this file");
  cmd->add_option("--seed", config.seed, "Random seed for sampled checks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speclab: exact spectral multiplicity workbench for finite rotation models"};
  app.require_subcommand(1);

  speclab::RunConfig config;

  auto* profile = app.add_subcommand("profile", "Multiplicity profile table for R^n");
  profile->add_option("--spec", config.spec_path)->required();
  profile->add_option("--n", config.range, "Range a..b or single n")->required();
  profile->add_option("--level", config.level, "Truncation level (default: full depth)");
  add_common(profile, config);

  auto* theorem4 = app.add_subcommand("theorem4", "Square-free product multiplicity mm(R^N)");
  theorem4->add_option("--spec", config.spec_path)->required();
  theorem4->add_option("--n,--N", config.range);
  theorem4->add_option("--product-plus-one", config.product_plus_one,
                       "Also report N = p_1...p_k + 1 with its coprimality check");
  add_common(theorem4, config);

  auto* theorem5 = app.add_subcommand("theorem5", "Multiplicity set of R^N (subset products)");
  theorem5->add_option("--spec", config.spec_path)->required();
  theorem5->add_option("--n,--N", config.range)->required();
  add_common(theorem5, config);

  auto* hm = app.add_subcommand("hm", "Homogeneous multiplicity on the prime-power space");
  hm->add_option("--spec", config.spec_path)->required();
  hm->add_option("--n", config.range);
  hm->add_flag("--marker-check", config.marker_check,
               "Report the first-power marker discrepancy on the full prime-power space");
  hm->add_option("--marker", config.marker, "Marker prime (default 2011)");
  hm->add_option("--marker-exponent", config.marker_exponent,
                 "Exponent for non-marker primes (default 10)");
  hm->add_option("--marker-bound", config.marker_bound,
                 "Include primes up to this bound (default 2017)");
  add_common(hm, config);

  auto* limits = app.add_subcommand("limit-points", "Distinct values of hm(R^n)/n");
  limits->add_option("--spec", config.spec_path)->required();
  limits->add_option("--horizon", config.horizon)->required();
  add_common(limits, config);

  auto* verify = app.add_subcommand("verify-oracle",
                                    "Closed form vs. eigen-oracle on every power up to max-n");
  verify->add_option("--spec", config.spec_path)->required();
  verify->add_option("--max-n", config.max_n)->required();
  verify->add_option("--level", config.level);
  add_common(verify, config);

  auto* rigidity = app.add_subcommand("rigidity", "Rigidity of a progression on a truncation");
  rigidity->add_option("--spec", config.spec_path)->required();
  rigidity->add_option("--residue", config.residue, "Progression residue (default 0)");
  rigidity->add_option("--modulus", config.modulus)->required();
  rigidity->add_option("--level", config.level);
  add_common(rigidity, config);

  auto* wl = app.add_subcommand("wl-verify", "Weak-limit chain certificate on product models");
  wl->add_option("--spec", config.spec_paths, "Model spec per factor (repeat)")->required();
  wl->add_option("--primes", config.primes, "Group prime p_j per factor")->required();
  wl->add_option("--levels", config.levels, "Truncation level per factor");
  wl->add_option("--progressions", config.progressions,
                 "Override stage progressions as r:m,r:m,... (default: derive by alignment)");
  add_common(wl, config);

  auto* conjugacy = app.add_subcommand("conjugacy", "Multiplier conjugation Psi^-1 R Psi = R^q");
  conjugacy->add_option("--spec", config.spec_path)->required();
  conjugacy->add_option("--q", config.q)->required();
  conjugacy->add_option("--level", config.level);
  add_common(conjugacy, config);

  auto* joining = app.add_subcommand("joining", "Off-diagonal joining and Markov decomposition");
  joining->add_option("--cyclic", config.cyclic, "Cyclic instance: N,phiStep,rStep,p");
  joining->add_option("--gp", config.gp_quotient, "Group quotient instance: p,m");
  add_common(joining, config);

  auto* gp_word = app.add_subcommand("gp-word", "Normal form of a word in s, phi");
  gp_word->add_option("--p", config.gp_p, "Order of phi")->required();
  gp_word->add_option("--word", config.word, "Tokens: s s^-1 phi phi^-1");
  gp_word->add_option("--random-pairs", config.random_pairs,
                      "Seeded homomorphism spot checks");
  add_common(gp_word, config);

  CLI11_PARSE(app, argc, argv);
  config.command = app.get_subcommands().front()->get_name();

  try {
    speclab::RunResult result = speclab::run(config);
    std::string format = config.format == "structured" || config.format == "json"
                             ? "text"
                             : config.format;
    speclab::write_report(result.table, format, config.out_path, std::cout);
    return result.exit_status;
  } catch (const std::exception& e) {
    std::cerr << "speclab: " << e.what() << "\n";
    return 2;
  }
}
