#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "speclab/cli.hpp"
#include "speclab/model_spec.hpp"
#include "speclab/report.hpp"

using namespace speclab;

namespace {

std::string spec_path(const std::string& name) {
  return std::string(SPECLAB_SPEC_DIR) + "/" + name;
}

const std::vector<std::string>& row_with_first(const ReportTable& table,
                                               const std::string& key) {
  for (const auto& row : table.rows)
    if (!row.empty() && row[0] == key) return row;
  FAIL("no row with first cell '" << key << "'");
  static std::vector<std::string> none;
  return none;
}

std::string write_temp_spec(const std::string& stem, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / (stem + ".spec");
  std::ofstream out(path);
  out << body;
  out.close();
  return path.string();
}

}  // namespace

TEST_CASE("model spec parsing") {
  ModelSpecFile spec = parse_model_spec_file(spec_path("P235.spec"));
  CHECK(spec.id == "P235");
  REQUIRE(spec.prime_spec.has_value());
  CHECK(spec.prime_spec->primes() == std::vector<uint64_t>{2, 3, 5});
  CHECK(spec.depth == 3);
  CHECK(spec.moduli_at_level(2) == std::vector<Int>{2, 3});

  ModelSpecFile raw = parse_model_spec_file(spec_path("M4-9-5.spec"));
  CHECK(raw.explicit_moduli == std::vector<Int>{4, 9, 5});
  ProductModel from_raw = raw.to_product_model();
  CHECK(from_raw.spec().primes() == std::vector<uint64_t>{2, 3, 5});
  CHECK(from_raw.spec().exponents() == std::vector<uint32_t>{2, 2, 1});
}

TEST_CASE("model spec diagnostics carry line numbers") {
  auto parse = [](const std::string& text) { return parse_model_spec_text(text, "bad"); };
  CHECK_THROWS_WITH(parse("primes = 2\nwhat = 3\n"),
                    Catch::Matchers::ContainsSubstring("bad:2"));
  CHECK_THROWS_WITH(parse("primes = 2\nprimes = 3\n"),
                    Catch::Matchers::ContainsSubstring("duplicate"));
  CHECK_THROWS_WITH(parse("primes = 2, x\n"),
                    Catch::Matchers::ContainsSubstring("not an integer"));
  CHECK_THROWS(parse("moduli = 4\nprimes = 2\n"));
  CHECK_THROWS(parse("exponents = 1\n"));
  CHECK_THROWS(parse("primes = 2, 3\ndepth = 5\n"));
  CHECK_THROWS(parse("moduli = 1, 3\n"));
  CHECK_THROWS(parse(""));
  CHECK_THROWS(parse("primes = 2 = 3\nprimes"));
}

TEST_CASE("profile command tabulates closed-form profiles") {
  RunConfig config;
  config.command = "profile";
  config.spec_path = spec_path("P235.spec");
  config.range = "1..30";
  RunResult result = run(config);
  CHECK(result.exit_status == 0);
  REQUIRE(result.table.rows.size() == 30);
  CHECK(result.table.header ==
        std::vector<std::string>{"n", "mm", "cardm", "multiplicity_set", "homogeneous",
                                 "dimension", "model_id"});
  const auto& row6 = row_with_first(result.table, "6");
  CHECK(row6[1] == "6");
  CHECK(row6[2] == "1");
  CHECK(row6[3] == "{6}");
  CHECK(row6[4] == "true");
  CHECK(row6[5] == "30");
  CHECK(row6[6] == "P235");
  const auto& row7 = row_with_first(result.table, "7");
  CHECK(row7[1] == "1");
}

TEST_CASE("theorem4 command reports the coprimality check alongside the value") {
  RunConfig config;
  config.command = "theorem4";
  config.spec_path = spec_path("P235.spec");
  config.range = "1";
  config.product_plus_one = 3;  // 2*3*5 + 1 = 31
  RunResult result = run(config);
  const auto& row = row_with_first(result.table, "31");
  CHECK(row[1] == "1");
  CHECK(row[2] == "true");

  // when p_1 p_2 + 1 lands inside P the formula value and the check disagree
  std::string path = write_temp_spec("P237", "primes = 2, 3, 7\n");
  RunConfig inside;
  inside.command = "theorem4";
  inside.spec_path = path;
  inside.product_plus_one = 2;  // 2*3 + 1 = 7, which is in P
  RunResult r2 = run(inside);
  const auto& row7 = row_with_first(r2.table, "7");
  CHECK(row7[1] == "7");
  CHECK(row7[2] == "false");
  std::remove(path.c_str());
}

TEST_CASE("theorem5 command") {
  RunConfig config;
  config.command = "theorem5";
  config.spec_path = spec_path("P235.spec");
  config.range = "6";
  RunResult result = run(config);
  const auto& row = row_with_first(result.table, "6");
  CHECK(row[1] == "4");
  CHECK(row[2] == "{1;2;3;6}");
}

TEST_CASE("hm command and marker check") {
  RunConfig config;
  config.command = "hm";
  config.spec_path = spec_path("remark1-scaled.spec");
  config.range = "1..17";
  RunResult result = run(config);
  CHECK(row_with_first(result.table, "16")[1] == "16");
  CHECK(row_with_first(result.table, "17")[1] == "1");

  RunConfig marker;
  marker.command = "hm";
  marker.spec_path = spec_path("remark1-scaled.spec");
  marker.marker_check = true;
  marker.marker = 17;
  marker.marker_exponent = 4;
  marker.marker_bound = 17;
  RunResult mres = run(marker);
  CHECK(mres.exit_status == 0);
  const auto& with = row_with_first(mres.table, "with-marker");
  CHECK(with[2] == "17");
  CHECK(row_with_first(mres.table, "both")[2] == "true");
}

TEST_CASE("limit-points command") {
  RunConfig config;
  config.command = "limit-points";
  config.spec_path = spec_path("P235.spec");
  config.horizon = 100;
  RunResult result = run(config);
  bool has_seventh = false;
  for (const auto& row : result.table.rows)
    if (row[0] == "1/7" && row[1] == "7") has_seventh = true;
  CHECK(has_seventh);

  config.horizon = 0;
  CHECK_THROWS(run(config));
}

TEST_CASE("verify-oracle command passes on the sample models") {
  for (const char* name : {"P235.spec", "M4-9-5.spec", "M8-3-25.spec"}) {
    RunConfig config;
    config.command = "verify-oracle";
    config.spec_path = spec_path(name);
    config.max_n = 40;
    RunResult result = run(config);
    CHECK(result.exit_status == 0);
    REQUIRE_FALSE(result.table.rows.empty());
    CHECK(result.table.rows.back()[1] == "PASS");
  }
}

TEST_CASE("rigidity command exit status follows the verdict") {
  RunConfig config;
  config.command = "rigidity";
  config.spec_path = spec_path("P235.spec");
  config.modulus = "30";
  CHECK(run(config).exit_status == 0);

  config.modulus = "6";
  RunResult failed = run(config);  // level 3 needs multiples of 30
  CHECK(failed.exit_status == 1);
  CHECK(failed.table.rows[0][3] == std::string("fails"));
}

TEST_CASE("wl-verify command derives and checks the alignment chain") {
  RunConfig config;
  config.command = "wl-verify";
  config.spec_paths = {spec_path("P25.spec"), spec_path("P3.spec")};
  config.primes = {2, 3};
  RunResult result = run(config);
  CHECK(result.exit_status == 0);
  REQUIRE(result.table.rows.size() == 1);
  CHECK(result.table.rows[0][3] == "holds");

  // over-rigid override: multiples of the full product order force I (x) I
  config.progressions = "0:30";
  RunResult wrong = run(config);
  CHECK(wrong.exit_status == 1);
  CHECK(wrong.table.rows[0][3] == "fails");
}

TEST_CASE("conjugacy command verifies the multiplier identity") {
  RunConfig config;
  config.command = "conjugacy";
  config.spec_path = spec_path("P5-11-13.spec");
  config.q = "2";
  config.level = 3;
  RunResult result = run(config);
  CHECK(result.exit_status == 0);
  for (const auto& row : result.table.rows) CHECK(row[3] == "PASS");
}

TEST_CASE("joining command on both instance kinds") {
  RunConfig cyclic;
  cyclic.command = "joining";
  cyclic.cyclic = "15,5,1,3";
  RunResult result = run(cyclic);
  CHECK(result.exit_status == 0);
  CHECK(row_with_first(result.table, "marginals_uniform")[1] == "PASS");
  CHECK(row_with_first(result.table, "reduced_branches_distinct")[1] == "false");

  RunConfig gp;
  gp.command = "joining";
  gp.gp_quotient = "3,2";
  RunResult gpres = run(gp);
  CHECK(gpres.exit_status == 0);
  CHECK(row_with_first(gpres.table, "reduced_branches_distinct")[1] == "true");
  CHECK(row_with_first(gpres.table, "valuedness")[1] == "3");

  RunConfig neither;
  neither.command = "joining";
  CHECK_THROWS(run(neither));
}

TEST_CASE("gp-word command") {
  RunConfig config;
  config.command = "gp-word";
  config.gp_p = 2;
  config.word = "phi s phi^-1 s";
  config.random_pairs = 100;
  config.seed = 7;
  RunResult result = run(config);
  CHECK(result.exit_status == 0);
  CHECK(row_with_first(result.table, "twist")[1] == "0");
  CHECK(row_with_first(result.table, "exponents")[1] == "(1;1)");
  CHECK(row_with_first(result.table, "is_identity")[1] == "false");
  CHECK(row_with_first(result.table, "homomorphism_pairs")[1] == "PASS");
}

TEST_CASE("reports are deterministic and exact") {
  RunConfig config;
  config.command = "limit-points";
  config.spec_path = spec_path("P235.spec");
  config.horizon = 500;
  config.seed = 42;
  std::string first = render_report(run(config).table, "csv");
  std::string second = render_report(run(config).table, "csv");
  CHECK(first == second);
  CHECK(first.find("spec_hash=fnv1a:") != std::string::npos);
  CHECK(first.find("1/7") != std::string::npos);  // exact rationals, no decimals

  std::string structured = render_report(run(config).table, "text");
  CHECK(structured.find("\"provenance\"") != std::string::npos);
  CHECK(structured == render_report(run(config).table, "text"));

  CHECK_THROWS(render_report(run(config).table, "yaml"));
}

TEST_CASE("csv escaping quotes awkward cells") {
  ReportTable table;
  table.header = {"a", "b"};
  table.add_row({"plain", "with,comma"});
  table.add_row({"with\"quote", "x"});
  table.spec_hash = "-";
  table.command = "test";
  std::string csv = render_csv(table);
  CHECK(csv.find("\"with,comma\"") != std::string::npos);
  CHECK(csv.find("\"with\"\"quote\"") != std::string::npos);
  CHECK_THROWS(table.add_row({"too", "many", "cells"}));
}

TEST_CASE("run rejects unknown commands and missing specs") {
  RunConfig config;
  config.command = "nonsense";
  CHECK_THROWS(run(config));
  config.command = "profile";
  config.range = "1..3";
  CHECK_THROWS(run(config));  // no spec path
  config.spec_path = spec_path("P235.spec");
  config.range = "5..3";
  CHECK_THROWS(run(config));  // bad range
}
