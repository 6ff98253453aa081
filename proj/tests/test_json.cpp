#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "ghzforge/bell.hpp"
#include "ghzforge/errors.hpp"
#include "ghzforge/genuineness.hpp"
#include "ghzforge/json_io.hpp"
#include "ghzforge/lhv.hpp"
#include "ghzforge/paradox.hpp"
#include "fixtures.hpp"

using namespace ghzforge;

namespace {

void check_instance_round_trip(const ParadoxInstance& inst) {
  Json first = instance_to_json(inst);
  ParadoxInstance parsed = instance_from_json(first);
  CHECK(parsed.n == inst.n);
  CHECK(parsed.d == inst.d);
  CHECK(parsed.sigma == inst.sigma);
  CHECK(parsed.certified == inst.certified);
  CHECK(parsed.observables == inst.observables);
  CHECK(parsed.targets == inst.targets);
  CHECK(parsed.state_phases == inst.state_phases);
  // Byte-identical second pass: nothing is lost or reformatted.
  CHECK(instance_to_json(parsed).dump() == first.dump());
}

}  // namespace

TEST_CASE("operator serialization is exact") {
  MonomialOperator op;
  op.n = 3;
  op.d = 4;
  op.params = {Rational(0), Rational(-1, 6), Rational(1, 6)};
  op.global_phase = PhaseExponent(3, 4);
  Json j = operator_to_json(op);
  CHECK(j["n"] == 3);
  CHECK(j["d"] == 4);
  CHECK(j["params"] == Json::array({"0", "-1/6", "1/6"}));
  CHECK(j["global_phase"] == "3/4");
  CHECK(operator_from_json(j) == op);

  Json plain = operator_to_json(MonomialOperator{2, 2, {Rational(0), Rational(0)}, {}});
  // Integer-valued rationals read back from bare integers too.
  plain["params"] = Json::array({0, 0});
  CHECK(operator_from_json(plain).params == std::vector<Rational>(2, Rational(0)));
}

TEST_CASE("state serialization round-trips amplitudes exactly") {
  StateVector psi = ghz_state_with_phases(
      2, 3, {PhaseExponent(), PhaseExponent(1, 3), PhaseExponent(2, 3)});
  Json j = state_to_json(psi);
  CHECK(j["amplitudes"].size() == 9);
  StateVector back = state_from_json(j);
  REQUIRE(back.dim() == psi.dim());
  for (uint64_t i = 0; i < psi.dim(); ++i) CHECK(back[i] == psi[i]);
  CHECK(state_to_json(back).dump() == j.dump());
}

TEST_CASE("instance round-trip for every built-in family") {
  for (int n = 3; n <= 8; ++n)
    check_instance_round_trip(assemble_instance(ladder_vector(n), 2));
  for (int d : {2, 4}) {
    check_instance_round_trip(
        assemble_instance(three_setting_vector(4, d), d));
    check_instance_round_trip(
        assemble_instance(three_setting_vector(6, d), d));
  }
  check_instance_round_trip(mermin_instance());
  check_instance_round_trip(testing::reducible_control_instance());
}

TEST_CASE("phase arrays appear only when some entry is nonzero") {
  ParadoxInstance plain;
  plain.n = 2;
  plain.d = 2;
  plain.sigma = 2;
  MonomialOperator xx{2, 2, {Rational(0), Rational(0)}, {}};
  plain.observables = {xx, xx};
  plain.targets = {PhaseExponent(), PhaseExponent()};
  plain.state_phases = {PhaseExponent(), PhaseExponent()};
  plain.validate();
  Json j = instance_to_json(plain);
  CHECK_FALSE(j.contains("state_phases"));
  CHECK_FALSE(j.contains("global_phases"));
  ParadoxInstance back = instance_from_json(j);
  CHECK(back.state_phases == plain.state_phases);
  CHECK(back.observables == plain.observables);

  Json ladder = instance_to_json(assemble_instance(ladder_vector(3), 2));
  CHECK_FALSE(ladder.contains("state_phases"));
  Json mermin = instance_to_json(mermin_instance());
  CHECK(mermin["state_phases"] == Json::array({"0", "1/2"}));
}

TEST_CASE("malformed documents raise ParseError with a location") {
  CHECK_THROWS_AS(parse_json_text("{not json", "input.json"), ParseError);
  try {
    parse_json_text("{not json", "input.json");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("input.json") != std::string::npos);
  }
  CHECK_THROWS_AS(load_json_file("/nonexistent/path.json"), ContractError);

  Json good = instance_to_json(mermin_instance());
  Json missing = good;
  missing.erase("targets");
  CHECK_THROWS_AS(instance_from_json(missing), ParseError);
  Json short_targets = good;
  short_targets["targets"].erase(0);
  CHECK_THROWS_AS(instance_from_json(short_targets), ParseError);
  Json bad_rational = good;
  bad_rational["vectors"][0][1] = "1/x";
  CHECK_THROWS_AS(instance_from_json(bad_rational), ParseError);
  Json bad_sigma = good;
  bad_sigma["sigma"] = 2;  // n = 3 requires sigma = 1
  CHECK_THROWS_AS(instance_from_json(bad_sigma), ParseError);
  Json bad_type = good;
  bad_type["certified"] = "yes";
  CHECK_THROWS_AS(instance_from_json(bad_type), ParseError);

  Json state = state_to_json(ghz_state(2, 2));
  state["amplitudes"].erase(0);
  CHECK_THROWS_AS(state_from_json(state), ParseError);
}

TEST_CASE("lhv report verdicts") {
  ParadoxInstance mermin = mermin_instance();
  ParityCertificate parity = parity_certificate(mermin);
  LhvSearchResult search = lhv_search(mermin);
  Json paradox = lhv_report(search, parity);
  CHECK(paradox["verdict"] == "paradox");
  CHECK(paradox["satisfying_count"] == 0);
  CHECK(paradox["witness"].is_null());
  CHECK(paradox["parity"]["verdict"] == "contradiction");
  CHECK(paradox["parity"]["rhs_exponent"] == 1);
  CHECK(paradox["enumerated"] == search.enumerated);

  // Parity-only run: certificate alone proves the paradox.
  Json certificate_only = lhv_report(std::nullopt, parity);
  CHECK(certificate_only["verdict"] == "paradox");
  CHECK(certificate_only["satisfying_count"].is_null());
  CHECK(certificate_only["enumerated"] == 0);

  ParadoxInstance soluble;
  soluble.n = 2;
  soluble.d = 2;
  soluble.sigma = 2;
  soluble.observables = {
      MonomialOperator{2, 2, {Rational(0), Rational(0)}, {}},
      MonomialOperator{2, 2, {Rational(-1, 2), Rational(-1, 2)}, {}}};
  soluble.targets = {PhaseExponent(), PhaseExponent(1, 2)};
  soluble.state_phases = {PhaseExponent(), PhaseExponent()};
  soluble.validate();
  ParityCertificate soluble_parity = parity_certificate(soluble);
  LhvSearchResult soluble_search = lhv_search(soluble);
  REQUIRE(soluble_search.satisfying_count > 0);
  Json no_paradox = lhv_report(soluble_search, soluble_parity);
  CHECK(no_paradox["verdict"] == "no-paradox");
  CHECK(no_paradox["satisfying_count"] == soluble_search.satisfying_count);
  REQUIRE_FALSE(no_paradox["witness"].is_null());
  CHECK(assignment_from_json(no_paradox["witness"]) == *soluble_search.witness);

  Json inconclusive = lhv_report(std::nullopt, soluble_parity);
  CHECK(inconclusive["verdict"] == "inconclusive");
}

TEST_CASE("genuineness serialization") {
  GenuinenessVerdict genuine =
      genuineness_check(assemble_instance(ladder_vector(3), 2));
  Json j = genuineness_to_json(genuine);
  CHECK(j["genuine"] == true);
  CHECK(j["witness"].is_null());
  CHECK(j["candidates_checked"] == genuine.candidates_checked);
  CHECK(j["oracle_calls"] == genuine.oracle_calls);

  GenuinenessVerdict reducible =
      genuineness_check(testing::reducible_control_instance());
  Json r = genuineness_to_json(reducible);
  CHECK(r["genuine"] == false);
  REQUIRE_FALSE(r["witness"].is_null());
  CHECK(r["witness"]["beta"] == Json::array({1, 2, 3}));
  CHECK(r["witness"]["alpha"] == Json::array({0, 1, 2, 3}));
  CHECK(r["witness"]["eigenvalues"].size() == 4);
  for (const Json& value : r["witness"]["eigenvalues"])
    CHECK(value.is_string());
}

TEST_CASE("sample report JSON and CSV export") {
  BellExpression expr = build_bell(ladder_vector(4));
  StateVector psi =
      assemble_instance(ladder_vector(4), 2).reference_state();
  SampleReport report = sample_correlations(expr, psi, 100, 7);
  Json j = sample_to_json(report);
  CHECK(j["shots"] == 100);
  CHECK(j["seed"] == 7);
  CHECK(j["generator"] == "splitmix64");
  CHECK(j["terms"].size() == expr.terms.size());
  CHECK(j["estimate"] == 6.0);  // stabilizer sampling is exact at d = 2
  CHECK(j["marginal_counts"].size() == 4);
  CHECK(j["partition"].size() == 1);

  std::string csv = sample_csv(report);
  size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 1 + expr.terms.size() * size_t(kSampleBatches));
  CHECK(csv.rfind("term,batch,mean,stderr\n", 0) == 0);
  CHECK(csv.find("0,0,1,0") != std::string::npos);
}

TEST_CASE("report envelope carries version, config and a stable hash") {
  Json config = {{"command", "verify"}, {"n", 4}, {"tol", 1e-10}};
  Json payload = {{"verdict", "paradox"}};
  Json report = wrap_report(config, payload, 12.5);
  CHECK(report["version"] == kVersion);
  CHECK(report["config"] == config);
  CHECK(report["wall_ms"] == 12.5);
  CHECK(report["verdict"] == "paradox");
  std::string hash = report["config_hash"];
  CHECK(hash.size() == 16);
  CHECK(hash == config_hash(config));
  Json other = config;
  other["n"] = 5;
  CHECK(config_hash(other) != hash);
  std::vector<std::string> keys;
  for (const auto& [key, value] : report.items()) keys.push_back(key);
  REQUIRE(keys.size() == 5);
  CHECK(keys[0] == "version");
  CHECK(keys[3] == "wall_ms");
}
