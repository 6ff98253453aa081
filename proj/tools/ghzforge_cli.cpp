/* ghzforge command line: constructs multi-setting GHZ paradox instances and
 * runs the verification, refutation, genuineness and Bell analyses over them,
 * emitting machine-readable JSON reports.
 *
 * Exit codes: 0 ok, 1 verification failed, 2 contract violation, 3 budget
 * exceeded, 4 malformed input.
 */
#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ghzforge/bell.hpp"
#include "ghzforge/errors.hpp"
#include "ghzforge/genuineness.hpp"
#include "ghzforge/json_io.hpp"
#include "ghzforge/lhv.hpp"
#include "ghzforge/paradox.hpp"
#include "ghzforge/qudit.hpp"

namespace {

using namespace ghzforge;

constexpr uint64_t kDenseCheckDimLimit = 256;
constexpr double kDenseCheckTol = 1e-12;

struct Options {
  int n = 0;
  int d = 2;
  std::string family;
  std::string input;
  std::string output;
  std::string csv;
  uint64_t budget = kDefaultEnumerationBudget;
  double tol = kEigenRelationTol;
  uint64_t seed = 0;
  uint64_t shots = 100000;
  int workers = 1;
  int sweep_limit = kDefaultSweepLimit;
  bool dense_check = false;
};

ParadoxInstance load_instance(const Options& opt) {
  if (opt.input.empty())
    throw ContractError("this command needs --input pointing at an instance");
  return instance_from_json(load_json_file(opt.input));
}

SettingVector family_vector(const Options& opt, int d) {
  if (opt.family == "theorem2") {
    if (d != 2) throw ContractError("family theorem2 is defined at d = 2");
    return ladder_vector(opt.n);
  }
  if (opt.family == "three-setting") return three_setting_vector(opt.n, d);
  if (opt.family == "custom-file") {
    if (opt.input.empty())
      throw ContractError("family custom-file needs --input");
    return setting_vector_from_json(load_json_file(opt.input));
  }
  throw ContractError("family \"" + opt.family +
                      "\" does not name a setting vector here; use theorem2, "
                      "three-setting or custom-file");
}

ParadoxInstance build_family(const Options& opt) {
  if (opt.family == "mermin") {
    if (opt.n != 0 && opt.n != 3)
      throw ContractError("family mermin is the fixed 3-party instance");
    if (opt.d != 2)
      throw ContractError("family mermin is defined at d = 2");
    return mermin_instance();
  }
  return assemble_instance(family_vector(opt, opt.d), opt.d);
}

// Cross-validates the monomial fast path against the dense matrix action.
void dense_cross_check(const MonomialOperator& op, const StateVector& psi) {
  uint64_t dim = checked_dimension(op.n, op.d, kDenseCheckDimLimit);
  Eigen::VectorXcd direct = dense_matrix(op, dim) * psi.to_eigen();
  Eigen::VectorXcd fast = apply(op, psi).to_eigen();
  if ((direct - fast).norm() > kDenseCheckTol)
    throw InternalError("dense cross-check failed for an operator action");
}

void require_dense_check_allowed(const ParadoxInstance& inst) {
  uint64_t dim = 1;
  for (int i = 0; i < inst.n; ++i) dim *= uint64_t(inst.d);
  if (dim > kDenseCheckDimLimit)
    throw ContractError("--dense-check is allowed only when d^n <= " +
                        std::to_string(kDenseCheckDimLimit));
}

int cmd_construct(const Options& opt, Json& out) {
  ParadoxInstance inst = build_family(opt);
  out = instance_to_json(inst);
  return 0;
}

int cmd_verify(const Options& opt, Json& payload) {
  ParadoxInstance inst = load_instance(opt);
  if (opt.dense_check) require_dense_check_allowed(inst);
  StateVector psi = inst.reference_state();
  Json rows = Json::array();
  bool all_pass = true;
  for (size_t i = 0; i < inst.observables.size(); ++i) {
    const MonomialOperator& op = inst.observables[i];
    if (opt.dense_check) dense_cross_check(op, psi);
    StateVector image = apply(op, psi);
    std::complex<double> omega = phase_to_complex(inst.targets[i]);
    double residual2 = 0.0;
    for (uint64_t a = 0; a < psi.dim(); ++a)
      residual2 += std::norm(image[a] - omega * psi[a]);
    double residual = std::sqrt(residual2);
    std::optional<PhaseExponent> measured = eigen_relation(op, psi, opt.tol);
    bool pass = measured.has_value() && *measured == inst.targets[i] &&
                residual <= opt.tol;
    all_pass = all_pass && pass;
    Json row;
    row["index"] = i;
    row["target"] = inst.targets[i].str();
    row["measured"] = measured ? Json(measured->str()) : Json(nullptr);
    row["residual"] = residual;
    row["pass"] = pass;
    rows.push_back(std::move(row));
    if (!pass)
      std::cerr << "verification failed: observable " << i << " measured "
                << (measured ? measured->str() : std::string("no eigenvalue"))
                << ", target " << inst.targets[i].str() << "\n";
  }
  payload["pass"] = all_pass;
  payload["observables"] = std::move(rows);
  return all_pass ? 0 : 1;
}

int cmd_refute(const Options& opt, Json& payload) {
  ParadoxInstance inst = load_instance(opt);
  ParityCertificate parity = parity_certificate(inst);
  std::optional<LhvSearchResult> search;
  try {
    search = lhv_search(inst, opt.budget, opt.workers);
  } catch (const ResourceError&) {
    // The certificate alone settles contradiction cases without enumeration.
    if (parity.verdict != ParityVerdict::kContradiction) throw;
  }
  payload = lhv_report(search, parity);
  return 0;
}

int cmd_genuine(const Options& opt, Json& payload) {
  ParadoxInstance inst = load_instance(opt);
  GenuinenessVerdict verdict =
      genuineness_check(inst, opt.sweep_limit, opt.budget, opt.workers);
  payload = genuineness_to_json(verdict);
  return 0;
}

int cmd_bell(const Options& opt, Json& payload) {
  if (opt.d != 2)
    throw ContractError("the derived inequality is defined at d = 2");
  SettingVector r = family_vector(opt, 2);
  BellExpression expr = build_bell(r);
  ParadoxInstance inst = assemble_instance(r, 2);
  StateVector psi = inst.reference_state();
  if (opt.dense_check) {
    require_dense_check_allowed(inst);
    for (const BellTerm& term : expr.terms) dense_cross_check(term.op, psi);
  }
  ClassicalBoundResult classical = classical_bound(expr, opt.budget);
  double quantum = quantum_value(expr, psi);
  payload["n"] = expr.n;
  payload["d"] = expr.d;
  payload["sigma"] = expr.sigma;
  payload["terms"] = expr.terms.size();
  if (classical.exact_value)
    payload["classical_bound"] = Rational(*classical.exact_value).str();
  else
    payload["classical_bound"] = classical.value;
  payload["classical_witness"] = assignment_to_json(classical.witness);
  payload["patterns_enumerated"] = classical.patterns_enumerated;
  payload["quantum_value"] = quantum;
  payload["gap"] = quantum - classical.value;
  return 0;
}

int cmd_sample(const Options& opt, Json& payload) {
  if (opt.d != 2)
    throw ContractError("the derived inequality is defined at d = 2");
  SettingVector r = family_vector(opt, 2);
  BellExpression expr = build_bell(r);
  StateVector psi = assemble_instance(r, 2).reference_state();
  SampleReport report =
      sample_correlations(expr, psi, opt.shots, opt.seed, opt.workers);
  payload = sample_to_json(report);
  if (!opt.csv.empty()) write_text_file(opt.csv, sample_csv(report));
  return 0;
}

void emit(const Options& opt, const Json& report) {
  std::string text = report.dump(2) + "\n";
  if (opt.output.empty())
    std::cout << text;
  else
    write_text_file(opt.output, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-setting GHZ paradox toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--output", opt.output, "write the report here")
        ->envname("GHZFORGE_OUTPUT");
    cmd->add_option("--workers", opt.workers, "worker thread count")
        ->envname("GHZFORGE_WORKERS")
        ->check(CLI::PositiveNumber);
    return cmd;
  };
  auto add_family = [&opt](CLI::App* cmd) {
    cmd->add_option("--family", opt.family,
                    "theorem2 | three-setting | mermin | custom-file")
        ->envname("GHZFORGE_FAMILY")
        ->required();
    cmd->add_option("--n", opt.n, "party count")->envname("GHZFORGE_N");
    cmd->add_option("--d", opt.d, "local dimension")->envname("GHZFORGE_D");
    cmd->add_option("--input", opt.input, "setting vector file (custom-file)")
        ->envname("GHZFORGE_INPUT");
    return cmd;
  };
  auto add_input = [&opt](CLI::App* cmd) {
    cmd->add_option("--input", opt.input, "instance JSON file")
        ->envname("GHZFORGE_INPUT")
        ->required();
    return cmd;
  };
  auto add_budget = [&opt](CLI::App* cmd) {
    cmd->add_option("--budget", opt.budget, "enumeration budget")
        ->envname("GHZFORGE_BUDGET")
        ->check(CLI::PositiveNumber);
    return cmd;
  };

  add_family(add_common(
      app.add_subcommand("construct", "build a certified paradox instance")));

  CLI::App* verify = add_input(add_common(app.add_subcommand(
      "verify", "check every observable stabilizes the reference state")));
  verify->add_option("--tol", opt.tol, "eigen relation tolerance")
      ->envname("GHZFORGE_TOL")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--dense-check", opt.dense_check,
                   "cross-validate with dense matrices (d^n <= 256)")
      ->envname("GHZFORGE_DENSE_CHECK");

  add_budget(add_input(add_common(app.add_subcommand(
      "refute", "exhaustive local-hidden-variable analysis"))));

  CLI::App* genuine = add_budget(add_input(add_common(app.add_subcommand(
      "genuine", "party-subset reducibility sweep"))));
  genuine->add_option("--sweep-limit", opt.sweep_limit,
                      "largest party count the sweep accepts")
      ->envname("GHZFORGE_SWEEP_LIMIT")
      ->check(CLI::PositiveNumber);

  CLI::App* bell = add_budget(add_family(add_common(app.add_subcommand(
      "bell", "classical and quantum values of the derived inequality"))));
  bell->add_flag("--dense-check", opt.dense_check,
                 "cross-validate with dense matrices (d^n <= 256)")
      ->envname("GHZFORGE_DENSE_CHECK");

  CLI::App* sample = add_family(add_common(app.add_subcommand(
      "sample", "simulate local measurements of the inequality")));
  sample->add_option("--shots", opt.shots, "measurement shots per term")
      ->envname("GHZFORGE_SHOTS")
      ->check(CLI::PositiveNumber);
  sample->add_option("--seed", opt.seed, "random seed")
      ->envname("GHZFORGE_SEED");
  sample->add_option("--csv", opt.csv, "also write per-batch means as CSV")
      ->envname("GHZFORGE_CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* active = app.get_subcommands().front();
  const std::string command = active->get_name();

  Json config;
  config["command"] = command;
  if (command == "construct" || command == "bell" || command == "sample") {
    config["family"] = opt.family;
    config["n"] = opt.n;
    config["d"] = command == "construct" ? opt.d : 2;
  }
  if (!opt.input.empty()) config["input"] = opt.input;
  if (command == "verify") {
    config["tol"] = opt.tol;
    config["dense_check"] = opt.dense_check;
  }
  if (command == "refute" || command == "genuine" || command == "bell")
    config["budget"] = opt.budget;
  if (command == "genuine") config["sweep_limit"] = opt.sweep_limit;
  if (command == "bell") config["dense_check"] = opt.dense_check;
  if (command == "sample") {
    config["shots"] = opt.shots;
    config["seed"] = opt.seed;
  }
  config["workers"] = opt.workers;

  try {
    auto start = std::chrono::steady_clock::now();
    Json payload = Json::object();
    int code = 0;
    if (command == "construct")
      code = cmd_construct(opt, payload);
    else if (command == "verify")
      code = cmd_verify(opt, payload);
    else if (command == "refute")
      code = cmd_refute(opt, payload);
    else if (command == "genuine")
      code = cmd_genuine(opt, payload);
    else if (command == "bell")
      code = cmd_bell(opt, payload);
    else
      code = cmd_sample(opt, payload);
    double wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    // Instance files follow the plain instance schema; analysis reports get
    // the reproducibility envelope.
    Json report = command == "construct"
                      ? payload
                      : wrap_report(config, payload, wall_ms);
    emit(opt, report);
    return code;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 4;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
