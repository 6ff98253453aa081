/* JSON serialization for instances, operators, states and analysis reports. */
#include "ghzforge/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "ghzforge/errors.hpp"

namespace ghzforge {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const Json& field(const Json& j, const std::string& where,
                  const std::string& key) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing field \"" + key + "\"");
  return *it;
}

int int_field(const Json& j, const std::string& where, const std::string& key) {
  const Json& v = field(j, where, key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

bool bool_field(const Json& j, const std::string& where,
                const std::string& key) {
  const Json& v = field(j, where, key);
  if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
  return v.get<bool>();
}

const Json& array_field(const Json& j, const std::string& where,
                        const std::string& key) {
  const Json& v = field(j, where, key);
  if (!v.is_array()) fail(where + "." + key, "expected an array");
  return v;
}

Rational rational_from(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (!v.is_string()) fail(where, "expected a rational string \"p/q\"");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

PhaseExponent phase_from(const Json& v, const std::string& where) {
  return PhaseExponent(rational_from(v, where));
}

Json settings_map_to_json(const std::map<Rational, int>& entries) {
  Json j = Json::object();
  for (const auto& [setting, value] : entries) j[setting.str()] = value;
  return j;
}

std::map<Rational, int> settings_map_from_json(const Json& j,
                                               const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object keyed by setting");
  std::map<Rational, int> entries;
  for (const auto& [key, value] : j.items()) {
    Rational setting;
    try {
      setting = Rational::parse(key);
    } catch (const std::exception& e) {
      fail(where + "." + key, e.what());
    }
    if (!value.is_number_integer())
      fail(where + "." + key, "expected an integer");
    entries[setting] = value.get<int>();
  }
  return entries;
}

Json term_sample_to_json(const TermSample& t) {
  Json j;
  j["mean"] = t.mean;
  j["std_error"] = t.std_error;
  j["variance"] = t.variance;
  return j;
}

}  // namespace

Json operator_to_json(const MonomialOperator& op) {
  Json j;
  j["n"] = op.n;
  j["d"] = op.d;
  Json params = Json::array();
  for (const Rational& r : op.params) params.push_back(r.str());
  j["params"] = std::move(params);
  j["global_phase"] = op.global_phase.str();
  return j;
}

MonomialOperator operator_from_json(const Json& j) {
  const std::string where = "operator";
  MonomialOperator op;
  op.n = int_field(j, where, "n");
  op.d = int_field(j, where, "d");
  const Json& params = array_field(j, where, "params");
  for (size_t i = 0; i < params.size(); ++i)
    op.params.push_back(rational_from(
        params[i], where + ".params[" + std::to_string(i) + "]"));
  if (j.contains("global_phase"))
    op.global_phase = phase_from(j["global_phase"], where + ".global_phase");
  try {
    op.validate();
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  return op;
}

Json state_to_json(const StateVector& psi) {
  Json j;
  j["n"] = psi.n();
  j["d"] = psi.d();
  Json amps = Json::array();
  for (const std::complex<double>& a : psi.amplitudes())
    amps.push_back(Json::array({a.real(), a.imag()}));
  j["amplitudes"] = std::move(amps);
  return j;
}

StateVector state_from_json(const Json& j) {
  const std::string where = "state";
  int n = int_field(j, where, "n");
  int d = int_field(j, where, "d");
  if (n < 1 || d < 2) fail(where, "requires n >= 1 and d >= 2");
  const Json& amps = array_field(j, where, "amplitudes");
  uint64_t dim = 1;
  for (int i = 0; i < n; ++i) {
    if (dim > (uint64_t(1) << 40) / uint64_t(d))
      fail(where, "dimension d^n is out of range");
    dim *= uint64_t(d);
  }
  if (amps.size() != dim)
    fail(where + ".amplitudes", "expected d^n = " + std::to_string(dim) +
                                    " entries, got " +
                                    std::to_string(amps.size()));
  std::vector<std::complex<double>> values;
  values.reserve(amps.size());
  for (size_t i = 0; i < amps.size(); ++i) {
    const Json& pair = amps[i];
    const std::string at = where + ".amplitudes[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number())
      fail(at, "expected a [re, im] pair");
    values.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return StateVector(n, d, std::move(values));
}

Json setting_vector_to_json(const SettingVector& r) {
  Json j = Json::array();
  for (const Rational& entry : r) j.push_back(entry.str());
  return j;
}

SettingVector setting_vector_from_json(const Json& j) {
  const std::string where = "vector";
  const Json* entries = &j;
  if (j.is_object()) {
    auto it = j.find("vector");
    if (it == j.end()) fail(where, "missing field \"vector\"");
    entries = &*it;
  }
  if (!entries->is_array()) fail(where, "expected an array of rationals");
  SettingVector r;
  for (size_t i = 0; i < entries->size(); ++i)
    r.push_back(rational_from((*entries)[i],
                              where + "[" + std::to_string(i) + "]"));
  return r;
}

Json instance_to_json(const ParadoxInstance& inst) {
  Json j;
  j["n"] = inst.n;
  j["d"] = inst.d;
  j["sigma"] = inst.sigma;
  Json vectors = Json::array();
  bool any_global = false;
  for (const MonomialOperator& op : inst.observables) {
    Json row = Json::array();
    for (const Rational& r : op.params) row.push_back(r.str());
    vectors.push_back(std::move(row));
    any_global = any_global || op.global_phase != PhaseExponent();
  }
  j["vectors"] = std::move(vectors);
  Json targets = Json::array();
  for (const PhaseExponent& t : inst.targets) targets.push_back(t.str());
  j["targets"] = std::move(targets);
  j["certified"] = inst.certified;
  if (any_global) {
    Json phases = Json::array();
    for (const MonomialOperator& op : inst.observables)
      phases.push_back(op.global_phase.str());
    j["global_phases"] = std::move(phases);
  }
  bool any_state = false;
  for (const PhaseExponent& p : inst.state_phases)
    any_state = any_state || p != PhaseExponent();
  if (any_state) {
    Json phases = Json::array();
    for (const PhaseExponent& p : inst.state_phases)
      phases.push_back(p.str());
    j["state_phases"] = std::move(phases);
  }
  return j;
}

ParadoxInstance instance_from_json(const Json& j) {
  const std::string where = "instance";
  ParadoxInstance inst;
  inst.n = int_field(j, where, "n");
  inst.d = int_field(j, where, "d");
  inst.sigma = int_field(j, where, "sigma");
  const Json& vectors = array_field(j, where, "vectors");
  const Json& targets = array_field(j, where, "targets");
  if (targets.size() != vectors.size())
    fail(where, "targets and vectors must have equal length");
  for (size_t i = 0; i < vectors.size(); ++i) {
    const Json& row = vectors[i];
    const std::string at = where + ".vectors[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(at, "expected an array of rationals");
    MonomialOperator op;
    op.n = inst.n;
    op.d = inst.d;
    for (size_t k = 0; k < row.size(); ++k)
      op.params.push_back(
          rational_from(row[k], at + "[" + std::to_string(k) + "]"));
    inst.observables.push_back(std::move(op));
    inst.targets.push_back(phase_from(
        targets[i], where + ".targets[" + std::to_string(i) + "]"));
  }
  inst.certified = bool_field(j, where, "certified");
  if (j.contains("global_phases")) {
    const Json& phases = array_field(j, where, "global_phases");
    if (phases.size() != inst.observables.size())
      fail(where + ".global_phases", "must match the observable count");
    for (size_t i = 0; i < phases.size(); ++i)
      inst.observables[i].global_phase = phase_from(
          phases[i], where + ".global_phases[" + std::to_string(i) + "]");
  }
  if (j.contains("state_phases")) {
    const Json& phases = array_field(j, where, "state_phases");
    for (size_t i = 0; i < phases.size(); ++i)
      inst.state_phases.push_back(phase_from(
          phases[i], where + ".state_phases[" + std::to_string(i) + "]"));
  } else {
    inst.state_phases.assign(size_t(inst.d > 0 ? inst.d : 0), PhaseExponent());
  }
  try {
    inst.validate();
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  return inst;
}

Json assignment_to_json(const LhvAssignment& assignment) {
  Json j = Json::array();
  for (const auto& party : assignment) j.push_back(settings_map_to_json(party));
  return j;
}

LhvAssignment assignment_from_json(const Json& j) {
  const std::string where = "assignment";
  if (!j.is_array()) fail(where, "expected an array over parties");
  LhvAssignment assignment;
  for (size_t i = 0; i < j.size(); ++i)
    assignment.push_back(settings_map_from_json(
        j[i], where + "[" + std::to_string(i) + "]"));
  return assignment;
}

Json parity_to_json(const ParityCertificate& cert) {
  Json j;
  Json counts = Json::array();
  for (const auto& party : cert.counts)
    counts.push_back(settings_map_to_json(party));
  j["counts"] = std::move(counts);
  j["rhs_exponent"] = cert.rhs_exponent;
  j["verdict"] = to_string(cert.verdict);
  return j;
}

Json lhv_report(const std::optional<LhvSearchResult>& search,
                const ParityCertificate& parity) {
  const bool contradiction = parity.verdict == ParityVerdict::kContradiction;
  if (contradiction && search && search->satisfying_count > 0)
    throw InternalError(
        "parity contradiction alongside a satisfying assignment");
  std::string verdict = "inconclusive";
  if (contradiction || (search && search->satisfying_count == 0))
    verdict = "paradox";
  else if (search)
    verdict = "no-paradox";
  Json j;
  j["verdict"] = verdict;
  if (search)
    j["satisfying_count"] = search->satisfying_count;
  else
    j["satisfying_count"] = nullptr;
  if (search && search->witness)
    j["witness"] = assignment_to_json(*search->witness);
  else
    j["witness"] = nullptr;
  j["parity"] = parity_to_json(parity);
  j["enumerated"] = search ? search->enumerated : uint64_t(0);
  return j;
}

Json genuineness_to_json(const GenuinenessVerdict& verdict) {
  Json j;
  j["genuine"] = verdict.genuine;
  if (verdict.witness) {
    Json w;
    w["beta"] = verdict.witness->candidate.beta;
    w["alpha"] = verdict.witness->candidate.alpha;
    Json eigenvalues = Json::array();
    for (const PhaseExponent& t : verdict.witness->targets)
      eigenvalues.push_back(t.str());
    w["eigenvalues"] = std::move(eigenvalues);
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["candidates_checked"] = verdict.candidates_checked;
  j["oracle_calls"] = verdict.oracle_calls;
  return j;
}

Json sample_to_json(const SampleReport& report) {
  Json j;
  j["shots"] = report.shots;
  j["seed"] = report.seed;
  j["workers"] = report.workers;
  j["generator"] = report.generator;
  Json terms = Json::array();
  for (const TermSample& t : report.terms)
    terms.push_back(term_sample_to_json(t));
  j["terms"] = std::move(terms);
  j["estimate"] = report.estimate;
  j["estimate_std_error"] = report.estimate_std_error;
  j["marginal_counts"] = report.marginal_counts;
  Json partition = Json::array();
  for (const auto& [first, count] : report.partition)
    partition.push_back(Json::array({first, count}));
  j["partition"] = std::move(partition);
  return j;
}

std::string sample_csv(const SampleReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "term,batch,mean,stderr\n";
  for (size_t t = 0; t < report.batches.size(); ++t)
    for (size_t b = 0; b < report.batches[t].size(); ++b)
      out << t << ',' << b << ',' << report.batches[t][b].mean << ','
          << report.batches[t][b].std_error << '\n';
  return out.str();
}

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write " + path);
  out << text;
  if (!out) throw ContractError("write failed for " + path);
}

std::string config_hash(const Json& config) {
  const std::string dump = config.dump();
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(h));
  return buffer;
}

Json wrap_report(const Json& config, const Json& payload, double wall_ms) {
  Json j;
  j["version"] = kVersion;
  j["config"] = config;
  j["config_hash"] = config_hash(config);
  j["wall_ms"] = wall_ms;
  for (const auto& [key, value] : payload.items()) j[key] = value;
  return j;
}

}  // namespace ghzforge
