/* JSON serialization for instances, operators, states and analysis reports.
 *
 * Exact quantities (settings, phase exponents, targets) serialize as rational
 * strings "p/q" so downstream tooling never re-parses floats as exact values;
 * statistical quantities stay IEEE doubles. Parse failures raise ParseError
 * with the offending location.
 */
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ghzforge/bell.hpp"
#include "ghzforge/genuineness.hpp"
#include "ghzforge/lhv.hpp"
#include "ghzforge/paradox.hpp"

namespace ghzforge {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// {"n", "d", "params": ["p/q", ...], "global_phase": "p/q"}
Json operator_to_json(const MonomialOperator& op);
MonomialOperator operator_from_json(const Json& j);

// {"n", "d", "amplitudes": [[re, im], ...]}
Json state_to_json(const StateVector& psi);
StateVector state_from_json(const Json& j);

// A bare array of rationals, or an object holding it under "vector".
Json setting_vector_to_json(const SettingVector& r);
SettingVector setting_vector_from_json(const Json& j);

// {"n", "d", "sigma", "vectors": [["p/q", ...], ...], "targets": ["p/q", ...],
//  "certified": bool}; "state_phases" and "global_phases" appear only when
// some entry is nonzero.
Json instance_to_json(const ParadoxInstance& inst);
ParadoxInstance instance_from_json(const Json& j);

// Array over parties of {"setting": exponent, ...} objects.
Json assignment_to_json(const LhvAssignment& assignment);
LhvAssignment assignment_from_json(const Json& j);

// {"counts": [{"setting": N, ...}, ...], "rhs_exponent", "verdict"}
Json parity_to_json(const ParityCertificate& cert);

// {"verdict": "paradox|no-paradox|inconclusive", "satisfying_count",
//  "witness": {...}|null, "parity": {...}, "enumerated"}; search is absent
// when only the parity certificate ran (enumeration over budget).
Json lhv_report(const std::optional<LhvSearchResult>& search,
                const ParityCertificate& parity);

// {"genuine", "witness": {"beta", "alpha", "eigenvalues"}|null,
//  "candidates_checked", "oracle_calls"}
Json genuineness_to_json(const GenuinenessVerdict& verdict);

Json sample_to_json(const SampleReport& report);
// Flat export, one row per (term, batch): term,batch,mean,stderr.
std::string sample_csv(const SampleReport& report);

// Parses text as JSON; origin names the source (file path, "stdin") in the
// ParseError location.
Json parse_json_text(const std::string& text, const std::string& origin);
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Report envelope: version, effective config, config hash and wall time,
// followed by the payload fields.
Json wrap_report(const Json& config, const Json& payload, double wall_ms);
std::string config_hash(const Json& config);

}  // namespace ghzforge
