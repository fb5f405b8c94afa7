#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "plapcert/certificates.hpp"
#include "plapcert/problem.hpp"
#include "plapcert/solver.hpp"

namespace plapcert {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "1.0.0";

Json json_of(const ProblemSpec& spec);
Json json_of(const NumericsSettings& numerics);
Json json_of(const ValidationReport& report);
Json json_of(const ConeConstants& constants);
Json json_of(const GrowthEstimate& estimate);
Json json_of(const Comparison& comparison);
Json json_of(const ConditionResult& result);
Json json_of(const IndexConditions& conditions);
Json json_of(const Certificate& certificate);
Json json_of(const NonexistenceVerdict& verdict);
Json json_of(const ConeReport& report);
Json json_of(const SolutionRecord& record, const std::optional<std::string>& interval = std::nullopt);

/// "one solution", "two solutions", ...
std::string solutions_phrase(int count);

/// Rounds every number to 9 significant digits; non-finite numbers become null.
Json rounded(const Json& value);

/// %.9g formatting used by every textual number.
std::string format_number(double x);

/// t,u,v rows for one solution (header row included).
std::string solution_csv(const SolutionRecord& record);
/// One row per record: solution,norm,residual,sigma,norm_u,norm_v,iterations,alpha1,alpha2.
std::string summary_csv(const std::vector<SolutionRecord>& records);

}  // namespace plapcert
