#pragma once

// JSON and CSV forms of models, systems, sources and results. Complex
// numbers are [re, im] pairs throughout.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twomat/averages.hpp"
#include "twomat/verify.hpp"

namespace twomat {

using json = nlohmann::json;

/// Parses text into a document; ParseError carries "line L, column C".
json parse_document(const std::string& text);

/// Throws ParseError (location = JSON pointer `where`) when `obj` is not an
/// object or has keys outside `allowed`.
void require_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where);

json to_json(cplx z);
cplx cplx_from_json(const json& j, const std::string& where);
std::vector<cplx> cplx_list_from_json(const json& j, const std::string& where);
double number_from_json(const json& j, const std::string& where);
std::size_t count_from_json(const json& j, const std::string& where);

/// {"V": [...], "W": [...], "tau": t}; unknown keys rejected, then validated.
ModelSpec model_from_json(const json& j, const std::string& where = "/model");
json to_json(const ModelSpec& model);

/// {"N": n, "p": [[...]], "q": [[...]], "h_sq": [...]}.
json to_json(const BiorthogonalSystem& sys);
/// Columns: n,h_sq.
void write_h_sq_csv(std::ostream& os, const BiorthogonalSystem& sys);

/// Reads "xs", "ys", "vs", "ws" (each optional) from a job object.
SourceConfig sources_from_json(const json& job);

json to_json(const AverageResult& r, std::optional<cplx> oracle = std::nullopt);

json to_json(const CheckResult& r);
/// {"passed": all, "checks": [...]}.
json report_to_json(const std::vector<CheckResult>& checks);

/// {"error": {"kind", "message", "location"}}.
json error_json(const std::string& kind, const std::string& message, const std::string& location = "");

/// A list of points: either [[re, im], ...] or {"min", "max", "count"} for
/// an evenly spaced real grid (endpoints included).
std::vector<cplx> grid_from_json(const json& j, const std::string& where);

}  // namespace twomat
