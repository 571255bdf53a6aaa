#include "twomat/io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "twomat/errors.hpp"

namespace twomat {

namespace {

std::string line_column(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::vector<double> coeffs_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError("expected an array of coefficients", where);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

}  // namespace

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON: " + std::string(e.what()), line_column(text, e.byte));
  }
}

void require_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ParseError("expected an object", where.empty() ? "/" : where);
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError("unknown key '" + key + "'", where + "/" + key);
    }
  }
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

double number_from_json(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError("expected a number", where);
  return j.get<double>();
}

std::size_t count_from_json(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError("expected a non-negative integer", where);
  return j.get<std::size_t>();
}

cplx cplx_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [re, im]", where);
  return {number_from_json(j[0], where + "/0"), number_from_json(j[1], where + "/1")};
}

std::vector<cplx> cplx_list_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError("expected a list of [re, im] pairs", where);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(cplx_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

ModelSpec model_from_json(const json& j, const std::string& where) {
  require_keys(j, {"V", "W", "tau"}, where);
  for (const char* k : {"V", "W", "tau"}) {
    if (!j.contains(k)) throw ParseError(std::string("missing key '") + k + "'", where);
  }
  ModelSpec m;
  m.v_coeffs = coeffs_from_json(j["V"], where + "/V");
  m.w_coeffs = coeffs_from_json(j["W"], where + "/W");
  m.tau = number_from_json(j["tau"], where + "/tau");
  m.validate();
  return m;
}

json to_json(const ModelSpec& model) { return {{"V", model.v_coeffs}, {"W", model.w_coeffs}, {"tau", model.tau}}; }

json to_json(const BiorthogonalSystem& sys) {
  return {{"N", sys.order}, {"p", sys.p_coeffs}, {"q", sys.q_coeffs}, {"h_sq", sys.h_sq}};
}

void write_h_sq_csv(std::ostream& os, const BiorthogonalSystem& sys) {
  os << "n,h_sq\n";
  os.precision(17);
  for (std::size_t n = 0; n < sys.h_sq.size(); ++n) os << n << ',' << sys.h_sq[n] << '\n';
}

SourceConfig sources_from_json(const json& job) {
  SourceConfig c;
  auto read = [&](const char* key, std::vector<cplx>& out) {
    if (job.contains(key)) out = cplx_list_from_json(job[key], std::string("/") + key);
  };
  read("xs", c.xs);
  read("ys", c.ys);
  read("vs", c.vs);
  read("ws", c.ws);
  return c;
}

json to_json(const AverageResult& r, std::optional<cplx> oracle) {
  json j = {{"value", to_json(r.value)},
            {"formula_used", formula_name(r.formula_used)},
            {"p_index_used", r.p_index_used},
            {"condition_estimate", r.condition_estimate}};
  if (oracle) {
    j["oracle_value"] = to_json(*oracle);
    j["rel_err"] = std::abs(r.value - *oracle) / std::abs(*oracle);
  }
  return j;
}

json to_json(const CheckResult& r) {
  json j = {{"name", r.name}, {"passed", r.passed}, {"tolerance", r.tolerance}, {"detail", r.detail}};
  // Infinite residuals mark failures that raised; JSON has no infinity.
  if (std::isfinite(r.residual)) {
    j["residual"] = r.residual;
  } else {
    j["residual"] = nullptr;
  }
  return j;
}

json report_to_json(const std::vector<CheckResult>& checks) {
  json list = json::array();
  bool all = true;
  for (const auto& c : checks) {
    list.push_back(to_json(c));
    all = all && c.passed;
  }
  return {{"passed", all}, {"checks", list}};
}

json error_json(const std::string& kind, const std::string& message, const std::string& location) {
  return {{"error", {{"kind", kind}, {"message", message}, {"location", location}}}};
}

std::vector<cplx> grid_from_json(const json& j, const std::string& where) {
  if (j.is_array()) return cplx_list_from_json(j, where);
  require_keys(j, {"min", "max", "count"}, where);
  for (const char* k : {"min", "max", "count"}) {
    if (!j.contains(k)) throw ParseError(std::string("missing key '") + k + "'", where);
  }
  const double lo = number_from_json(j["min"], where + "/min");
  const double hi = number_from_json(j["max"], where + "/max");
  const std::size_t count = count_from_json(j["count"], where + "/count");
  if (count == 0) throw ParseError("count must be positive", where + "/count");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < count; ++k) {
    out.emplace_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1), 0.0);
  }
  return out;
}

}  // namespace twomat
