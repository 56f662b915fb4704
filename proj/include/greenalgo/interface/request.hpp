#pragma once

// Calculator requests. A request is parsed from JSON (service API) or from a
// key-value text file (CLI scenario/base files); both go through the same
// strict JSON validation so every entry point accepts exactly the same input.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "greenalgo/csv.hpp"
#include "greenalgo/errors.hpp"
#include "greenalgo/model.hpp"
#include "greenalgo/reference_data.hpp"
#include "greenalgo/scenario.hpp"

namespace greenalgo::interface {

using json = nlohmann::ordered_json;

struct EstimateRequest {
  std::optional<std::string> label;
  std::optional<double> runtime_hours;
  std::optional<int> cores;
  // Power: exactly one of processor, (tdp_watts + unit_count), explicit_power_kw.
  std::optional<std::string> processor;
  std::optional<double> tdp_watts;
  std::optional<int> unit_count;
  std::optional<double> explicit_power_kw;
  std::optional<double> usage_factor;
  std::optional<double> mem_gb;
  std::optional<std::string> region_code;
  std::optional<double> pue;
  std::optional<double> psf;
  /// Sweep bases only: mem_gb is per core.
  std::optional<bool> memory_per_core;

  friend bool operator==(const EstimateRequest&, const EstimateRequest&) = default;
};

/// `full` requests describe one run; `sweep_base` requests leave runtime and
/// cores to the scaling curve.
enum class RequestKind { full, sweep_base };

namespace detail {

enum class FieldType { number, integer, string, boolean };

struct FieldSpec {
  std::string_view name;
  FieldType type;
};

inline constexpr FieldSpec kRequestFields[] = {
    {"label", FieldType::string},          {"runtime_hours", FieldType::number},
    {"cores", FieldType::integer},         {"processor", FieldType::string},
    {"tdp_watts", FieldType::number},      {"unit_count", FieldType::integer},
    {"explicit_power_kw", FieldType::number}, {"usage_factor", FieldType::number},
    {"mem_gb", FieldType::number},         {"region_code", FieldType::string},
    {"pue", FieldType::number},            {"psf", FieldType::number},
    {"memory_per_core", FieldType::boolean},
};

inline const FieldSpec* find_field(std::string_view name) {
  for (const auto& f : kRequestFields)
    if (f.name == name) return &f;
  return nullptr;
}

[[noreturn]] inline void fail(const char* code, std::string field, const std::string& message) {
  throw ValidationError(code, field, field + ": " + message);
}

inline std::optional<double> number(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) fail("invalid_type", field, "must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) fail("not_finite", field, "must be finite");
  return v;
}

inline std::optional<int> integer(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (it->is_number_integer()) {
    const auto v = it->get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail("out_of_range", field, "is too large");
    return static_cast<int>(v);
  }
  if (it->is_number_float()) {
    const double v = it->get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 2e9) return static_cast<int>(v);
  }
  fail("invalid_type", field, "must be an integer");
}

inline std::optional<std::string> string(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail("invalid_type", field, "must be a string");
  return it->get<std::string>();
}

inline std::optional<bool> boolean(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_boolean()) fail("invalid_type", field, "must be true or false");
  return it->get<bool>();
}

template <typename T>
void check(const std::optional<T>& value, const char* field, bool ok, const char* what) {
  if (value && !ok) fail("out_of_range", field, what);
}

}  // namespace detail

/// Strict parse: unknown fields, wrong types, out-of-range values and
/// inconsistent power specifications are rejected with the field name.
inline EstimateRequest parse_request(const json& body, RequestKind kind = RequestKind::full) {
  if (!body.is_object()) detail::fail("invalid_type", "body", "request must be a JSON object");
  for (const auto& [key, value] : body.items()) {
    if (!detail::find_field(key)) detail::fail("unknown_field", key, "unknown field");
  }

  EstimateRequest r;
  r.label = detail::string(body, "label");
  r.runtime_hours = detail::number(body, "runtime_hours");
  r.cores = detail::integer(body, "cores");
  r.processor = detail::string(body, "processor");
  r.tdp_watts = detail::number(body, "tdp_watts");
  r.unit_count = detail::integer(body, "unit_count");
  r.explicit_power_kw = detail::number(body, "explicit_power_kw");
  r.usage_factor = detail::number(body, "usage_factor");
  r.mem_gb = detail::number(body, "mem_gb");
  r.region_code = detail::string(body, "region_code");
  r.pue = detail::number(body, "pue");
  r.psf = detail::number(body, "psf");
  r.memory_per_core = detail::boolean(body, "memory_per_core");

  detail::check(r.runtime_hours, "runtime_hours", r.runtime_hours.value_or(0) >= 0, "must be >= 0");
  detail::check(r.cores, "cores", r.cores.value_or(0) >= 0, "must be >= 0");
  detail::check(r.processor, "processor", !csv::trim(r.processor.value_or("")).empty(), "must not be empty");
  detail::check(r.tdp_watts, "tdp_watts", r.tdp_watts.value_or(0) > 0, "must be > 0");
  detail::check(r.unit_count, "unit_count", r.unit_count.value_or(0) >= 1, "must be >= 1");
  detail::check(r.explicit_power_kw, "explicit_power_kw", r.explicit_power_kw.value_or(0) > 0, "must be > 0");
  detail::check(r.usage_factor, "usage_factor", r.usage_factor.value_or(0) >= 0 && r.usage_factor.value_or(0) <= 1,
                "must be within [0, 1]");
  detail::check(r.mem_gb, "mem_gb", r.mem_gb.value_or(0) >= 0, "must be >= 0");
  detail::check(r.region_code, "region_code", !csv::trim(r.region_code.value_or("")).empty(), "must not be empty");
  detail::check(r.pue, "pue", r.pue.value_or(1) >= 1, "must be >= 1");
  detail::check(r.psf, "psf", r.psf.value_or(1) >= 1, "must be >= 1");

  const bool by_name = r.processor.has_value();
  const bool by_tdp = r.tdp_watts.has_value() || r.unit_count.has_value();
  const bool by_power = r.explicit_power_kw.has_value();
  const int specs = int{by_name} + int{by_tdp} + int{by_power};
  if (specs == 0) {
    detail::fail("missing_power", "processor", "one of processor, tdp_watts+unit_count or explicit_power_kw is required");
  }
  if (specs > 1) {
    const char* field = by_power ? "explicit_power_kw" : "tdp_watts";
    detail::fail("conflicting_power", field, "exactly one power specification is allowed");
  }
  if (by_tdp && !r.tdp_watts) detail::fail("missing_field", "tdp_watts", "required with unit_count");
  if (by_tdp && !r.unit_count) detail::fail("missing_field", "unit_count", "required with tdp_watts");

  if (kind == RequestKind::full) {
    if (!r.runtime_hours) detail::fail("missing_field", "runtime_hours", "required");
    if (r.memory_per_core) detail::fail("unknown_field", "memory_per_core", "only valid in sweep bases");
    if (!by_power) {
      if (!r.cores) detail::fail("missing_field", "cores", "required");
      if (!r.mem_gb) detail::fail("missing_field", "mem_gb", "required");
    }
  } else {
    if (by_power) detail::fail("explicit_power", "explicit_power_kw", "sweeps need a per-core power model");
    if (!r.mem_gb) detail::fail("missing_field", "mem_gb", "required");
  }
  return r;
}

inline json to_json(const EstimateRequest& r) {
  json j = json::object();
  auto put = [&](const char* key, const auto& value) {
    if (value) j[key] = *value;
  };
  put("label", r.label);
  put("runtime_hours", r.runtime_hours);
  put("cores", r.cores);
  put("processor", r.processor);
  put("tdp_watts", r.tdp_watts);
  put("unit_count", r.unit_count);
  put("explicit_power_kw", r.explicit_power_kw);
  put("usage_factor", r.usage_factor);
  put("mem_gb", r.mem_gb);
  put("region_code", r.region_code);
  put("pue", r.pue);
  put("psf", r.psf);
  put("memory_per_core", r.memory_per_core);
  return j;
}

/// Key-value text document: one `key = value` per line, `#` starts a
/// comment. Keys are the JSON request field names.
inline json parse_key_values(std::string_view text) {
  json j = json::object();
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = csv::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      detail::fail("malformed_line", "line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key(csv::trim(body.substr(0, eq)));
    const std::string value(csv::trim(body.substr(eq + 1)));
    const auto* spec = detail::find_field(key);
    if (!spec) detail::fail("unknown_field", key, "unknown field");
    if (j.contains(key)) detail::fail("duplicate_field", key, "given more than once");
    switch (spec->type) {
      case detail::FieldType::string:
        j[key] = value;
        break;
      case detail::FieldType::boolean:
        if (value == "true") j[key] = true;
        else if (value == "false") j[key] = false;
        else detail::fail("invalid_type", key, "must be true or false");
        break;
      case detail::FieldType::integer:
        if (const auto v = csv::parse_integer(value)) j[key] = *v;
        else detail::fail("invalid_type", key, "must be an integer");
        break;
      case detail::FieldType::number:
        if (const auto v = csv::parse_double(value)) j[key] = *v;
        else detail::fail("invalid_type", key, "must be a number");
        break;
    }
  }
  return j;
}

/// Applies defaults (usage 1, WORLD region, world-average PUE, PSF 1) and
/// resolves catalog names into a model setting.
inline ScenarioSetting resolve_request(const EstimateRequest& r, const ReferenceData& data) {
  ScenarioSetting s;
  s.label = r.label.value_or("");
  auto& w = s.workload;
  w.runtime_hours = r.runtime_hours.value_or(0.0);
  w.core_count = r.cores.value_or(0);
  w.usage_factor = r.usage_factor.value_or(1.0);
  w.memory = {r.mem_gb.value_or(0.0), data.constants.memory_w_per_gb};
  w.psf = r.psf.value_or(1.0);
  if (r.processor) {
    w.per_core_power_w = per_unit_power(lookup_processor(data.processors, *r.processor));
  } else if (r.tdp_watts && r.unit_count) {
    w.per_core_power_w = *r.tdp_watts / *r.unit_count;
  }
  w.explicit_power_kw = r.explicit_power_kw;
  s.facility = {s.label, r.pue.value_or(data.constants.world_avg_pue)};
  s.ci = lookup_ci(data.carbon_intensity, r.region_code.value_or(std::string(kWorldRegion)));
  validate(w);
  validate(s.facility);
  return s;
}

}  // namespace greenalgo::interface
