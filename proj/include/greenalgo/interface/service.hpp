#pragma once

// Stateless JSON service over immutable reference data. Transport-agnostic:
// `handle` maps (method, path, body) to (status, body); http.hpp binds it to
// an HTTP server.
//
//   POST /v1/estimate               EstimateRequest            -> ReportPayload
//   POST /v1/compare                {"a": req, "b": req}        -> ComparisonPayload
//   POST /v1/sweep                  {"base": req, "curve": [{"cores", "runtime_hours"}]}
//   GET  /v1/data/processors
//   GET  /v1/data/carbon-intensity
//   GET  /v1/data/constants
//   GET  /v1/presets
//   GET  /v1/health
//
// Errors: {"error": {"code", "field", "message"}}; 400 for validation, 404
// for unknown catalog names and routes, 405 for a wrong method.

#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "greenalgo/interface/presets.hpp"
#include "greenalgo/interface/report.hpp"
#include "greenalgo/interface/request.hpp"
#include "greenalgo/reference_data.hpp"

namespace greenalgo::interface {

struct Response {
  int status = 200;
  std::string body;
};

inline Response error_response(int status, const std::string& code, const std::string& field, const std::string& message,
                               json extra = json::object()) {
  json err = {{"code", code}, {"field", field}, {"message", message}};
  for (auto& [k, v] : extra.items()) err[k] = v;
  return {status, dump(json{{"error", err}})};
}

class Service {
 public:
  explicit Service(ReferenceData data) : data_(std::move(data)) {}

  const ReferenceData& data() const noexcept { return data_; }

  Response handle(std::string_view method, std::string_view path, std::string_view body) const {
    try {
      return route(method, path, body);
    } catch (const ValidationError& e) {
      return error_response(400, e.code(), e.field(), e.what());
    } catch (const NotFound& e) {
      return error_response(404, e.code(), e.field(), e.what(), {{"name", e.name()}, {"suggestions", e.suggestions()}});
    } catch (const DataError& e) {
      return error_response(400, e.code(), e.subject(), e.what());
    } catch (const Error& e) {
      return error_response(500, e.code(), "", e.what());
    }
  }

 private:
  static json parse_body(std::string_view body) {
    json j = json::parse(body.begin(), body.end(), nullptr, false);
    if (j.is_discarded()) throw ValidationError("invalid_json", "body", "body: not valid JSON");
    if (!j.is_object()) throw ValidationError("invalid_type", "body", "body: must be a JSON object");
    return j;
  }

  static void only_keys(const json& j, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == key;
      if (!ok) throw ValidationError("unknown_field", key, key + ": unknown field");
    }
  }

  static const json& member(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ValidationError("missing_field", key, std::string(key) + ": required");
    return *it;
  }

  // Re-labels a nested validation error as "<prefix>.<field>".
  template <typename F>
  static auto nested(const std::string& prefix, F&& f) {
    try {
      return f();
    } catch (const ValidationError& e) {
      const std::string field = e.field().empty() ? prefix : prefix + "." + e.field();
      throw ValidationError(e.code(), field, prefix + "." + e.what());
    }
  }

  Response route(std::string_view method, std::string_view path, std::string_view body) const {
    const bool get = method == "GET";
    const bool post = method == "POST";
    auto expect = [&](bool ok) {
      if (!ok) throw MethodNotAllowed{};
    };
    try {
      if (path == "/v1/health") {
        expect(get);
        return {200, dump({{"status", "ok"}, {"data_version", data_.data_version}})};
      }
      if (path == "/v1/data/processors") {
        expect(get);
        return {200, dump(processors_json())};
      }
      if (path == "/v1/data/carbon-intensity") {
        expect(get);
        json out = json::array();
        for (const auto& ci : data_.carbon_intensity.entries()) out.push_back(to_json(ci));
        return {200, dump(out)};
      }
      if (path == "/v1/data/constants") {
        expect(get);
        return {200, dump(constants_json())};
      }
      if (path == "/v1/presets") {
        expect(get);
        json out = json::array();
        for (const auto& p : presets()) out.push_back({{"name", p.name}, {"description", p.description}, {"request", p.request}});
        return {200, dump(out)};
      }
      if (path == "/v1/estimate") {
        expect(post);
        const auto request = parse_request(parse_body(body));
        return {200, render(make_payload(request, data_), Format::json)};
      }
      if (path == "/v1/compare") {
        expect(post);
        const json j = parse_body(body);
        only_keys(j, {"a", "b"});
        const auto& ja = member(j, "a");
        const auto& jb = member(j, "b");
        const auto a = nested("a", [&] { return parse_request(ja); });
        const auto b = nested("b", [&] { return parse_request(jb); });
        return {200, render(make_comparison(a, b, data_), Format::json)};
      }
      if (path == "/v1/sweep") {
        expect(post);
        const json j = parse_body(body);
        only_keys(j, {"base", "curve"});
        const auto& jbase = member(j, "base");
        const auto& jcurve = member(j, "curve");
        const auto base = nested("base", [&] { return parse_request(jbase, RequestKind::sweep_base); });
        const auto curve = nested("curve", [&] { return parse_curve(jcurve); });
        return {200, render(make_sweep(base, curve, data_), Format::json)};
      }
    } catch (const MethodNotAllowed&) {
      return error_response(405, "method_not_allowed", "", std::string(method) + " not allowed on " + std::string(path));
    }
    return error_response(404, "unknown_route", "", "no such endpoint: " + std::string(path));
  }

  struct MethodNotAllowed {};

  static ScalingCurve parse_curve(const json& j) {
    if (!j.is_array()) throw ValidationError("invalid_type", "", "must be an array of {cores, runtime_hours}");
    std::vector<ScalingPoint> points;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& p = j[i];
      const std::string at = std::to_string(i);
      if (!p.is_object()) throw ValidationError("invalid_type", at, at + ": must be an object");
      for (const auto& [key, value] : p.items()) {
        if (key != "cores" && key != "runtime_hours") throw ValidationError("unknown_field", at + "." + key, key + ": unknown field");
      }
      const auto cores = detail::integer(p, "cores");
      const auto runtime = detail::number(p, "runtime_hours");
      if (!cores) throw ValidationError("missing_field", at + ".cores", "cores: required");
      if (!runtime) throw ValidationError("missing_field", at + ".runtime_hours", "runtime_hours: required");
      points.push_back({*cores, *runtime});
    }
    try {
      return ScalingCurve(std::move(points));
    } catch (const ValidationError& e) {
      // Ordering and emptiness are properties of the whole curve.
      throw ValidationError(e.code(), "", e.what());
    }
  }

  json processors_json() const {
    json out = json::array();
    for (const auto& e : data_.processors.entries()) {
      out.push_back({{"name", e.profile.name},
                     {"kind", to_string(e.profile.kind)},
                     {"tdp_watts", e.profile.tdp_watts},
                     {"unit_count", e.profile.unit_count},
                     {"per_unit_power_w", per_unit_power(e.profile)},
                     {"source", e.source}});
    }
    return out;
  }

  json constants_json() const {
    json out = json::object();
    for (const auto& f : greenalgo::detail::kConstantFields) out[std::string(f.key)] = data_.constants.*(f.member);
    out["data_version"] = data_.data_version;
    return out;
  }

  ReferenceData data_;
};

}  // namespace greenalgo::interface
