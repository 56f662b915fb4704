#pragma once

// Report payloads and their rendering. Payloads carry unrounded values; only
// the text and markdown renderers round, using these rules:
//   gCO2e, km, tree-months/years  nearest integer, thousands separators
//   flights                       one decimal
//   kWh                           two decimals
// Rounding is half away from zero.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "greenalgo/ingest.hpp"
#include "greenalgo/interface/request.hpp"
#include "greenalgo/model.hpp"
#include "greenalgo/scenario.hpp"

namespace greenalgo::interface {

enum class Format { text, markdown, json };

inline Format parse_format(std::string_view name) {
  if (name == "text") return Format::text;
  if (name == "markdown") return Format::markdown;
  if (name == "json") return Format::json;
  throw ValidationError("unknown_format", "format", "format: unknown format '" + std::string(name) + "'");
}

/// Rounds half away from zero to `decimals` places and groups thousands.
inline std::string format_grouped(double value, int decimals = 0) {
  if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const auto scaled = static_cast<std::int64_t>(std::round(std::abs(value) * static_cast<double>(scale)));
  const bool negative = value < 0 && scaled != 0;
  std::string whole = std::to_string(scaled / scale);
  std::string grouped;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (i > 0 && (whole.size() - i) % 3 == 0) grouped += ',';
    grouped += whole[i];
  }
  if (decimals > 0) {
    std::string frac = std::to_string(scaled % scale);
    grouped += '.' + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
  }
  return negative ? "-" + grouped : grouped;
}

inline std::string format_kwh(double kwh) { return format_grouped(kwh, 2) + " kWh"; }
inline std::string format_g(double g) { return format_grouped(g) + " gCO2e"; }

struct ReportPayload {
  EstimateRequest request;
  ScenarioSetting setting;
  FootprintEstimate estimate;
  std::string data_version;
};

inline ReportPayload make_payload(const EstimateRequest& request, const ReferenceData& data) {
  ReportPayload p;
  p.request = request;
  p.setting = resolve_request(request, data);
  p.estimate = estimate(p.setting.workload, p.setting.facility, p.setting.ci, data.constants);
  p.data_version = data.data_version;
  return p;
}

inline json to_json(const EnergyEstimate& e) {
  return {{"core_kwh", e.core_kwh}, {"memory_kwh", e.memory_kwh}, {"it_kwh", e.it_kwh}, {"total_kwh", e.total_kwh}};
}

inline json to_json(const EquivalenceSet& q) {
  return {{"car_km_eu", q.car_km_eu},
          {"car_km_us", q.car_km_us},
          {"flights_paris_london", q.flights_paris_london},
          {"flights_ny_sf", q.flights_ny_sf},
          {"flights_ny_melbourne", q.flights_ny_melbourne},
          {"tree_months", q.tree_months},
          {"tree_years", q.tree_years}};
}

inline json to_json(const GridCarbonIntensity& ci) {
  return {{"region_code", ci.region_code},
          {"region_name", ci.region_name},
          {"gco2e_per_kwh", ci.gco2e_per_kwh},
          {"year", ci.year},
          {"source", ci.source}};
}

inline json to_json(const ReportPayload& p) {
  const auto& w = p.setting.workload;
  json inputs = {{"runtime_hours", w.runtime_hours},
                 {"cores", w.core_count},
                 {"per_core_power_w", w.per_core_power_w},
                 {"usage_factor", w.usage_factor},
                 {"mem_gb", w.memory.size_gb},
                 {"memory_power_per_gb", w.memory.power_per_gb},
                 {"pue", p.setting.facility.pue},
                 {"psf", w.psf}};
  if (w.explicit_power_kw) inputs["explicit_power_kw"] = *w.explicit_power_kw;
  return {{"request", to_json(p.request)},
          {"inputs", inputs},
          {"energy", to_json(p.estimate.energy)},
          {"carbon_intensity", to_json(p.estimate.ci_used)},
          {"gco2e_single", p.estimate.gco2e_single},
          {"psf", p.estimate.psf},
          {"gco2e_scaled", p.estimate.gco2e_scaled},
          {"equivalences", to_json(p.estimate.equivalences)},
          {"data_version", p.data_version}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline std::string psf_text(double psf) { return csv::format_number(psf); }

inline std::string region_text(const GridCarbonIntensity& ci) {
  std::string out = csv::format_number(ci.gco2e_per_kwh) + " gCO2e/kWh (" + ci.region_code;
  if (!ci.region_name.empty()) out += ", " + ci.region_name;
  if (ci.year) out += ", " + std::to_string(ci.year);
  return out + ")";
}

}  // namespace detail

inline std::string render(const ReportPayload& p, Format format) {
  const auto& e = p.estimate;
  const auto& q = e.equivalences;
  std::ostringstream os;
  switch (format) {
    case Format::json:
      return dump(to_json(p));
    case Format::text:
      if (!p.setting.label.empty()) os << p.setting.label << "\n";
      os << "Carbon footprint: " << format_g(e.gco2e_scaled) << "\n";
      if (e.psf != 1.0) os << "  " << format_g(e.gco2e_single) << " per run x PSF " << detail::psf_text(e.psf) << "\n";
      os << "Energy: " << format_kwh(e.energy.total_kwh) << " (cores " << format_kwh(e.energy.core_kwh) << ", memory "
         << format_kwh(e.energy.memory_kwh) << ", PUE " << csv::format_number(p.setting.facility.pue) << ")\n";
      os << "Carbon intensity: " << detail::region_text(e.ci_used) << "\n";
      os << "Equivalent to:\n";
      os << "  driving " << format_grouped(q.car_km_eu) << " km in a European car (" << format_grouped(q.car_km_us)
         << " km in a US car)\n";
      os << "  " << format_grouped(q.flights_paris_london, 1) << " flights Paris-London, "
         << format_grouped(q.flights_ny_sf, 1) << " New York-San Francisco, " << format_grouped(q.flights_ny_melbourne, 1)
         << " New York-Melbourne\n";
      os << "  " << format_grouped(q.tree_months) << " tree-months (" << format_grouped(q.tree_years) << " tree-years)\n";
      os << "Data: " << p.data_version << "\n";
      return os.str();
    case Format::markdown:
      if (!p.setting.label.empty()) os << "### " << p.setting.label << "\n\n";
      os << "| Metric | Value |\n|---|---|\n";
      os << "| Carbon footprint | " << format_g(e.gco2e_scaled) << " |\n";
      os << "| Per run | " << format_g(e.gco2e_single) << " |\n";
      os << "| PSF | " << detail::psf_text(e.psf) << " |\n";
      os << "| Energy (total) | " << format_kwh(e.energy.total_kwh) << " |\n";
      os << "| Energy (cores) | " << format_kwh(e.energy.core_kwh) << " |\n";
      os << "| Energy (memory) | " << format_kwh(e.energy.memory_kwh) << " |\n";
      os << "| PUE | " << csv::format_number(p.setting.facility.pue) << " |\n";
      os << "| Carbon intensity | " << detail::region_text(e.ci_used) << " |\n";
      os << "| Car, Europe | " << format_grouped(q.car_km_eu) << " km |\n";
      os << "| Car, US | " << format_grouped(q.car_km_us) << " km |\n";
      os << "| Flights Paris-London | " << format_grouped(q.flights_paris_london, 1) << " |\n";
      os << "| Flights New York-San Francisco | " << format_grouped(q.flights_ny_sf, 1) << " |\n";
      os << "| Flights New York-Melbourne | " << format_grouped(q.flights_ny_melbourne, 1) << " |\n";
      os << "| Tree-months | " << format_grouped(q.tree_months) << " |\n";
      os << "\nData: `" << p.data_version << "`\n";
      return os.str();
  }
  throw ValidationError("unknown_format", "format", "format: unknown format");
}

// Comparison ----------------------------------------------------------------

struct ComparisonPayload {
  ReportPayload a;
  ReportPayload b;
  Comparison comparison;
};

inline ComparisonPayload make_comparison(const EstimateRequest& a, const EstimateRequest& b, const ReferenceData& data) {
  ComparisonPayload out{make_payload(a, data), make_payload(b, data), {}};
  out.comparison = compare(out.a.setting, out.b.setting, data.constants);
  return out;
}

inline json to_json(const ComparisonPayload& p) {
  return {{"a", to_json(p.a)},
          {"b", to_json(p.b)},
          {"absolute_delta_g", p.comparison.absolute_delta_g},
          {"relative_change", p.comparison.relative_change},
          {"data_version", p.a.data_version}};
}

inline std::string render(const ComparisonPayload& p, Format format) {
  if (format == Format::json) return dump(to_json(p));
  const auto name = [](const ReportPayload& r, const char* fallback) {
    return r.setting.label.empty() ? std::string(fallback) : r.setting.label;
  };
  const auto& c = p.comparison;
  std::string sign = c.absolute_delta_g > 0 ? "+" : "";
  const std::string pct = std::isfinite(c.relative_change) ? sign + format_grouped(c.relative_change * 100.0, 1) + "%" : "n/a";
  std::ostringstream os;
  if (format == Format::markdown) {
    os << "| Scenario | PUE | Carbon intensity | Footprint |\n|---|---|---|---|\n";
    for (const auto* r : {&p.a, &p.b}) {
      os << "| " << name(*r, r == &p.a ? "A" : "B") << " | " << csv::format_number(r->setting.facility.pue) << " | "
         << detail::region_text(r->estimate.ci_used) << " | " << format_g(r->estimate.gco2e_scaled) << " |\n";
    }
    os << "\nChange: " << sign << format_g(c.absolute_delta_g) << " (" << pct << ")\n";
    return os.str();
  }
  os << "A: " << name(p.a, "scenario A") << ": " << format_g(p.a.estimate.gco2e_scaled) << " (PUE "
     << csv::format_number(p.a.setting.facility.pue) << ", " << detail::region_text(p.a.estimate.ci_used) << ")\n";
  os << "B: " << name(p.b, "scenario B") << ": " << format_g(p.b.estimate.gco2e_scaled) << " (PUE "
     << csv::format_number(p.b.setting.facility.pue) << ", " << detail::region_text(p.b.estimate.ci_used) << ")\n";
  os << "Change: " << sign << format_g(c.absolute_delta_g) << " (" << pct << ")\n";
  return os.str();
}

// Sweep ---------------------------------------------------------------------

struct SweepPayload {
  EstimateRequest base;
  ScenarioSetting setting;
  SweepResult result;
  std::string data_version;
};

inline SweepPayload make_sweep(const EstimateRequest& base, const ScalingCurve& curve, const ReferenceData& data) {
  SweepPayload out;
  out.base = base;
  out.setting = resolve_request(base, data);
  SweepOptions options;
  options.memory_per_core = base.memory_per_core.value_or(false);
  out.result = sweep(out.setting.workload, curve, out.setting.facility, out.setting.ci, options, data.constants);
  out.data_version = data.data_version;
  return out;
}

inline json to_json(const SweepPayload& p) {
  json rows = json::array();
  for (const auto& r : p.result.rows) {
    rows.push_back({{"cores", r.core_count},
                    {"runtime_hours", r.runtime_hours},
                    {"energy", to_json(r.estimate.energy)},
                    {"gco2e_single", r.estimate.gco2e_single},
                    {"gco2e_scaled", r.estimate.gco2e_scaled}});
  }
  return {{"base", to_json(p.base)},
          {"carbon_intensity", to_json(p.setting.ci)},
          {"pue", p.setting.facility.pue},
          {"rows", rows},
          {"optimal_core_count", p.result.optimal_core_count},
          {"data_version", p.data_version}};
}

inline std::string render(const SweepPayload& p, Format format) {
  if (format == Format::json) return dump(to_json(p));
  std::ostringstream os;
  const bool md = format == Format::markdown;
  os << (md ? "| Cores | Runtime (h) | Energy | Footprint | |\n|---|---|---|---|---|\n"
            : "cores  runtime_h  energy  footprint\n");
  for (const auto& r : p.result.rows) {
    const bool best = r.core_count == p.result.optimal_core_count;
    if (md) {
      os << "| " << r.core_count << " | " << csv::format_number(r.runtime_hours) << " | " << format_kwh(r.estimate.energy.total_kwh)
         << " | " << format_g(r.estimate.gco2e_scaled) << " | " << (best ? "optimal" : "") << " |\n";
    } else {
      os << r.core_count << "  " << csv::format_number(r.runtime_hours) << "  " << format_kwh(r.estimate.energy.total_kwh)
         << "  " << format_g(r.estimate.gco2e_scaled) << (best ? "  *" : "") << "\n";
    }
  }
  os << (md ? "\n" : "") << "Optimal core count: " << p.result.optimal_core_count << "\n";
  return os.str();
}

// Ingest --------------------------------------------------------------------

inline json to_json(std::span<const GroupSummary> groups) {
  json out = json::array();
  for (const auto& g : groups) {
    out.push_back({{"group", g.group_key},
                   {"job_count", g.job_count},
                   {"total_kwh", g.total_kwh},
                   {"total_gco2e", g.total_gco2e},
                   {"equivalences", to_json(g.equivalences)}});
  }
  return out;
}

inline std::string render(std::span<const GroupSummary> groups, Format format) {
  if (format == Format::json) return dump(to_json(groups));
  std::ostringstream os;
  const bool md = format == Format::markdown;
  os << (md ? "| Group | Jobs | Energy | Footprint | Car (EU) | Tree-months |\n|---|---|---|---|---|---|\n"
            : "group  jobs  energy  footprint  car_eu  tree_months\n");
  for (const auto& g : groups) {
    const auto key = g.group_key.empty() ? std::string("(none)") : g.group_key;
    if (md) {
      os << "| " << key << " | " << g.job_count << " | " << format_kwh(g.total_kwh) << " | " << format_g(g.total_gco2e)
         << " | " << format_grouped(g.equivalences.car_km_eu) << " km | " << format_grouped(g.equivalences.tree_months)
         << " |\n";
    } else {
      os << key << "  " << g.job_count << "  " << format_kwh(g.total_kwh) << "  " << format_g(g.total_gco2e) << "  "
         << format_grouped(g.equivalences.car_km_eu) << " km  " << format_grouped(g.equivalences.tree_months)
         << " tree-months\n";
    }
  }
  return os.str();
}

}  // namespace greenalgo::interface
