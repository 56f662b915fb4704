#pragma once

// Energy and emissions model for a single computational task.
//
//   energy    E = t * (n_c * P_c * u_c + n_m * P_m) * PUE * 0.001   [kWh]
//   footprint C = E * CI                                            [gCO2e]
//
// t is runtime in hours, n_c the number of cores, P_c the power draw of one
// core (W), u_c the core usage factor, n_m the memory allocated (GB), P_m the
// power draw per GB (W), PUE the facility power usage effectiveness and CI
// the grid carbon intensity (gCO2e/kWh). A pragmatic scaling factor (PSF)
// multiplies the result to account for repeated runs.
//
// All arithmetic is double precision; nothing is rounded here.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "greenalgo/errors.hpp"

namespace greenalgo {

/// Contractual reference values. Loaded from data/constants.csv; the
/// defaults below are the values the bundled file must carry.
struct ReferenceConstants {
  double memory_w_per_gb = 0.3725;
  double car_eu_g_per_km = 175.0;
  double car_us_g_per_km = 251.0;
  double flight_paris_london_g = 50'000.0;
  double flight_ny_sf_g = 570'000.0;
  double flight_ny_melbourne_g = 2'310'000.0;
  double tree_kg_per_year = 11.0;
  double world_avg_pue = 1.67;
  double personal_device_pue = 1.0;
  double world_avg_ci = 475.0;

  /// Grams of CO2 one mature tree absorbs per month.
  double tree_g_per_month() const { return tree_kg_per_year * 1000.0 / 12.0; }

  friend bool operator==(const ReferenceConstants&, const ReferenceConstants&) = default;
};

enum class ProcessorKind { cpu, gpu, tpu, other };

inline std::string_view to_string(ProcessorKind kind) {
  switch (kind) {
    case ProcessorKind::cpu: return "cpu";
    case ProcessorKind::gpu: return "gpu";
    case ProcessorKind::tpu: return "tpu";
    case ProcessorKind::other: return "other";
  }
  return "other";
}

inline std::optional<ProcessorKind> parse_processor_kind(std::string_view text) {
  if (text == "cpu") return ProcessorKind::cpu;
  if (text == "gpu") return ProcessorKind::gpu;
  if (text == "tpu") return ProcessorKind::tpu;
  if (text == "other") return ProcessorKind::other;
  return std::nullopt;
}

/// A compute device as listed by its manufacturer. For CPUs `unit_count` is
/// the number of cores, for GPUs/TPUs the number of devices in the package.
struct ProcessorProfile {
  std::string name;
  ProcessorKind kind = ProcessorKind::cpu;
  double tdp_watts = 0.0;
  int unit_count = 1;

  friend bool operator==(const ProcessorProfile&, const ProcessorProfile&) = default;
};

struct MemorySpec {
  double size_gb = 0.0;
  double power_per_gb = ReferenceConstants{}.memory_w_per_gb;

  friend bool operator==(const MemorySpec&, const MemorySpec&) = default;
};

struct Workload {
  double runtime_hours = 0.0;
  int core_count = 0;
  /// Fraction of the runtime the cores draw their rated power. 1.0 when unknown.
  double usage_factor = 1.0;
  double per_core_power_w = 0.0;
  MemorySpec memory{};
  double psf = 1.0;
  /// Measured or published total draw of the whole system. When set, the
  /// core and memory fields do not take part in the energy computation.
  std::optional<double> explicit_power_kw;

  friend bool operator==(const Workload&, const Workload&) = default;
};

/// Hosting facility. PUE is the ratio of total facility power to IT power;
/// it is always an input here. 1.0 is used for ideal facilities and for
/// personal devices where no overhead can be attributed.
struct Facility {
  std::string label;
  double pue = ReferenceConstants{}.world_avg_pue;

  friend bool operator==(const Facility&, const Facility&) = default;
};

struct GridCarbonIntensity {
  std::string region_code;
  std::string region_name;
  double gco2e_per_kwh = 0.0;
  int year = 0;
  std::string source;

  friend bool operator==(const GridCarbonIntensity&, const GridCarbonIntensity&) = default;
};

struct EnergyEstimate {
  double core_kwh = 0.0;
  double memory_kwh = 0.0;
  double it_kwh = 0.0;     // core + memory, before facility overhead
  double total_kwh = 0.0;  // it_kwh * PUE

  friend bool operator==(const EnergyEstimate&, const EnergyEstimate&) = default;
};

struct EquivalenceSet {
  double car_km_eu = 0.0;
  double car_km_us = 0.0;
  double flights_paris_london = 0.0;
  double flights_ny_sf = 0.0;
  double flights_ny_melbourne = 0.0;
  double tree_months = 0.0;
  double tree_years = 0.0;

  friend bool operator==(const EquivalenceSet&, const EquivalenceSet&) = default;
};

struct FootprintEstimate {
  double gco2e_single = 0.0;
  double psf = 1.0;
  double gco2e_scaled = 0.0;
  EnergyEstimate energy{};
  GridCarbonIntensity ci_used{};
  EquivalenceSet equivalences{};

  friend bool operator==(const FootprintEstimate&, const FootprintEstimate&) = default;
};

namespace detail {

inline void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ValidationError("out_of_range", field, std::string(field) + ": " + message);
}

inline void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) throw ValidationError("not_finite", field, std::string(field) + ": must be finite");
}

}  // namespace detail

inline void validate(const ProcessorProfile& p) {
  detail::require(!p.name.empty(), "name", "must not be empty");
  detail::require_finite(p.tdp_watts, "tdp_watts");
  detail::require(p.tdp_watts > 0.0, "tdp_watts", "must be > 0");
  detail::require(p.unit_count >= 1, "unit_count", "must be >= 1");
}

inline void validate(const MemorySpec& m) {
  detail::require_finite(m.size_gb, "mem_gb");
  detail::require_finite(m.power_per_gb, "memory_power_per_gb");
  detail::require(m.size_gb >= 0.0, "mem_gb", "must be >= 0");
  detail::require(m.power_per_gb >= 0.0, "memory_power_per_gb", "must be >= 0");
}

inline void validate(const Workload& w) {
  detail::require_finite(w.runtime_hours, "runtime_hours");
  detail::require_finite(w.usage_factor, "usage_factor");
  detail::require_finite(w.per_core_power_w, "per_core_power_w");
  detail::require_finite(w.psf, "psf");
  detail::require(w.runtime_hours >= 0.0, "runtime_hours", "must be >= 0");
  detail::require(w.core_count >= 0, "cores", "must be >= 0");
  detail::require(w.usage_factor >= 0.0 && w.usage_factor <= 1.0, "usage_factor", "must be within [0, 1]");
  detail::require(w.per_core_power_w >= 0.0, "per_core_power_w", "must be >= 0");
  detail::require(w.psf >= 1.0, "psf", "must be >= 1");
  validate(w.memory);
  if (w.explicit_power_kw) {
    detail::require_finite(*w.explicit_power_kw, "explicit_power_kw");
    detail::require(*w.explicit_power_kw > 0.0, "explicit_power_kw", "must be > 0");
  }
}

inline void validate(const Facility& f) {
  detail::require_finite(f.pue, "pue");
  detail::require(f.pue >= 1.0, "pue", "must be >= 1");
}

inline void validate(const GridCarbonIntensity& ci) {
  detail::require_finite(ci.gco2e_per_kwh, "gco2e_per_kwh");
  detail::require(ci.gco2e_per_kwh > 0.0, "gco2e_per_kwh", "must be > 0");
}

/// TDP normalised to one core (CPU) or one device (GPU/TPU).
inline double per_unit_power(const ProcessorProfile& profile) {
  validate(profile);
  return profile.tdp_watts / profile.unit_count;
}

inline EnergyEstimate energy(const Workload& workload, const Facility& facility) {
  validate(workload);
  validate(facility);
  if (workload.explicit_power_kw) {
    throw ValidationError("explicit_power", "explicit_power_kw",
                          "workload carries an explicit power draw; use energy_from_power");
  }
  const double t = workload.runtime_hours;
  EnergyEstimate e;
  e.core_kwh = t * workload.core_count * workload.per_core_power_w * workload.usage_factor * 0.001;
  e.memory_kwh = t * workload.memory.size_gb * workload.memory.power_per_gb * 0.001;
  e.it_kwh = e.core_kwh + e.memory_kwh;
  e.total_kwh = e.it_kwh * facility.pue;
  return e;
}

/// Energy for a system whose total draw is known directly. Memory is not
/// modelled separately: everything is booked as core energy.
inline EnergyEstimate energy_from_power(double power_kw, double runtime_hours, const Facility& facility) {
  detail::require_finite(power_kw, "explicit_power_kw");
  detail::require_finite(runtime_hours, "runtime_hours");
  detail::require(power_kw > 0.0, "explicit_power_kw", "must be > 0");
  detail::require(runtime_hours >= 0.0, "runtime_hours", "must be >= 0");
  validate(facility);
  EnergyEstimate e;
  e.it_kwh = power_kw * runtime_hours;
  e.core_kwh = e.it_kwh;
  e.memory_kwh = 0.0;
  e.total_kwh = e.it_kwh * facility.pue;
  return e;
}

inline double footprint(double energy_kwh, const GridCarbonIntensity& ci) {
  detail::require_finite(energy_kwh, "energy_kwh");
  detail::require(energy_kwh >= 0.0, "energy_kwh", "must be >= 0");
  validate(ci);
  return energy_kwh * ci.gco2e_per_kwh;
}

inline EquivalenceSet equivalences(double gco2e, const ReferenceConstants& constants = {}) {
  detail::require_finite(gco2e, "gco2e");
  detail::require(gco2e >= 0.0, "gco2e", "must be >= 0");
  EquivalenceSet eq;
  eq.car_km_eu = gco2e / constants.car_eu_g_per_km;
  eq.car_km_us = gco2e / constants.car_us_g_per_km;
  eq.flights_paris_london = gco2e / constants.flight_paris_london_g;
  eq.flights_ny_sf = gco2e / constants.flight_ny_sf_g;
  eq.flights_ny_melbourne = gco2e / constants.flight_ny_melbourne_g;
  eq.tree_months = gco2e / constants.tree_g_per_month();
  eq.tree_years = eq.tree_months / 12.0;
  return eq;
}

inline FootprintEstimate estimate(const Workload& workload, const Facility& facility,
                                  const GridCarbonIntensity& ci, const ReferenceConstants& constants = {}) {
  validate(workload);
  FootprintEstimate out;
  out.energy = workload.explicit_power_kw
                   ? energy_from_power(*workload.explicit_power_kw, workload.runtime_hours, facility)
                   : energy(workload, facility);
  out.gco2e_single = footprint(out.energy.total_kwh, ci);
  out.psf = workload.psf;
  out.gco2e_scaled = out.gco2e_single * workload.psf;
  out.ci_used = ci;
  out.equivalences = equivalences(out.gco2e_scaled, constants);
  return out;
}

}  // namespace greenalgo
