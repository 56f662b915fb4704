#pragma once

// What-if analyses built on the single-task model: comparing two settings
// (e.g. relocating to another facility), sweeping a strong-scaling curve for
// the emission-optimal core count, and sector-scale totals.

#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "greenalgo/csv.hpp"
#include "greenalgo/errors.hpp"
#include "greenalgo/model.hpp"

namespace greenalgo {

struct ScenarioSetting {
  Workload workload;
  Facility facility;
  GridCarbonIntensity ci;
  std::string label;
};

struct Comparison {
  FootprintEstimate a;
  FootprintEstimate b;
  double absolute_delta_g = 0.0;  // b - a, scaled emissions
  double relative_change = 0.0;   // (b - a) / a
};

inline Comparison compare(const ScenarioSetting& a, const ScenarioSetting& b, const ReferenceConstants& constants = {}) {
  Comparison out;
  out.a = estimate(a.workload, a.facility, a.ci, constants);
  out.b = estimate(b.workload, b.facility, b.ci, constants);
  out.absolute_delta_g = out.b.gco2e_scaled - out.a.gco2e_scaled;
  if (out.a.gco2e_scaled > 0.0) {
    out.relative_change = out.absolute_delta_g / out.a.gco2e_scaled;
  } else {
    // Nothing to compare against: 0 -> 0 is no change, 0 -> x is unbounded.
    out.relative_change = out.b.gco2e_scaled > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return out;
}

struct ScalingPoint {
  int core_count = 1;
  double runtime_hours = 0.0;

  friend bool operator==(const ScalingPoint&, const ScalingPoint&) = default;
};

/// Measured runtime per core count for a fixed problem size.
class ScalingCurve {
 public:
  /// Throws ValidationError unless non-empty, with strictly increasing core
  /// counts >= 1 and positive finite runtimes.
  explicit ScalingCurve(std::vector<ScalingPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("empty_curve", "curve", "curve: at least one point is required");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (p.core_count < 1) throw ValidationError("out_of_range", "cores", "curve: core counts must be >= 1");
      if (!(std::isfinite(p.runtime_hours) && p.runtime_hours > 0.0))
        throw ValidationError("out_of_range", "runtime_hours", "curve: runtimes must be > 0");
      if (i > 0 && p.core_count <= points_[i - 1].core_count)
        throw ValidationError("not_increasing", "cores", "curve: core counts must be strictly increasing");
    }
  }

  const std::vector<ScalingPoint>& points() const noexcept { return points_; }

 private:
  std::vector<ScalingPoint> points_;
};

inline constexpr std::string_view kScalingCurveHeader = "cores,runtime_hours";

/// CSV with header `cores,runtime_hours`.
inline ScalingCurve load_scaling_curve(std::istream& in) {
  std::vector<ScalingPoint> points;
  for (const auto& row : csv::read_table(in, kScalingCurveHeader)) {
    const auto cores = csv::require_integer(row, 0, "cores");
    if (cores < 1 || cores > std::numeric_limits<int>::max())
      throw DataError("invariant_violation", row.line, "cores", "line " + std::to_string(row.line) + ": cores must be >= 1");
    points.push_back({static_cast<int>(cores), csv::require_double(row, 1, "runtime_hours")});
  }
  try {
    return ScalingCurve(std::move(points));
  } catch (const ValidationError& e) {
    throw DataError("invariant_violation", 0, e.field(), e.what());
  }
}

struct SweepOptions {
  /// When set, the base workload's memory size is per core and is multiplied
  /// by each point's core count. Otherwise memory is held constant.
  bool memory_per_core = false;
};

struct SweepRow {
  int core_count = 0;
  double runtime_hours = 0.0;
  FootprintEstimate estimate;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int optimal_core_count = 0;
};

/// Estimates every curve point with the base workload's per-core power,
/// usage, memory and PSF. The optimum minimises scaled emissions; ties go to
/// the smallest core count.
inline SweepResult sweep(const Workload& base, const ScalingCurve& curve, const Facility& facility,
                         const GridCarbonIntensity& ci, SweepOptions options = {},
                         const ReferenceConstants& constants = {}) {
  if (base.explicit_power_kw) {
    throw ValidationError("explicit_power", "explicit_power_kw", "sweeps need a per-core power model");
  }
  SweepResult out;
  out.rows.reserve(curve.points().size());
  std::size_t best = 0;
  for (const auto& point : curve.points()) {
    Workload w = base;
    w.core_count = point.core_count;
    w.runtime_hours = point.runtime_hours;
    if (options.memory_per_core) w.memory.size_gb = base.memory.size_gb * point.core_count;
    out.rows.push_back({point.core_count, point.runtime_hours, estimate(w, facility, ci, constants)});
    if (out.rows.back().estimate.gco2e_scaled < out.rows[best].estimate.gco2e_scaled) best = out.rows.size() - 1;
  }
  out.optimal_core_count = out.rows[best].core_count;
  return out;
}

/// Emissions of a whole sector from its yearly electricity use, in tonnes CO2e.
inline double sector_estimate(double total_twh, const GridCarbonIntensity& ci) {
  detail::require_finite(total_twh, "total_twh");
  detail::require(total_twh >= 0.0, "total_twh", "must be >= 0");
  validate(ci);
  constexpr double kwh_per_twh = 1e9;
  constexpr double g_per_tonne = 1e6;
  return total_twh * kwh_per_twh * ci.gco2e_per_kwh / g_per_tonne;
}

}  // namespace greenalgo
