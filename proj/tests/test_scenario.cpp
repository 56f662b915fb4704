#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "greenalgo/reference_data.hpp"
#include "greenalgo/scenario.hpp"
#include "oracles.hpp"

using namespace greenalgo;

namespace {

GridCarbonIntensity ci_of(double value, std::string code = "XX") { return {std::move(code), "", value, 2020, ""}; }

ScenarioSetting setting(double pue, double ci) {
  ScenarioSetting s;
  s.workload.runtime_hours = 10.0;
  s.workload.core_count = 8;
  s.workload.per_core_power_w = 12.5;
  s.workload.memory.size_gb = 32.0;
  s.facility.pue = pue;
  s.ci = ci_of(ci);
  return s;
}

Workload per_core(double watts) {
  Workload w;
  w.per_core_power_w = watts;
  return w;
}

}  // namespace

TEST(Compare, IdenticalSettingsHaveNoChange) {
  const auto c = compare(setting(1.5, 300.0), setting(1.5, 300.0));
  EXPECT_EQ(c.absolute_delta_g, 0.0);
  EXPECT_EQ(c.relative_change, 0.0);
}

TEST(Compare, DoublingPueDoublesEmissions) {
  const auto c = compare(setting(1.0, 300.0), setting(2.0, 300.0));
  EXPECT_NEAR(c.relative_change, 1.0, 1e-12);
}

TEST(Compare, IfsRelocationReadingToBologna) {
  const auto& data = bundled_reference_data();
  ScenarioSetting reading;
  reading.workload.runtime_hours = 8.0 / 60.0;
  reading.workload.core_count = 4608;
  reading.workload.per_core_power_w = per_unit_power(lookup_processor(data.processors, "Xeon E5-2695 v4"));
  reading.workload.memory.size_gb = 8192.0;
  reading.workload.psf = 180.0;
  reading.facility.pue = 1.45;
  reading.ci = lookup_ci(data.carbon_intensity, "GB");
  ScenarioSetting bologna = reading;
  bologna.facility.pue = 1.27;
  bologna.ci = lookup_ci(data.carbon_intensity, "IT");

  const auto c = compare(reading, bologna);
  EXPECT_NEAR(c.relative_change, 350063.0 / 298915.0 - 1.0, 0.01);
  EXPECT_NEAR(lookup_ci(data.carbon_intensity, "IT").gco2e_per_kwh / lookup_ci(data.carbon_intensity, "GB").gco2e_per_kwh,
              1.337, 0.005);
}

TEST(Compare, ZeroBaseline) {
  auto zero = setting(1.0, 100.0);
  zero.workload.runtime_hours = 0.0;
  EXPECT_EQ(compare(zero, zero).relative_change, 0.0);
  EXPECT_TRUE(std::isinf(compare(zero, setting(1.0, 100.0)).relative_change));
}

TEST(CompareProperties, AntisymmetricDelta) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pue(1.0, 2.5), ci(10.0, 900.0);
  for (int i = 0; i < 200; ++i) {
    const auto a = setting(pue(rng), ci(rng));
    const auto b = setting(pue(rng), ci(rng));
    EXPECT_EQ(compare(a, b).absolute_delta_g, -compare(b, a).absolute_delta_g);
  }
}

TEST(CompareProperties, IdenticalWorkloadsDependOnlyOnPueAndCi) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> pue(1.0, 2.5), ci(10.0, 900.0);
  for (int i = 0; i < 200; ++i) {
    const auto a = setting(pue(rng), ci(rng));
    const auto b = setting(pue(rng), ci(rng));
    const double expected = (b.facility.pue * b.ci.gco2e_per_kwh) / (a.facility.pue * a.ci.gco2e_per_kwh) - 1.0;
    const auto c = compare(a, b);
    EXPECT_TRUE(oracle::rel_close(c.relative_change, expected, 1e-9) || std::abs(c.relative_change - expected) < 1e-12);
    const double direct = estimate(b.workload, b.facility, b.ci).gco2e_scaled / estimate(a.workload, a.facility, a.ci).gco2e_scaled - 1.0;
    EXPECT_NEAR(c.relative_change, direct, 1e-9);
  }
}

TEST(ScalingCurveTest, Validation) {
  EXPECT_THROW(ScalingCurve({}), ValidationError);
  EXPECT_THROW(ScalingCurve({{4, 1.0}, {4, 0.5}}), ValidationError);
  EXPECT_THROW(ScalingCurve({{4, 1.0}, {2, 0.5}}), ValidationError);
  EXPECT_THROW(ScalingCurve({{0, 1.0}}), ValidationError);
  EXPECT_THROW(ScalingCurve({{1, 0.0}}), ValidationError);
}

TEST(ScalingCurveTest, LoadsCsv) {
  std::istringstream in("cores,runtime_hours\n1,60\n15,3\n60,1.5\n");
  const auto curve = load_scaling_curve(in);
  ASSERT_EQ(curve.points().size(), 3u);
  EXPECT_EQ(curve.points()[2], (ScalingPoint{60, 1.5}));

  std::istringstream bad("cores,runtime_hours\n2,1\n1,2\n");
  EXPECT_THROW(load_scaling_curve(bad), DataError);
  std::istringstream empty("cores,runtime_hours\n");
  EXPECT_THROW(load_scaling_curve(empty), DataError);
}

TEST(Sweep, ThreePointCurve) {
  const ScalingCurve curve({{1, 60.0}, {15, 3.0}, {60, 1.5}});
  const auto r = sweep(per_core(10.0), curve, {"", 1.0}, ci_of(100.0));
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_NEAR(r.rows[0].estimate.gco2e_scaled, 60.0, 1e-9);
  EXPECT_NEAR(r.rows[1].estimate.gco2e_scaled, 45.0, 1e-9);
  EXPECT_NEAR(r.rows[2].estimate.gco2e_scaled, 90.0, 1e-9);
  EXPECT_EQ(r.optimal_core_count, 15);
}

TEST(Sweep, SinglePointIsOptimal) {
  const auto r = sweep(per_core(10.0), ScalingCurve({{8, 2.0}}), {"", 1.0}, ci_of(100.0));
  EXPECT_EQ(r.optimal_core_count, 8);
}

TEST(Sweep, TiesGoToFewestCores) {
  // 2 x 4 h and 4 x 2 h and 8 x 1 h all use 8 core-hours.
  const auto r = sweep(per_core(10.0), ScalingCurve({{2, 4.0}, {4, 2.0}, {8, 1.0}}), {"", 1.0}, ci_of(100.0));
  EXPECT_EQ(r.optimal_core_count, 2);
}

TEST(Sweep, QuadrupleCoresHalfTimeDoublesEmissions) {
  const auto r = sweep(per_core(7.3), ScalingCurve({{15, 2.0}, {60, 1.0}}), {"", 1.67}, ci_of(475.0));
  EXPECT_NEAR(r.rows[1].estimate.gco2e_scaled, 2.0 * r.rows[0].estimate.gco2e_scaled, 1e-9);
}

TEST(Sweep, MemoryHeldConstantOrScaledPerCore) {
  Workload base = per_core(10.0);
  base.memory.size_gb = 4.0;
  const ScalingCurve curve({{1, 1.0}, {10, 1.0}});
  const auto fixed = sweep(base, curve, {"", 1.0}, ci_of(1000.0));
  EXPECT_NEAR(fixed.rows[1].estimate.energy.memory_kwh, 4.0 * 0.3725 * 0.001, 1e-15);
  SweepOptions per;
  per.memory_per_core = true;
  const auto scaled = sweep(base, curve, {"", 1.0}, ci_of(1000.0), per);
  EXPECT_NEAR(scaled.rows[1].estimate.energy.memory_kwh, 40.0 * 0.3725 * 0.001, 1e-15);
}

TEST(Sweep, RejectsExplicitPowerBase) {
  Workload base;
  base.explicit_power_kw = 2.0;
  EXPECT_THROW(sweep(base, ScalingCurve({{1, 1.0}}), {"", 1.0}, ci_of(1.0)), ValidationError);
}

TEST(SweepProperties, BreakEvenRule) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> cores(1, 512);
  std::uniform_real_distribution<double> hours(0.01, 100.0), watts(0.5, 400.0);
  for (int i = 0; i < 1000; ++i) {
    int n1 = cores(rng), n2 = cores(rng);
    if (n1 == n2) continue;
    if (n1 > n2) std::swap(n1, n2);
    const double t1 = hours(rng), t2 = hours(rng);
    const auto r = sweep(per_core(watts(rng)), ScalingCurve({{n1, t1}, {n2, t2}}), {"", 1.3}, ci_of(300.0));
    const bool worse = r.rows[1].estimate.gco2e_scaled > r.rows[0].estimate.gco2e_scaled;
    const double a = n1 * t1, b = n2 * t2;
    if (std::abs(a - b) > 1e-9 * std::max(a, b)) {
      EXPECT_EQ(worse, b > a) << n1 << "x" << t1 << " vs " << n2 << "x" << t2;
    }
  }
}

TEST(SweepProperties, ArgminInvariantUnderPositiveScaling) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> len(1, 12), step(1, 32);
  std::uniform_real_distribution<double> hours(0.1, 50.0), factor(1.0, 50.0), mem(0.0, 256.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<ScalingPoint> pts;
    int cores = 0;
    for (int k = len(rng); k > 0; --k) {
      cores += step(rng);
      pts.push_back({cores, hours(rng)});
    }
    const ScalingCurve curve(pts);
    Workload base = per_core(9.0);
    base.memory.size_gb = mem(rng);
    const int opt = sweep(base, curve, {"", 1.2}, ci_of(200.0)).optimal_core_count;
    const double f = factor(rng);
    EXPECT_EQ(sweep(base, curve, {"", 1.2}, ci_of(200.0 * f)).optimal_core_count, opt);
    EXPECT_EQ(sweep(base, curve, {"", 1.2 * f}, ci_of(200.0)).optimal_core_count, opt);
    Workload scaled = base;
    scaled.psf = f;
    EXPECT_EQ(sweep(scaled, curve, {"", 1.2}, ci_of(200.0)).optimal_core_count, opt);
  }
}

TEST(SectorEstimate, Examples) {
  EXPECT_EQ(sector_estimate(200.0, ci_of(475.0)), 95e6);
  EXPECT_EQ(sector_estimate(0.0, ci_of(475.0)), 0.0);
  EXPECT_EQ(sector_estimate(1.0, ci_of(1.0)), 1000.0);
  EXPECT_THROW(sector_estimate(-1.0, ci_of(1.0)), ValidationError);
}
