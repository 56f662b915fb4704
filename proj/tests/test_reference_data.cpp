#include <gtest/gtest.h>

#include <sstream>

#include "greenalgo/reference_data.hpp"
#include "oracles.hpp"

using namespace greenalgo;

namespace {

ProcessorCatalog processors_from(const std::string& text) {
  std::istringstream in(text);
  return load_processors(in);
}

CarbonIntensityCatalog ci_from(const std::string& text) {
  std::istringstream in(text);
  return load_carbon_intensities(in);
}

const std::string kProcHeader = "name,kind,tdp_watts,unit_count,source\n";
const std::string kCiHeader = "region_code,region_name,gco2e_per_kwh,year,source\n";

template <typename F>
DataError data_error(F&& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e;
  }
  ADD_FAILURE() << "no DataError thrown";
  return DataError("none", 0, "", "");
}

}  // namespace

TEST(LoadProcessors, ParsesRowAndNormalises) {
  const auto cat = processors_from(kProcHeader + "Xeon E5-2680 v3,cpu,120,12,intel-ark\n");
  ASSERT_EQ(cat.size(), 1u);
  EXPECT_DOUBLE_EQ(per_unit_power(cat.entries()[0].profile), 10.0);
  EXPECT_EQ(cat.entries()[0].source, "intel-ark");
}

TEST(LoadProcessors, HeaderOnlyIsEmpty) {
  EXPECT_TRUE(processors_from(kProcHeader).empty());
}

TEST(LoadProcessors, AcceptsCrlfAndBom) {
  const auto cat = processors_from("\xEF\xBB\xBF" "name,kind,tdp_watts,unit_count,source\r\nA,cpu,100,4,x\r\nB,gpu,250,1,y\r\n");
  EXPECT_EQ(cat.size(), 2u);
  EXPECT_EQ(cat.entries()[1].profile.kind, ProcessorKind::gpu);
}

TEST(LoadProcessors, Errors) {
  EXPECT_EQ(data_error([] { processors_from(kProcHeader + "A,cpu,100,0,x\n"); }).code(), "invariant_violation");
  auto malformed = data_error([] { processors_from(kProcHeader + "A,cpu,100,4\n"); });
  EXPECT_EQ(malformed.code(), "malformed_row");
  EXPECT_EQ(malformed.line(), 2u);
  EXPECT_EQ(data_error([] { processors_from(kProcHeader + "A,cpu,abc,4,x\n"); }).code(), "malformed_row");
  EXPECT_EQ(data_error([] { processors_from(kProcHeader + "A,fpga,100,4,x\n"); }).code(), "malformed_row");
  auto dup = data_error([] { processors_from(kProcHeader + "Xeon X,cpu,100,4,x\n xeon x ,cpu,90,4,y\n"); });
  EXPECT_EQ(dup.code(), "duplicate_name");
  EXPECT_EQ(dup.line(), 3u);
  EXPECT_EQ(data_error([] { processors_from(kProcHeader + "Hot,gpu,600,1,x\n"); }).code(), "invariant_violation");
  EXPECT_EQ(data_error([] { processors_from("name,tdp\n"); }).code(), "bad_header");
}

TEST(LoadCarbonIntensities, WorldAverage) {
  const auto cat = ci_from(kCiHeader + "WORLD,World average,475,2019,IEA\n");
  EXPECT_EQ(cat.world_average().gco2e_per_kwh, 475.0);
  EXPECT_EQ(cat.world_average().year, 2019);
}

TEST(LoadCarbonIntensities, Errors) {
  EXPECT_EQ(data_error([] { ci_from(kCiHeader + "FR,France,51,2020,x\n"); }).code(), "missing_world_average");
  EXPECT_EQ(data_error([] { ci_from(kCiHeader + "WORLD,W,475,2019,x\nFR,France,51,2020,x\nFR,Again,52,2020,x\n"); }).code(),
            "duplicate_name");
  EXPECT_EQ(data_error([] { ci_from(kCiHeader + "WORLD,W,475,2019,x\nFR,France,2500,2020,x\n"); }).code(),
            "invariant_violation");
  EXPECT_EQ(data_error([] { ci_from(kCiHeader + "WORLD,W,475,2019,x\nFR,France,0,2020,x\n"); }).code(),
            "invariant_violation");
  EXPECT_EQ(data_error([] { ci_from(kCiHeader + "WORLD,W,475,2019,x\nfrance,France,50,2020,x\n"); }).code(),
            "invariant_violation");
}

TEST(LoadCarbonIntensities, SubRegionCodes) {
  const auto cat = ci_from(kCiHeader + "WORLD,W,475,2019,x\nAU-SA,South Australia,350,2020,x\n");
  EXPECT_EQ(lookup_ci(cat, "au-sa").region_name, "South Australia");
}

TEST(LoadConstants, RequiresEveryKeyOnce) {
  std::ostringstream os;
  write_constants(os, ReferenceConstants{});
  std::istringstream ok(os.str());
  EXPECT_EQ(load_constants(ok), ReferenceConstants{});

  std::istringstream missing("key,value,unit,source\nmemory_w_per_gb,0.3725,W/GB,x\n");
  EXPECT_THROW(load_constants(missing), DataError);

  std::istringstream unknown(os.str() + "speed_of_light,3e8,m/s,x\n");
  EXPECT_THROW(load_constants(unknown), DataError);

  std::istringstream negative(os.str().replace(os.str().find("0.3725"), 6, "-1"));
  EXPECT_THROW(load_constants(negative), DataError);
}

TEST(Lookup, ProcessorIsCaseInsensitive) {
  const auto& data = bundled_reference_data();
  EXPECT_EQ(lookup_processor(data.processors, "xeon e5-2680 v3").name, "Xeon E5-2680 v3");
  EXPECT_EQ(lookup_processor(data.processors, "  XEON E5-2680 V3 ").tdp_watts, 120.0);
}

TEST(Lookup, EmptyNameIsNotFound) {
  EXPECT_THROW(lookup_processor(bundled_reference_data().processors, ""), NotFound);
}

TEST(Lookup, SuggestionsMatchEditDistanceOracle) {
  const auto& cat = bundled_reference_data().processors;
  const std::string query = "Xeon E5-268O v3";
  try {
    lookup_processor(cat, query);
    FAIL() << "expected NotFound";
  } catch (const NotFound& e) {
    ASSERT_EQ(e.suggestions().size(), 3u);
    EXPECT_EQ(e.suggestions()[0], "Xeon E5-2680 v3");
    EXPECT_EQ(e.field(), "processor");
    // The reported suggestions are the three smallest case-folded distances.
    std::vector<int> all;
    for (const auto& n : cat.names()) {
      std::string a = query, b = n;
      for (auto& c : a) c = static_cast<char>(std::tolower(c));
      for (auto& c : b) c = static_cast<char>(std::tolower(c));
      all.push_back(oracle::levenshtein(a, b));
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < 3; ++i) {
      std::string a = query, b = e.suggestions()[i];
      for (auto& c : a) c = static_cast<char>(std::tolower(c));
      for (auto& c : b) c = static_cast<char>(std::tolower(c));
      EXPECT_EQ(oracle::levenshtein(a, b), all[i]);
    }
  }
}

TEST(Lookup, CarbonIntensity) {
  const auto& cat = bundled_reference_data().carbon_intensity;
  EXPECT_EQ(lookup_ci(cat, "WORLD").gco2e_per_kwh, 475.0);
  EXPECT_EQ(lookup_ci(cat, "CH").gco2e_per_kwh, 19.0);
  EXPECT_EQ(lookup_ci(cat, "AU").gco2e_per_kwh, 880.0);
  EXPECT_THROW(lookup_ci(cat, "ZZ"), NotFound);
  try {
    lookup_ci(cat, "ZZ");
  } catch (const NotFound& e) {
    EXPECT_EQ(e.field(), "region_code");
  }
}

TEST(BundledData, EveryFileValidatesAgainstItsPin) {
  for (const auto& check : validate_sources(bundled_sources())) {
    EXPECT_TRUE(check.loaded) << check.file << ": " << check.message;
    EXPECT_TRUE(check.checksum_ok) << check.file << ": " << check.message;
  }
}

TEST(BundledData, SourceTreeMatchesEmbeddedCopy) {
  const auto on_disk = read_sources(GREENALGO_SOURCE_DIR "/data");
  const auto embedded = bundled_sources();
  EXPECT_EQ(on_disk.processors_csv, embedded.processors_csv);
  EXPECT_EQ(on_disk.carbon_intensity_csv, embedded.carbon_intensity_csv);
  EXPECT_EQ(on_disk.constants_csv, embedded.constants_csv);
  for (const auto& check : validate_sources(on_disk)) EXPECT_TRUE(check.checksum_ok) << check.message;
}

TEST(BundledData, TamperingIsDetected) {
  auto src = bundled_sources();
  src.carbon_intensity_csv.replace(src.carbon_intensity_csv.find("WORLD,World average,475"), 23, "WORLD,World average,476");
  const auto checks = validate_sources(src);
  EXPECT_TRUE(checks[1].loaded);
  EXPECT_FALSE(checks[1].checksum_ok);
}

TEST(BundledData, ConstantsAreContractual) {
  EXPECT_EQ(bundled_reference_data().constants, ReferenceConstants{});
  const ReferenceConstants k;
  EXPECT_EQ(k.memory_w_per_gb, 0.3725);
  EXPECT_EQ(k.car_eu_g_per_km, 175.0);
  EXPECT_EQ(k.car_us_g_per_km, 251.0);
  EXPECT_EQ(k.flight_paris_london_g, 50000.0);
  EXPECT_EQ(k.flight_ny_sf_g, 570000.0);
  EXPECT_EQ(k.flight_ny_melbourne_g, 2310000.0);
  EXPECT_EQ(k.tree_kg_per_year, 11.0);
  EXPECT_EQ(k.world_avg_pue, 1.67);
  EXPECT_EQ(k.personal_device_pue, 1.0);
  EXPECT_EQ(k.world_avg_ci, 475.0);
}

TEST(BundledData, CarbonIntensitiesWithinObservedSpan) {
  for (const auto& ci : bundled_reference_data().carbon_intensity.entries()) {
    EXPECT_GE(ci.gco2e_per_kwh, 19.0) << ci.region_code;
    EXPECT_LE(ci.gco2e_per_kwh, 880.0) << ci.region_code;
  }
}

TEST(BundledData, ReferenceProcessorsPresent) {
  const auto& cat = bundled_reference_data().processors;
  EXPECT_DOUBLE_EQ(per_unit_power(lookup_processor(cat, "Xeon E5-2680 v3")), 10.0);
  EXPECT_NEAR(per_unit_power(lookup_processor(cat, "Xeon E5-2695 v4")), 6.667, 5e-4);
  EXPECT_DOUBLE_EQ(per_unit_power(lookup_processor(cat, "Tesla V100")), 300.0);
  EXPECT_NEAR(per_unit_power(lookup_processor(cat, "Core i5-10400")), 10.833, 5e-4);
}

TEST(Catalogs, CsvRoundTrip) {
  const auto& data = bundled_reference_data();
  std::ostringstream p, c, k;
  write_processors(p, data.processors);
  write_carbon_intensities(c, data.carbon_intensity);
  write_constants(k, data.constants);
  std::istringstream pi(p.str()), ci(c.str()), ki(k.str());
  EXPECT_EQ(load_processors(pi), data.processors);
  EXPECT_EQ(load_carbon_intensities(ci), data.carbon_intensity);
  EXPECT_EQ(load_constants(ki), data.constants);
}

TEST(Catalogs, LoadingIsDeterministic) {
  const auto a = load_reference_data(bundled_sources());
  const auto b = load_reference_data(bundled_sources());
  EXPECT_EQ(a.processors, b.processors);
  EXPECT_EQ(a.carbon_intensity, b.carbon_intensity);
  EXPECT_EQ(a.data_version, b.data_version);
}

TEST(Catalogs, ReadSourcesReportsMissingDirectory) {
  EXPECT_THROW(read_sources("/nonexistent/greenalgo-data"), IoError);
}
