#pragma once

// Reference catalogs: processors (TDP), grid carbon intensities and the
// contractual constants. Catalogs are immutable values once loaded.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/crc.hpp>

#include "greenalgo/bundled_data.hpp"
#include "greenalgo/csv.hpp"
#include "greenalgo/errors.hpp"
#include "greenalgo/model.hpp"

namespace greenalgo {

inline constexpr std::string_view kProcessorsHeader = "name,kind,tdp_watts,unit_count,source";
inline constexpr std::string_view kCarbonIntensityHeader = "region_code,region_name,gco2e_per_kwh,year,source";
inline constexpr std::string_view kConstantsHeader = "key,value,unit,source";
inline constexpr std::string_view kManifestHeader = "file,crc32,bytes,retrieved";
inline constexpr std::string_view kWorldRegion = "WORLD";
inline constexpr double kMaxPerUnitPowerW = 500.0;
inline constexpr double kMaxCarbonIntensity = 2000.0;

namespace detail {

inline std::string fold(std::string_view s) {
  std::string out(csv::trim(s));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Up to `limit` candidates closest to `query` (case-folded edit distance),
/// ties broken by catalog order.
inline std::vector<std::string> closest(std::string_view query, const std::vector<std::string>& candidates,
                                        std::size_t limit = 3) {
  const std::string q = fold(query);
  std::vector<std::pair<std::size_t, std::size_t>> scored;  // distance, index
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) scored.emplace_back(edit_distance(q, fold(candidates[i])), i);
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(candidates[scored[i].second]);
  return out;
}

inline bool valid_region_code(std::string_view code) {
  if (code == kWorldRegion) return true;
  const auto dash = code.find('-');
  const auto country = code.substr(0, dash);
  if (country.size() != 2) return false;
  for (char c : country)
    if (c < 'A' || c > 'Z') return false;
  if (dash == std::string_view::npos) return true;
  const auto sub = code.substr(dash + 1);
  if (sub.empty() || sub.size() > 3) return false;
  for (char c : sub)
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return false;
  return true;
}

[[noreturn]] inline void invariant_violation(std::size_t line, const std::string& name, const std::string& reason) {
  throw DataError("invariant_violation", line, name,
                  "line " + std::to_string(line) + ": '" + name + "' " + reason);
}

}  // namespace detail

struct ProcessorEntry {
  ProcessorProfile profile;
  std::string source;

  friend bool operator==(const ProcessorEntry&, const ProcessorEntry&) = default;
};

class ProcessorCatalog {
 public:
  ProcessorCatalog() = default;

  /// Throws DataError on duplicate names (case-folded) or invalid entries.
  explicit ProcessorCatalog(std::vector<ProcessorEntry> entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) add(std::move(entries[i]), i + 2);
  }

  const std::vector<ProcessorEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const ProcessorEntry* find(std::string_view name) const {
    const auto it = index_.find(detail::fold(name));
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.profile.name);
    return out;
  }

  friend bool operator==(const ProcessorCatalog& a, const ProcessorCatalog& b) { return a.entries_ == b.entries_; }

 private:
  friend ProcessorCatalog load_processors(std::istream&);

  void add(ProcessorEntry entry, std::size_t line) {
    entry.profile.name = std::string(csv::trim(entry.profile.name));
    const auto& p = entry.profile;
    if (p.name.empty()) detail::invariant_violation(line, p.name, "has an empty name");
    if (!(p.tdp_watts > 0.0)) detail::invariant_violation(line, p.name, "tdp_watts must be > 0");
    if (p.unit_count < 1) detail::invariant_violation(line, p.name, "unit_count must be >= 1");
    const double per_unit = p.tdp_watts / p.unit_count;
    if (!(per_unit > 0.0 && per_unit <= kMaxPerUnitPowerW))
      detail::invariant_violation(line, p.name, "per-unit power outside (0, 500] W");
    auto key = detail::fold(p.name);
    if (index_.count(key)) {
      throw DataError("duplicate_name", line, p.name, "line " + std::to_string(line) + ": duplicate processor '" + p.name + "'");
    }
    index_.emplace(std::move(key), entries_.size());
    entries_.push_back(std::move(entry));
  }

  std::vector<ProcessorEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

class CarbonIntensityCatalog {
 public:
  CarbonIntensityCatalog() = default;

  /// Throws DataError on duplicate codes, invalid values or a missing WORLD row.
  explicit CarbonIntensityCatalog(std::vector<GridCarbonIntensity> entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) add(std::move(entries[i]), i + 2);
    finish();
  }

  const std::vector<GridCarbonIntensity>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const GridCarbonIntensity& world_average() const { return entries_.at(world_); }

  const GridCarbonIntensity* find(std::string_view code) const {
    std::string key(csv::trim(code));
    for (auto& c : key) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto it = index_.find(key);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  std::vector<std::string> codes() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.region_code);
    return out;
  }

  friend bool operator==(const CarbonIntensityCatalog& a, const CarbonIntensityCatalog& b) {
    return a.entries_ == b.entries_;
  }

 private:
  friend CarbonIntensityCatalog load_carbon_intensities(std::istream&);

  void add(GridCarbonIntensity ci, std::size_t line) {
    const auto& code = ci.region_code;
    if (!detail::valid_region_code(code)) detail::invariant_violation(line, code, "is not a valid region code");
    if (!(ci.gco2e_per_kwh > 0.0 && ci.gco2e_per_kwh < kMaxCarbonIntensity))
      detail::invariant_violation(line, code, "carbon intensity outside (0, 2000) gCO2e/kWh");
    if (index_.count(code)) {
      throw DataError("duplicate_name", line, code, "line " + std::to_string(line) + ": duplicate region '" + code + "'");
    }
    index_.emplace(code, entries_.size());
    entries_.push_back(std::move(ci));
  }

  void finish() {
    const auto it = index_.find(std::string(kWorldRegion));
    if (it == index_.end()) throw DataError("missing_world_average", 0, std::string(kWorldRegion), "no WORLD row");
    world_ = it->second;
  }

  std::vector<GridCarbonIntensity> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t world_ = 0;
};

inline ProcessorCatalog load_processors(std::istream& in) {
  ProcessorCatalog catalog;
  for (const auto& row : csv::read_table(in, kProcessorsHeader)) {
    ProcessorEntry entry;
    entry.profile.name = row.cells[0];
    const auto kind = parse_processor_kind(row.cells[1]);
    if (!kind) {
      throw DataError("malformed_row", row.line, "kind",
                      "line " + std::to_string(row.line) + ": unknown kind '" + row.cells[1] + "'");
    }
    entry.profile.kind = *kind;
    entry.profile.tdp_watts = csv::require_double(row, 2, "tdp_watts");
    const auto units = csv::require_integer(row, 3, "unit_count");
    if (units < 1 || units > 1'000'000) detail::invariant_violation(row.line, entry.profile.name, "unit_count must be >= 1");
    entry.profile.unit_count = static_cast<int>(units);
    entry.source = row.cells[4];
    catalog.add(std::move(entry), row.line);
  }
  return catalog;
}

inline CarbonIntensityCatalog load_carbon_intensities(std::istream& in) {
  CarbonIntensityCatalog catalog;
  for (const auto& row : csv::read_table(in, kCarbonIntensityHeader)) {
    GridCarbonIntensity ci;
    ci.region_code = row.cells[0];
    ci.region_name = row.cells[1];
    ci.gco2e_per_kwh = csv::require_double(row, 2, "gco2e_per_kwh");
    ci.year = static_cast<int>(csv::require_integer(row, 3, "year"));
    ci.source = row.cells[4];
    catalog.add(std::move(ci), row.line);
  }
  catalog.finish();
  return catalog;
}

namespace detail {

struct ConstantField {
  std::string_view key;
  double ReferenceConstants::*member;
  std::string_view unit;
};

inline constexpr ConstantField kConstantFields[] = {
    {"memory_w_per_gb", &ReferenceConstants::memory_w_per_gb, "W/GB"},
    {"car_eu_g_per_km", &ReferenceConstants::car_eu_g_per_km, "gCO2e/km"},
    {"car_us_g_per_km", &ReferenceConstants::car_us_g_per_km, "gCO2e/km"},
    {"flight_paris_london_g", &ReferenceConstants::flight_paris_london_g, "gCO2e"},
    {"flight_ny_sf_g", &ReferenceConstants::flight_ny_sf_g, "gCO2e"},
    {"flight_ny_melbourne_g", &ReferenceConstants::flight_ny_melbourne_g, "gCO2e"},
    {"tree_kg_per_year", &ReferenceConstants::tree_kg_per_year, "kgCO2/year"},
    {"world_avg_pue", &ReferenceConstants::world_avg_pue, "ratio"},
    {"personal_device_pue", &ReferenceConstants::personal_device_pue, "ratio"},
    {"world_avg_ci", &ReferenceConstants::world_avg_ci, "gCO2e/kWh"},
};

}  // namespace detail

/// Every key must appear exactly once; unknown keys are rejected.
inline ReferenceConstants load_constants(std::istream& in) {
  ReferenceConstants out;
  std::map<std::string, bool> seen;
  for (const auto& row : csv::read_table(in, kConstantsHeader)) {
    const auto& key = row.cells[0];
    const auto* field = std::find_if(std::begin(detail::kConstantFields), std::end(detail::kConstantFields),
                                     [&](const auto& f) { return f.key == key; });
    if (field == std::end(detail::kConstantFields)) {
      throw DataError("malformed_row", row.line, key, "line " + std::to_string(row.line) + ": unknown constant '" + key + "'");
    }
    if (seen[key]) throw DataError("duplicate_name", row.line, key, "line " + std::to_string(row.line) + ": duplicate constant '" + key + "'");
    seen[key] = true;
    const double value = csv::require_double(row, 1, key);
    if (!(value > 0.0)) detail::invariant_violation(row.line, key, "must be > 0");
    out.*(field->member) = value;
  }
  for (const auto& f : detail::kConstantFields) {
    if (!seen[std::string(f.key)]) {
      throw DataError("missing_constant", 0, std::string(f.key), "missing constant '" + std::string(f.key) + "'");
    }
  }
  return out;
}

// Serialization back to the bundled CSV formats. Reloading the output yields
// an equal catalog.

inline void write_processors(std::ostream& out, const ProcessorCatalog& catalog) {
  out << kProcessorsHeader << '\n';
  for (const auto& e : catalog.entries()) {
    out << e.profile.name << ',' << to_string(e.profile.kind) << ',' << csv::format_number(e.profile.tdp_watts) << ','
        << e.profile.unit_count << ',' << e.source << '\n';
  }
}

inline void write_carbon_intensities(std::ostream& out, const CarbonIntensityCatalog& catalog) {
  out << kCarbonIntensityHeader << '\n';
  for (const auto& e : catalog.entries()) {
    out << e.region_code << ',' << e.region_name << ',' << csv::format_number(e.gco2e_per_kwh) << ',' << e.year << ','
        << e.source << '\n';
  }
}

inline void write_constants(std::ostream& out, const ReferenceConstants& constants) {
  out << kConstantsHeader << '\n';
  for (const auto& f : detail::kConstantFields) {
    out << f.key << ',' << csv::format_number(constants.*(f.member)) << ',' << f.unit << ",\n";
  }
}

inline const ProcessorProfile& lookup_processor(const ProcessorCatalog& catalog, std::string_view name) {
  if (const auto* entry = catalog.find(name)) return entry->profile;
  throw NotFound(std::string(name), detail::closest(name, catalog.names()), "processor", "processor");
}

inline const GridCarbonIntensity& lookup_ci(const CarbonIntensityCatalog& catalog, std::string_view region_code) {
  if (const auto* entry = catalog.find(region_code)) return *entry;
  throw NotFound(std::string(region_code), detail::closest(region_code, catalog.codes()), "region", "region_code");
}

// Checksum pinning.

inline std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

inline std::string crc32_hex(std::string_view bytes) {
  std::ostringstream os;
  os << std::hex << std::setw(8) << std::setfill('0') << crc32(bytes);
  return os.str();
}

struct ManifestEntry {
  std::string file;
  std::string crc32;
  std::size_t bytes = 0;
  std::string retrieved;
};

inline std::vector<ManifestEntry> load_manifest(std::istream& in) {
  std::vector<ManifestEntry> out;
  for (const auto& row : csv::read_table(in, kManifestHeader)) {
    out.push_back({row.cells[0], row.cells[1], static_cast<std::size_t>(csv::require_integer(row, 2, "bytes")),
                   row.cells[3]});
  }
  return out;
}

/// The three catalogs plus the version tag reported in every payload.
struct ReferenceData {
  ProcessorCatalog processors;
  CarbonIntensityCatalog carbon_intensity;
  ReferenceConstants constants;
  std::string data_version;
};

struct DataSources {
  std::string processors_csv;
  std::string carbon_intensity_csv;
  std::string constants_csv;
  std::string manifest_csv;
};

struct FileCheck {
  std::string file;
  bool loaded = false;
  bool checksum_ok = false;
  std::string message;
};

/// Version tag: dataset tag plus a CRC over the three tables.
inline std::string data_version_of(const DataSources& src) {
  return std::string(bundled::kDatasetTag) + "+" +
         crc32_hex(src.processors_csv + src.carbon_intensity_csv + src.constants_csv);
}

inline ReferenceData load_reference_data(const DataSources& src) {
  ReferenceData data;
  std::istringstream p(src.processors_csv), c(src.carbon_intensity_csv), k(src.constants_csv);
  data.processors = load_processors(p);
  data.carbon_intensity = load_carbon_intensities(c);
  data.constants = load_constants(k);
  data.data_version = data_version_of(src);
  return data;
}

inline DataSources bundled_sources() {
  return {std::string(bundled::kProcessorsCsv), std::string(bundled::kCarbonIntensityCsv),
          std::string(bundled::kConstantsCsv), std::string(bundled::kManifestCsv)};
}

inline const ReferenceData& bundled_reference_data() {
  static const ReferenceData data = load_reference_data(bundled_sources());
  return data;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return os.str();
}

/// Reads processors.csv, carbon_intensity.csv, constants.csv and (if present)
/// MANIFEST.csv from `dir`.
inline DataSources read_sources(const std::filesystem::path& dir) {
  DataSources src;
  src.processors_csv = read_file(dir / "processors.csv");
  src.carbon_intensity_csv = read_file(dir / "carbon_intensity.csv");
  src.constants_csv = read_file(dir / "constants.csv");
  if (std::filesystem::exists(dir / "MANIFEST.csv")) src.manifest_csv = read_file(dir / "MANIFEST.csv");
  return src;
}

/// Loads every table and compares each against its pinned checksum. Also
/// checks that the constants carry their contractual values.
inline std::vector<FileCheck> validate_sources(const DataSources& src) {
  std::vector<ManifestEntry> manifest;
  std::string manifest_error;
  try {
    std::istringstream m(src.manifest_csv);
    manifest = load_manifest(m);
  } catch (const Error& e) {
    manifest_error = e.what();
  }

  auto check = [&](const std::string& file, const std::string& bytes, auto&& loader) {
    FileCheck result{file, false, false, {}};
    try {
      std::istringstream in(bytes);
      loader(in);
      result.loaded = true;
    } catch (const Error& e) {
      result.message = e.what();
      return result;
    }
    const auto it = std::find_if(manifest.begin(), manifest.end(), [&](const auto& m) { return m.file == file; });
    if (it == manifest.end()) {
      result.message = manifest_error.empty() ? "no pinned checksum" : "manifest: " + manifest_error;
    } else if (it->crc32 != crc32_hex(bytes) || it->bytes != bytes.size()) {
      result.message = "checksum mismatch: pinned " + it->crc32 + " (" + std::to_string(it->bytes) + " bytes), actual " +
                       crc32_hex(bytes) + " (" + std::to_string(bytes.size()) + " bytes)";
    } else {
      result.checksum_ok = true;
      result.message = "crc32 " + it->crc32 + ", retrieved " + it->retrieved;
    }
    return result;
  };

  std::vector<FileCheck> out;
  out.push_back(check("processors.csv", src.processors_csv, [](std::istream& in) { load_processors(in); }));
  out.push_back(check("carbon_intensity.csv", src.carbon_intensity_csv, [](std::istream& in) { load_carbon_intensities(in); }));
  out.push_back(check("constants.csv", src.constants_csv, [](std::istream& in) {
    if (load_constants(in) != ReferenceConstants{}) {
      throw DataError("invariant_violation", 0, "constants.csv", "constants differ from their contractual values");
    }
  }));
  return out;
}

}  // namespace greenalgo
