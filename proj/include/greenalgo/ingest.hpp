#pragma once

// Job accounting ingestion. Input is the generic jobs.csv format:
//
//   job_id,user,project,start,runtime_hours,cores,cpu_model,usage_factor,mem_gb,region_code,pue
//
// Empty cells mean "absent" and are filled from defaults when a record is
// resolved into a workload. Timestamps are UTC, `YYYY-MM-DDTHH:MM:SSZ`.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "greenalgo/csv.hpp"
#include "greenalgo/errors.hpp"
#include "greenalgo/model.hpp"
#include "greenalgo/reference_data.hpp"

namespace greenalgo {

inline constexpr std::string_view kJobsHeader =
    "job_id,user,project,start,runtime_hours,cores,cpu_model,usage_factor,mem_gb,region_code,pue";

using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SSZ`.
inline std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z') {
    return std::nullopt;
  }
  auto field = [&](std::size_t pos, std::size_t len) { return csv::parse_integer(text.substr(pos, len)); };
  const auto y = field(0, 4), mo = field(5, 2), d = field(8, 2), h = field(11, 2), mi = field(14, 2), s = field(17, 2);
  if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{static_cast<int>(*y)}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *s > 59 || *h < 0 || *mi < 0 || *s < 0) return std::nullopt;
  return sys_days{ymd} + hours{*h} + minutes{*mi} + seconds{*s};
}

inline std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(ts);
  const year_month_day ymd{days};
  const hh_mm_ss hms{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

/// `YYYY-MM` of the UTC timestamp.
inline std::string month_key(Timestamp ts) { return format_timestamp(ts).substr(0, 7); }

struct JobRecord {
  std::string job_id;
  std::string user;
  std::string project;
  Timestamp start{};
  double runtime_hours = 0.0;
  int cores = 0;
  std::string cpu_model;
  std::optional<double> usage_factor;
  double mem_gb = 0.0;
  std::optional<std::string> region_code;
  std::optional<double> pue;

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

namespace detail {

[[noreturn]] inline void job_error(std::string code, std::size_t line, std::string field, const std::string& what) {
  throw DataError(std::move(code), line, field, "line " + std::to_string(line) + ": " + field + " " + what);
}

inline double non_negative(const csv::Row& row, std::size_t column, const char* field) {
  const double v = csv::require_double(row, column, field);
  if (v < 0.0) job_error("negative_value", row.line, field, "must not be negative");
  return v;
}

}  // namespace detail

inline std::vector<JobRecord> parse_jobs(std::istream& in) {
  std::vector<JobRecord> out;
  for (const auto& row : csv::read_table(in, kJobsHeader)) {
    const auto& c = row.cells;
    JobRecord r;
    r.job_id = c[0];
    if (r.job_id.empty()) detail::job_error("malformed_row", row.line, "job_id", "is empty");
    r.user = c[1];
    r.project = c[2];
    const auto start = parse_timestamp(c[3]);
    if (!start) detail::job_error("malformed_row", row.line, "start", "is not a UTC timestamp YYYY-MM-DDTHH:MM:SSZ");
    r.start = *start;
    r.runtime_hours = detail::non_negative(row, 4, "runtime_hours");
    const auto cores = csv::require_integer(row, 5, "cores");
    if (cores < 0) detail::job_error("negative_value", row.line, "cores", "must not be negative");
    if (cores > std::numeric_limits<int>::max()) detail::job_error("malformed_row", row.line, "cores", "is too large");
    r.cores = static_cast<int>(cores);
    r.cpu_model = c[6];
    if (!c[7].empty()) {
      const double u = csv::require_double(row, 7, "usage_factor");
      if (u < 0.0 || u > 1.0) detail::job_error("usage_out_of_range", row.line, "usage_factor", "must be within [0, 1]");
      r.usage_factor = u;
    }
    r.mem_gb = c[8].empty() ? 0.0 : detail::non_negative(row, 8, "mem_gb");
    if (!c[9].empty()) r.region_code = c[9];
    if (!c[10].empty()) {
      const double pue = csv::require_double(row, 10, "pue");
      if (pue < 1.0) detail::job_error("invariant_violation", row.line, "pue", "must be >= 1");
      r.pue = pue;
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_jobs(std::ostream& out, std::span<const JobRecord> records) {
  out << kJobsHeader << '\n';
  for (const auto& r : records) {
    out << r.job_id << ',' << r.user << ',' << r.project << ',' << format_timestamp(r.start) << ','
        << csv::format_number(r.runtime_hours) << ',' << r.cores << ',' << r.cpu_model << ','
        << (r.usage_factor ? csv::format_number(*r.usage_factor) : "") << ',' << csv::format_number(r.mem_gb) << ','
        << r.region_code.value_or("") << ',' << (r.pue ? csv::format_number(*r.pue) : "") << '\n';
  }
}

struct ResolveDefaults {
  double pue = ReferenceConstants{}.world_avg_pue;
  std::string region_code{kWorldRegion};
};

struct ResolvedJob {
  Workload workload;
  Facility facility;
  GridCarbonIntensity ci;
};

/// Turns a record into model inputs. Absent usage is 1.0, absent PUE and
/// region come from `defaults`. A job with cores but no known cpu_model
/// cannot be resolved.
inline ResolvedJob resolve(const JobRecord& record, const ResolveDefaults& defaults, const ReferenceData& data) {
  ResolvedJob out;
  auto& w = out.workload;
  w.runtime_hours = record.runtime_hours;
  w.core_count = record.cores;
  w.usage_factor = record.usage_factor.value_or(1.0);
  w.memory = {record.mem_gb, data.constants.memory_w_per_gb};
  if (!record.cpu_model.empty()) {
    w.per_core_power_w = per_unit_power(lookup_processor(data.processors, record.cpu_model));
  } else if (record.cores > 0) {
    throw ValidationError("missing_field", "cpu_model", "job " + record.job_id + ": cores > 0 but no cpu_model");
  }
  out.facility = {"", record.pue.value_or(defaults.pue)};
  out.ci = lookup_ci(data.carbon_intensity, record.region_code.value_or(defaults.region_code));
  validate(w);
  validate(out.facility);
  return out;
}

enum class GroupKey { user, project, region, month };

inline std::optional<GroupKey> parse_group_key(std::string_view text) {
  if (text == "user") return GroupKey::user;
  if (text == "project") return GroupKey::project;
  if (text == "region") return GroupKey::region;
  if (text == "month") return GroupKey::month;
  return std::nullopt;
}

struct JobEstimate {
  JobRecord record;
  FootprintEstimate estimate;
};

struct GroupSummary {
  std::string group_key;
  std::size_t job_count = 0;
  double total_kwh = 0.0;
  double total_gco2e = 0.0;
  EquivalenceSet equivalences;
};

/// Groups by `key` and sums energy and scaled emissions. The region key is
/// the region actually used for the estimate. Sorted by descending emissions,
/// then by key.
inline std::vector<GroupSummary> aggregate(std::span<const JobEstimate> jobs, GroupKey key,
                                           const ReferenceConstants& constants = {}) {
  std::map<std::string, GroupSummary> groups;
  for (const auto& job : jobs) {
    std::string k;
    switch (key) {
      case GroupKey::user: k = job.record.user; break;
      case GroupKey::project: k = job.record.project; break;
      case GroupKey::region: k = job.estimate.ci_used.region_code; break;
      case GroupKey::month: k = month_key(job.record.start); break;
    }
    auto& g = groups[k];
    g.group_key = k;
    ++g.job_count;
    g.total_kwh += job.estimate.energy.total_kwh;
    g.total_gco2e += job.estimate.gco2e_scaled;
  }
  std::vector<GroupSummary> out;
  out.reserve(groups.size());
  for (auto& [k, g] : groups) {
    g.equivalences = equivalences(g.total_gco2e, constants);
    out.push_back(std::move(g));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GroupSummary& a, const GroupSummary& b) { return a.total_gco2e > b.total_gco2e; });
  return out;
}

/// Resolves and estimates every record.
inline std::vector<JobEstimate> estimate_jobs(std::span<const JobRecord> records, const ResolveDefaults& defaults,
                                              const ReferenceData& data) {
  std::vector<JobEstimate> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    const auto resolved = resolve(r, defaults, data);
    out.push_back({r, estimate(resolved.workload, resolved.facility, resolved.ci, data.constants)});
  }
  return out;
}

}  // namespace greenalgo
