// greenalgo: command-line front end to the carbon-footprint engine.
//
// Exit codes: 0 success, 2 validation error, 3 data error, 4 I/O error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "greenalgo/greenalgo.hpp"
#include "greenalgo/interface/http.hpp"

namespace ga = greenalgo;
namespace gi = greenalgo::interface;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

ga::ReferenceData load_data(const std::string& data_dir) {
  if (data_dir.empty()) return ga::bundled_reference_data();
  return ga::load_reference_data(ga::read_sources(data_dir));
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ga::IoError("cannot open " + path);
  return in;
}

gi::EstimateRequest read_request_file(const std::string& path, gi::RequestKind kind) {
  return gi::parse_request(gi::parse_key_values(ga::read_file(path)), kind);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ga::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ga::NotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ga::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ga::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ga::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate the carbon footprint of computational workloads"};
  app.require_subcommand(1);

  std::string format_name = "text";
  std::string data_dir;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"text", "markdown", "json"}));
    cmd->add_option("--data-dir", data_dir, "Directory with processors.csv, carbon_intensity.csv, constants.csv");
  };

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Footprint of a single workload");
  double runtime_hours = 0, tdp = 0, power_kw = 0, usage = 1, memory_gb = 0, pue = 1, psf = 1;
  long long cores = 0, units = 0;
  std::string processor, region, label;
  estimate_cmd->add_option("--runtime-hours", runtime_hours, "Wall-clock runtime in hours");
  estimate_cmd->add_option("--cores", cores, "Number of cores or GPUs");
  estimate_cmd->add_option("--processor", processor, "Processor name from the catalog");
  estimate_cmd->add_option("--tdp", tdp, "Processor TDP in W (with --units)");
  estimate_cmd->add_option("--units", units, "Cores/devices sharing the TDP (with --tdp)");
  estimate_cmd->add_option("--power-kw", power_kw, "Measured total power draw in kW");
  estimate_cmd->add_option("--usage", usage, "Core usage factor in [0, 1] (default 1)");
  estimate_cmd->add_option("--memory-gb", memory_gb, "Memory allocated in GB");
  estimate_cmd->add_option("--region", region, "Region code for carbon intensity (default WORLD)");
  estimate_cmd->add_option("--pue", pue, "Facility PUE (default world average)");
  estimate_cmd->add_option("--psf", psf, "Pragmatic scaling factor (default 1)");
  estimate_cmd->add_option("--label", label, "Label shown in the report");
  add_common(estimate_cmd);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Compare two scenario files");
  std::string scenario_a, scenario_b;
  compare_cmd->add_option("--scenario-a", scenario_a, "Scenario file A")->required();
  compare_cmd->add_option("--scenario-b", scenario_b, "Scenario file B")->required();
  add_common(compare_cmd);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Footprint across a strong-scaling curve");
  std::string base_file, curve_file;
  sweep_cmd->add_option("--base", base_file, "Base workload file")->required();
  sweep_cmd->add_option("--curve", curve_file, "CSV with header cores,runtime_hours")->required();
  add_common(sweep_cmd);

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Aggregate footprints from a jobs.csv export");
  std::string jobs_file, group_by = "user", default_region{ga::kWorldRegion};
  double default_pue = ga::ReferenceConstants{}.world_avg_pue;
  ingest_cmd->add_option("--jobs", jobs_file, "jobs.csv file")->required();
  ingest_cmd->add_option("--group-by", group_by, "Grouping key")
      ->check(CLI::IsMember({"user", "project", "region", "month"}));
  ingest_cmd->add_option("--default-pue", default_pue, "PUE for jobs without one");
  ingest_cmd->add_option("--default-region", default_region, "Region for jobs without one");
  add_common(ingest_cmd);

  // data validate
  auto* data_cmd = app.add_subcommand("data", "Reference data maintenance");
  data_cmd->require_subcommand(1);
  auto* validate_cmd = data_cmd->add_subcommand("validate", "Validate data files against their pinned checksums");
  validate_cmd->add_option("--data-dir", data_dir, "Data directory (default: bundled tables)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the JSON API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--data-dir", data_dir, "Data directory (default: bundled tables)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  return guarded([&]() -> int {
    const auto format = gi::parse_format(format_name);

    if (*estimate_cmd) {
      gi::json body = gi::json::object();
      auto set = [&](const char* flag, const char* key, const auto& value) {
        if (estimate_cmd->count(flag)) body[key] = value;
      };
      set("--label", "label", label);
      set("--runtime-hours", "runtime_hours", runtime_hours);
      set("--cores", "cores", cores);
      set("--processor", "processor", processor);
      set("--tdp", "tdp_watts", tdp);
      set("--units", "unit_count", units);
      set("--power-kw", "explicit_power_kw", power_kw);
      set("--usage", "usage_factor", usage);
      set("--memory-gb", "mem_gb", memory_gb);
      set("--region", "region_code", region);
      set("--pue", "pue", pue);
      set("--psf", "psf", psf);
      const auto request = gi::parse_request(body);
      const auto data = load_data(data_dir);
      std::cout << gi::render(gi::make_payload(request, data), format);
      return 0;
    }

    if (*compare_cmd) {
      const auto a = read_request_file(scenario_a, gi::RequestKind::full);
      const auto b = read_request_file(scenario_b, gi::RequestKind::full);
      const auto data = load_data(data_dir);
      std::cout << gi::render(gi::make_comparison(a, b, data), format);
      return 0;
    }

    if (*sweep_cmd) {
      const auto base = read_request_file(base_file, gi::RequestKind::sweep_base);
      auto in = open_input(curve_file);
      const auto curve = ga::load_scaling_curve(in);
      const auto data = load_data(data_dir);
      std::cout << gi::render(gi::make_sweep(base, curve, data), format);
      return 0;
    }

    if (*ingest_cmd) {
      auto in = open_input(jobs_file);
      const auto records = ga::parse_jobs(in);
      const auto data = load_data(data_dir);
      ga::ResolveDefaults defaults{default_pue, default_region};
      const auto jobs = ga::estimate_jobs(records, defaults, data);
      const auto groups = ga::aggregate(jobs, *ga::parse_group_key(group_by), data.constants);
      std::cout << gi::render(groups, format);
      return 0;
    }

    if (*validate_cmd) {
      const auto sources = data_dir.empty() ? ga::bundled_sources() : ga::read_sources(data_dir);
      bool ok = true;
      for (const auto& check : ga::validate_sources(sources)) {
        const bool pass = check.loaded && check.checksum_ok;
        ok = ok && pass;
        std::cout << (pass ? "ok    " : "FAIL  ") << check.file << ": " << check.message << "\n";
      }
      return ok ? 0 : kExitData;
    }

    if (*serve_cmd) {
      gi::Service service(load_data(data_dir));
      httplib::Server server;
      gi::mount(server, service);
      std::cerr << "listening on http://" << host << ":" << port << " (data " << service.data().data_version << ")\n";
      if (!server.listen(host, port)) throw ga::IoError("cannot listen on " + host + ":" + std::to_string(port));
      return 0;
    }
    return kExitValidation;
  });
}
