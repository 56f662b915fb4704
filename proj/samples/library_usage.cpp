// Estimating a workload directly through the library.

#include <iostream>

#include "greenalgo/greenalgo.hpp"

int main() {
  const auto& data = greenalgo::bundled_reference_data();

  greenalgo::Workload job;
  job.runtime_hours = 504.0;
  job.core_count = 12;
  job.per_core_power_w = greenalgo::per_unit_power(greenalgo::lookup_processor(data.processors, "Xeon E5-2680 v3"));
  job.memory.size_gb = 10.0;
  job.psf = 11.0;

  const greenalgo::Facility facility{"shared cluster", data.constants.world_avg_pue};
  const auto& ci = data.carbon_intensity.world_average();

  const auto result = greenalgo::estimate(job, facility, ci, data.constants);
  std::cout << "per run: " << greenalgo::interface::format_grouped(result.gco2e_single) << " gCO2e\n"
            << "total:   " << greenalgo::interface::format_grouped(result.gco2e_scaled) << " gCO2e\n"
            << "car:     " << greenalgo::interface::format_grouped(result.equivalences.car_km_eu) << " km\n";
}
