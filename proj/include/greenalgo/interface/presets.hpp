#pragma once

// Named case studies with known published footprints. Each preset is a
// complete estimate request.

#include <string>
#include <string_view>
#include <vector>

#include "greenalgo/interface/request.hpp"

namespace greenalgo::interface {

struct Preset {
  std::string name;
  std::string description;
  json request;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    std::vector<Preset> p;
    p.push_back({"geant4-dna",
                 "Geant4-DNA whole-genome irradiation: 3 weeks on 12 Xeon cores, 10 GB, 11 energy levels",
                 {{"label", "Geant4-DNA"},
                  {"runtime_hours", 504.0},
                  {"cores", 12},
                  {"processor", "Xeon E5-2680 v3"},
                  {"usage_factor", 1.0},
                  {"mem_gb", 10.0},
                  {"region_code", "WORLD"},
                  {"pue", 1.67},
                  {"psf", 11.0}}});
    p.push_back({"icon",
                 "ICON 13 km forecast day: 8 min on 575 Broadwell nodes, German grid, 180 forecast days per day",
                 {{"label", "ICON (DWD)"},
                  {"runtime_hours", 8.0 / 60.0},
                  {"cores", 20700},
                  {"processor", "Xeon E5-2695 v4"},
                  {"mem_gb", 36800.0},
                  {"region_code", "DE"},
                  {"pue", 1.67},
                  {"psf", 180.0}}});
    p.push_back({"ifs-reading",
                 "IFS 9 km forecast day at Reading (UK): 8 min on 128 Broadwell nodes, 180 forecast days per day",
                 {{"label", "IFS Reading"},
                  {"runtime_hours", 8.0 / 60.0},
                  {"cores", 4608},
                  {"processor", "Xeon E5-2695 v4"},
                  {"mem_gb", 8192.0},
                  {"region_code", "GB"},
                  {"pue", 1.45},
                  {"psf", 180.0}}});
    p.push_back({"ifs-bologna",
                 "IFS after relocation to Bologna (Italy): same workload, PUE 1.27",
                 {{"label", "IFS Bologna"},
                  {"runtime_hours", 8.0 / 60.0},
                  {"cores", 4608},
                  {"processor", "Xeon E5-2695 v4"},
                  {"mem_gb", 8192.0},
                  {"region_code", "IT"},
                  {"pue", 1.27},
                  {"psf", 180.0}}});
    p.push_back({"bert",
                 "BERT training: 79 h on 64 V100 GPUs at 62.7% usage, 100 hyper-parameter runs",
                 {{"label", "BERT"},
                  {"runtime_hours", 79.0},
                  {"cores", 64},
                  {"processor", "Tesla V100"},
                  {"usage_factor", 0.627},
                  {"mem_gb", 0.0},
                  {"region_code", "WORLD"},
                  {"pue", 1.67},
                  {"psf", 100.0}}});
    p.push_back({"meena",
                 "Meena training: 30 days on a TPU-v3 pod drawing 288 kW, memory ignored",
                 {{"label", "Meena"},
                  {"runtime_hours", 720.0},
                  {"explicit_power_kw", 288.0},
                  {"region_code", "WORLD"},
                  {"pue", 1.67},
                  {"psf", 1.0}}});
    return p;
  }();
  return all;
}

inline const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace greenalgo::interface
