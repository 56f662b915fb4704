#pragma once

// Test-only reference computations, written independently of the library.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// Single-expression carbon footprint, grams CO2e, including PSF.
inline double long_form_footprint(double t, double n_c, double p_c, double u_c, double n_m, double p_m, double pue,
                                  double ci, double psf) {
  return t * (n_c * p_c * u_c + n_m * p_m) * pue * ci * 0.001 * psf;
}

// Plain recursive Levenshtein distance with memo table.
inline int levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  auto go = [&](auto&& self, std::size_t i, std::size_t j) -> int {
    if (i == 0) return static_cast<int>(j);
    if (j == 0) return static_cast<int>(i);
    int& m = memo[i][j];
    if (m >= 0) return m;
    m = std::min({self(self, i - 1, j) + 1, self(self, i, j - 1) + 1,
                  self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return m;
  };
  return go(go, a.size(), b.size());
}

inline bool rel_close(double a, double b, double rel) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 || std::abs(a - b) <= rel * scale;
}

}  // namespace oracle
