#pragma once

// Randomized comparison of the closed forms against the quadrature oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tpaflip/analytic.hpp"
#include "tpaflip/oracle.hpp"

namespace tpaflip {

struct VerificationCase {
  LevelStructure levels;
  InputSpectrum spec;
};

/// nu/b in [0, 0.6], gamma/b log-uniform in [1e-4, 0.2], delta_s in [0, b/2],
/// 1-3 levels with complex couplings. Deterministic for a given seed.
inline std::vector<VerificationCase> verification_cases(std::size_t count = 200, std::uint64_t seed = 20220415) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> level_count(1, 3);
  const double log_gmin = std::log(1e-4), log_gmax = std::log(0.2);

  std::vector<VerificationCase> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double b = 0.5 * std::pow(40.0, unit(rng));
    std::vector<IntermediateLevel> levels;
    const int m = level_count(rng);
    for (int k = 0; k < m; ++k) {
      const double nu = 0.6 * b * unit(rng);
      const double gamma = b * std::exp(log_gmin + (log_gmax - log_gmin) * unit(rng));
      const complex c{2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0};
      levels.emplace_back(nu, gamma, c);
    }
    const double delta = 0.5 * b * unit(rng);
    out.push_back({LevelStructure(std::move(levels)), InputSpectrum::single_flip(b, delta)});
  }
  return out;
}

struct CaseComparison {
  complex analytic;
  complex quadrature;
  double quadrature_error = 0.0;  // oracle's own estimate, amplitude units
  double deviation = 0.0;         // |analytic - quadrature| / max(1, |analytic|)
};

inline CaseComparison compare_case(const VerificationCase& c, const QuadratureSettings& settings,
                                   double analytic_perturbation = 0.0) {
  CaseComparison r;
  r.analytic = total_rate(c.levels, c.spec).amplitude * (1.0 + analytic_perturbation);
  const auto q = amplitude_via_quadrature(c.levels, c.spec, settings);
  r.quadrature = q.value;
  r.quadrature_error = q.error_estimate;
  r.deviation = std::abs(r.analytic - r.quadrature) / std::max(1.0, std::abs(r.analytic));
  return r;
}

}  // namespace tpaflip
