#pragma once

// Direct evaluation of the overlap integral  I = int Gamma(w) Phi(w) dw  over
// the band, independent of the closed forms in analytic.hpp. Two routes:
//
//  * numerical: adaptive Gauss-Kronrod on panels split at 0, +-flips and
//    every in-band resonance +-nu_m, so each panel sees a smooth integrand;
//  * semi_analytic: complex-log antiderivatives of each Lorentz term summed
//    over the constant-sign segments of Phi. Used to cross-check the
//    numerical route when gamma/b is too small for comfortable quadrature.
//
// sqrt(b) * I equals sum_m 2 C_m (A_m + i B_m).

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "tpaflip/analytic.hpp"
#include "tpaflip/quadrature.hpp"
#include "tpaflip/spectral_model.hpp"

namespace tpaflip {

enum class OracleMode { numerical, semi_analytic };

/// Overlap of the response with the input. `extra_breakpoints` are added to
/// the mandatory panel edges (values outside the band are ignored).
inline QuadratureResult<complex> overlap_integral(const LevelStructure& levels, const InputSpectrum& spec,
                                                  const QuadratureSettings& settings = {},
                                                  OracleMode mode = OracleMode::numerical,
                                                  std::span<const double> extra_breakpoints = {}) {
  const double half = spec.half_width();
  const double norm = 1.0 / std::sqrt(spec.bandwidth());

  if (mode == OracleMode::semi_analytic) {
    // segment edges on [0, b/2]
    std::vector<double> edges{0.0};
    for (double f : spec.flips())
      if (f < half) edges.push_back(f);
    edges.push_back(half);

    constexpr complex i{0.0, 1.0};
    complex total{0.0, 0.0};
    double magnitude = 0.0;
    for (const auto& level : levels) {
      const double g = level.gamma();
      const double nu = level.nu();
      auto primitive = [&](double w) {
        return i * std::log(complex{g, -(nu + w)}) - i * std::log(complex{g, -(nu - w)});
      };
      complex level_sum{0.0, 0.0};
      for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double lo = edges[s], hi = edges[s + 1];
        const double sign = spec.sign_at(0.5 * (lo + hi));
        const complex pos = primitive(hi) - primitive(lo);
        const complex neg = primitive(-lo) - primitive(-hi);
        level_sum += sign * (pos + neg);
        magnitude += std::abs(pos) + std::abs(neg);
      }
      total += 2.0 * level.coupling() * level_sum;
    }
    const double err = 64.0 * std::numeric_limits<double>::epsilon() * magnitude * norm;
    return {total * norm, err, 2 * (edges.size() - 1)};
  }

  std::vector<double> breakpoints{-half, 0.0, half};
  for (double f : spec.flips()) {
    breakpoints.push_back(f);
    breakpoints.push_back(-f);
  }
  for (const auto& level : levels) {
    const double nu = std::abs(level.nu());
    if (nu < half) {
      breakpoints.push_back(nu);
      breakpoints.push_back(-nu);
    }
  }
  for (double x : extra_breakpoints)
    if (x > -half && x < half) breakpoints.push_back(x);

  auto integrand = [&](double w) -> complex {
    const FrequencyDifference omega(w);
    return eval_gamma(levels, omega) * eval_phi(spec, omega);
  };
  return integrate_adaptive<complex>(integrand, std::move(breakpoints), settings);
}

/// sqrt(b) * overlap, i.e. the dimensionless amplitude sum_m 2 C_m (A_m + i B_m).
inline QuadratureResult<complex> amplitude_via_quadrature(const LevelStructure& levels, const InputSpectrum& spec,
                                                          const QuadratureSettings& settings = {},
                                                          OracleMode mode = OracleMode::numerical) {
  auto r = overlap_integral(levels, spec, settings, mode);
  const double root_b = std::sqrt(spec.bandwidth());
  r.value *= root_b;
  r.error_estimate *= root_b;
  return r;
}

/// |overlap|^2 * b, the oracle counterpart of total_rate().relative_rate.
inline QuadratureResult<double> rate_via_quadrature(const LevelStructure& levels, const InputSpectrum& spec,
                                                    const QuadratureSettings& settings = {},
                                                    OracleMode mode = OracleMode::numerical) {
  const auto amp = amplitude_via_quadrature(levels, spec, settings, mode);
  const double mag = std::abs(amp.value);
  return {mag * mag, 2.0 * mag * amp.error_estimate + amp.error_estimate * amp.error_estimate, amp.panels};
}

/// A_m + i B_m for one level obtained from the oracle (coupling set to 1).
inline LevelAmplitude level_amplitude_via_quadrature(const IntermediateLevel& level, const InputSpectrum& spec,
                                                     const QuadratureSettings& settings = {},
                                                     OracleMode mode = OracleMode::numerical) {
  const auto amp = amplitude_via_quadrature(LevelStructure{level.with_coupling(1.0)}, spec, settings, mode);
  return {0.5 * amp.value.real(), 0.5 * amp.value.imag()};
}

}  // namespace tpaflip
