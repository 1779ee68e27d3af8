#pragma once

// Closed-form overlap amplitudes for Lorentzian levels against a phase-flipped
// top-hat input, and the rates and enhancement factors built from them.
//
// For one level the overlap of the resonant (real) part of the response with
// the unflipped band [-x, x] integrates to
//   T(x) = 2 atan((x + nu)/gamma) + 2 atan((x - nu)/gamma)
// and the dispersive (imaginary) part to
//   L(x) = ln( ((x + nu)^2 + gamma^2) / ((x - nu)^2 + gamma^2) ).
// A flip set f_1 < ... < f_K changes the sign of every segment inside each
// flip, so A = T(b/2) - 2 sum_j (-1)^(K-j) T(f_j) and likewise B with L.
// For one flip this is A = T(b/2) - 2 T(delta_s).

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "tpaflip/errors.hpp"
#include "tpaflip/spectral_model.hpp"

namespace tpaflip {

/// Dimensionless resonant (a) and off-resonant (b_off) overlap of one level.
struct LevelAmplitude {
  double a = 0.0;
  double b_off = 0.0;

  complex value() const noexcept { return {a, b_off}; }
};

/// Rate relative to P_gf / b, with amplitude = sum_m 2 C_m (A_m + i B_m).
struct RateResult {
  double relative_rate = 0.0;
  complex amplitude{0.0, 0.0};
};

namespace detail {

inline double resonant_primitive(const IntermediateLevel& level, double x) noexcept {
  const double g = level.gamma();
  return 2.0 * std::atan((x + level.nu()) / g) + 2.0 * std::atan((x - level.nu()) / g);
}

inline double dispersive_primitive(const IntermediateLevel& level, double x) noexcept {
  // ratio - 1 = 4 x nu / ((x - nu)^2 + gamma^2); log1p keeps small x accurate.
  const double dm = x - level.nu();
  return std::log1p(4.0 * x * level.nu() / (dm * dm + level.gamma() * level.gamma()));
}

template <class Primitive>
double flipped_overlap(const IntermediateLevel& level, const InputSpectrum& spec, Primitive primitive) {
  const auto flips = spec.flips();
  const std::size_t k = flips.size();
  double inner = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    // flip j (0-based) has k - 1 - j flips above it
    const double sign = ((k - 1 - j) % 2 == 0) ? 1.0 : -1.0;
    inner += sign * primitive(level, flips[j]);
  }
  return primitive(level, spec.half_width()) - 2.0 * inner;
}

}  // namespace detail

/// Resonant contribution A_m.
inline double amplitude_A(const IntermediateLevel& level, const InputSpectrum& spec) {
  return detail::flipped_overlap(level, spec, detail::resonant_primitive);
}

/// Off-resonant contribution B_m.
inline double amplitude_B(const IntermediateLevel& level, const InputSpectrum& spec) {
  return detail::flipped_overlap(level, spec, detail::dispersive_primitive);
}

inline LevelAmplitude level_amplitude(const IntermediateLevel& level, const InputSpectrum& spec) {
  return {amplitude_A(level, spec), amplitude_B(level, spec)};
}

inline std::vector<LevelAmplitude> level_amplitudes(const LevelStructure& levels,
                                                    const InputSpectrum& spec) {
  std::vector<LevelAmplitude> out;
  out.reserve(levels.size());
  for (const auto& level : levels) out.push_back(level_amplitude(level, spec));
  return out;
}

/// Coherent sum over levels given precomputed per-level amplitudes. The sum
/// and its modulus are accumulated in extended precision, so the rate is the
/// correctly rounded |amplitude|^2 and does not depend on a global coupling phase
/// beyond the rounding of the couplings themselves.
inline RateResult combine_levels(const LevelStructure& levels, std::span<const LevelAmplitude> amps) {
  using wide = std::complex<long double>;
  wide sum{0.0L, 0.0L};
  for (std::size_t m = 0; m < levels.size(); ++m) {
    const complex c = levels[m].coupling();
    sum += 2.0L * wide(c.real(), c.imag()) * wide(amps[m].a, amps[m].b_off);
  }
  RateResult r;
  r.amplitude = {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
  r.relative_rate = static_cast<double>(std::norm(sum));
  return r;
}

/// P_TPA * b / P_gf for the given input.
inline RateResult total_rate(const LevelStructure& levels, const InputSpectrum& spec) {
  const auto amps = level_amplitudes(levels, spec);
  return combine_levels(levels, amps);
}

/// True when the coherent sum has cancelled down to rounding noise.
inline bool is_degenerate(const LevelStructure& levels, std::span<const LevelAmplitude> amps,
                          const RateResult& rate) {
  double scale = 0.0;
  for (std::size_t m = 0; m < levels.size(); ++m) scale += 2.0 * std::abs(levels[m].coupling() * amps[m].value());
  return std::abs(rate.amplitude) <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

/// Unflipped rate, or degenerate_baseline when it vanishes.
inline double baseline_rate(const LevelStructure& levels, double bandwidth) {
  const InputSpectrum base(bandwidth);
  const auto amps = level_amplitudes(levels, base);
  const auto rate = combine_levels(levels, amps);
  if (is_degenerate(levels, amps, rate))
    throw degenerate_baseline("enhancement undefined: unflipped TPA rate vanishes (destructive interference)");
  return rate.relative_rate;
}

/// g = P(flips) / P(no flips).
inline double enhancement(const LevelStructure& levels, const InputSpectrum& spec) {
  const double base = baseline_rate(levels, spec.bandwidth());
  return total_rate(levels, spec).relative_rate / base;
}

/// g(delta_s) for a single flip.
inline double enhancement(const LevelStructure& levels, double bandwidth, double delta_s) {
  return enhancement(levels, InputSpectrum::single_flip(bandwidth, delta_s));
}

/// Broadband resonant enhancement in the printed closed form
/// (1 - (2/pi) atan(2r))^2 + ((2/pi) ln(1 + 2r))^2, r = nu/gamma.
inline double g_res_broadband_exact(double ratio) {
  if (!(ratio > 0.0)) throw invalid_parameter("g_res: nu/gamma must be > 0");
  using std::numbers::pi;
  // 1 - (2/pi) atan(2r) == (2/pi) atan(1/(2r)) for r > 0
  const double a = (2.0 / pi) * std::atan(0.5 / ratio);
  const double b = (2.0 / pi) * std::log1p(2.0 * ratio);
  return a * a + b * b;
}

/// Limit of the finite-b closed forms at delta_s = nu as b -> infinity:
/// (1 - (2/pi) atan(2r))^2 + ((1/pi) ln(1 + 4 r^2))^2.
inline double g_res_broadband_derived(double ratio) {
  if (!(ratio > 0.0)) throw invalid_parameter("g_res: nu/gamma must be > 0");
  using std::numbers::pi;
  const double a = (2.0 / pi) * std::atan(0.5 / ratio);
  const double b = std::log1p(4.0 * ratio * ratio) / pi;
  return a * a + b * b;
}

/// Narrow-line approximation ((2/pi) ln(2r))^2.
inline double g_res_broadband_approx(double ratio) {
  if (!(ratio > 0.0)) throw invalid_parameter("g_res: nu/gamma must be > 0");
  const double v = (2.0 / std::numbers::pi) * std::log(2.0 * ratio);
  return v * v;
}

/// (B(|delta_s| = nu) / A(delta_s = 0))^2 at finite bandwidth.
inline double resonant_ratio(const IntermediateLevel& level, double bandwidth) {
  const double a0 = amplitude_A(level, InputSpectrum(bandwidth));
  if (a0 == 0.0) throw degenerate_baseline("resonant ratio undefined: A(0) = 0");
  const double b_res = amplitude_B(level, InputSpectrum::single_flip(bandwidth, level.nu()));
  return (b_res / a0) * (b_res / a0);
}

/// g_res = g(delta_s = nu) for a single level at finite bandwidth.
inline double resonant_enhancement(const IntermediateLevel& level, double bandwidth) {
  return enhancement(LevelStructure{level}, bandwidth, level.nu());
}

}  // namespace tpaflip
