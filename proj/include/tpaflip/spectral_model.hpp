#pragma once

// Domain types of the phase-flip TPA model and pointwise evaluation of the
// two frequency-difference wavefunctions: the Lorentzian material response
// Gamma(w) and the phase-flipped top-hat input Phi(w).
//
// All frequencies share one arbitrary unit. The difference coordinate w is
// measured from half the two-photon transition frequency.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tpaflip/errors.hpp"

namespace tpaflip {

using complex = std::complex<double>;

/// Frequency difference w_- of the two photons, relative to w_gf / 2.
struct FrequencyDifference {
  double value = 0.0;

  constexpr FrequencyDifference() = default;
  constexpr explicit FrequencyDifference(double w) : value(w) {}
};

/// One Lorentz-broadened intermediate resonance.
class IntermediateLevel {
 public:
  IntermediateLevel(double nu, double gamma, complex coupling = {1.0, 0.0})
      : nu_(nu), gamma_(gamma), coupling_(coupling) {
    if (!std::isfinite(nu)) throw invalid_parameter("intermediate level: nu must be finite");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw invalid_parameter("intermediate level: gamma must be a finite value > 0, got " +
                              std::to_string(gamma));
    if (!std::isfinite(coupling.real()) || !std::isfinite(coupling.imag()))
      throw invalid_parameter("intermediate level: coupling must be finite");
  }

  double nu() const noexcept { return nu_; }
  double gamma() const noexcept { return gamma_; }
  complex coupling() const noexcept { return coupling_; }

  IntermediateLevel with_coupling(complex c) const { return {nu_, gamma_, c}; }

  /// Same level with every frequency multiplied by `factor` (> 0).
  IntermediateLevel scaled(double factor) const { return {nu_ * factor, gamma_ * factor, coupling_}; }

  friend bool operator==(const IntermediateLevel&, const IntermediateLevel&) = default;

 private:
  double nu_;
  double gamma_;
  complex coupling_;
};

/// Nonempty set of intermediate levels whose contributions add coherently.
class LevelStructure {
 public:
  LevelStructure(std::vector<IntermediateLevel> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw invalid_parameter("level structure: at least one level is required");
  }
  LevelStructure(std::initializer_list<IntermediateLevel> levels)
      : LevelStructure(std::vector<IntermediateLevel>(levels)) {}

  std::span<const IntermediateLevel> levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  const IntermediateLevel& operator[](std::size_t m) const { return levels_[m]; }

  auto begin() const noexcept { return levels_.begin(); }
  auto end() const noexcept { return levels_.end(); }

  LevelStructure scaled(double factor) const {
    std::vector<IntermediateLevel> out;
    out.reserve(levels_.size());
    for (const auto& l : levels_) out.push_back(l.scaled(factor));
    return {std::move(out)};
  }

 private:
  std::vector<IntermediateLevel> levels_;
};

/// Broadband top-hat input of width b with symmetric phase flips at +-f_i.
///
/// Flip frequencies must lie in [0, b/2]. A flip at 0 only touches the single
/// point w = 0 and is dropped; a flip at b/2 flips the whole band, which is the
/// unflipped state with opposite global phase.
class InputSpectrum {
 public:
  explicit InputSpectrum(double bandwidth, std::vector<double> flips = {})
      : bandwidth_(bandwidth), flips_(std::move(flips)) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
      throw invalid_parameter("input spectrum: bandwidth must be a finite value > 0, got " +
                              std::to_string(bandwidth));
    for (double f : flips_) {
      if (!std::isfinite(f) || f < 0.0 || f > 0.5 * bandwidth)
        throw invalid_parameter("input spectrum: flip frequency " + std::to_string(f) +
                                " outside [0, b/2] for b = " + std::to_string(bandwidth));
    }
    std::sort(flips_.begin(), flips_.end());
    if (std::adjacent_find(flips_.begin(), flips_.end()) != flips_.end())
      throw invalid_parameter("input spectrum: duplicate flip frequency");
    std::erase(flips_, 0.0);
  }

  /// A single flip at |delta_s| (0 means unflipped).
  static InputSpectrum single_flip(double bandwidth, double delta_s) {
    return InputSpectrum(bandwidth, std::vector<double>{std::abs(delta_s)});
  }

  double bandwidth() const noexcept { return bandwidth_; }
  double half_width() const noexcept { return 0.5 * bandwidth_; }
  std::span<const double> flips() const noexcept { return flips_; }
  bool unflipped() const noexcept { return flips_.empty(); }

  /// Same input without any flips.
  InputSpectrum baseline() const { return InputSpectrum(bandwidth_); }

  InputSpectrum scaled(double factor) const {
    std::vector<double> f(flips_);
    for (double& x : f) x *= factor;
    return InputSpectrum(bandwidth_ * factor, std::move(f));
  }

  /// Sign of Phi at |w| inside the band: (-1)^k, k = number of flips >= |w|.
  int sign_at(double abs_w) const noexcept {
    auto k = flips_.end() - std::lower_bound(flips_.begin(), flips_.end(), abs_w);
    return (k % 2 == 0) ? 1 : -1;
  }

 private:
  double bandwidth_;
  std::vector<double> flips_;
};

namespace detail {

// 1 / (gamma - i x)
inline complex lorentz_line(double gamma, double x) noexcept {
  const double d = gamma * gamma + x * x;
  return {gamma / d, x / d};
}

}  // namespace detail

/// Material response of a single level, without the 2 C_m prefactor.
/// Negating nu conjugates the result: the dispersive part reverses sign.
inline complex level_response(const IntermediateLevel& level, FrequencyDifference omega) noexcept {
  const double w = std::abs(omega.value);
  return detail::lorentz_line(level.gamma(), level.nu() + w) +
         detail::lorentz_line(level.gamma(), level.nu() - w);
}

/// Gamma(w) = sum_m 2 C_m (1/(g_m - i(nu_m + w)) + 1/(g_m - i(nu_m - w))).
inline complex eval_gamma(const LevelStructure& levels, FrequencyDifference omega) noexcept {
  complex sum{0.0, 0.0};
  for (const auto& level : levels) sum += 2.0 * level.coupling() * level_response(level, omega);
  return sum;
}

/// Phi(w): +-1/sqrt(b) inside the band, 0 for |w| >= b/2.
inline double eval_phi(const InputSpectrum& spec, FrequencyDifference omega) noexcept {
  const double w = std::abs(omega.value);
  if (w >= spec.half_width()) return 0.0;
  return spec.sign_at(w) / std::sqrt(spec.bandwidth());
}

}  // namespace tpaflip
