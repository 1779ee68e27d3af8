#pragma once

// Sweeps of the flip frequency, peak location, and the parameter sets of the
// six reference figures (single-level A/B curves, enhancement curves, the
// g_res-vs-linewidth comparison, and two-level interference).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "tpaflip/analytic.hpp"
#include "tpaflip/errors.hpp"
#include "tpaflip/spectral_model.hpp"

namespace tpaflip {

/// Uniform grid of flip frequencies inside [0, b/2].
class ScanGrid {
 public:
  ScanGrid(double delta_min, double delta_max, std::size_t points)
      : min_(delta_min), max_(delta_max), points_(points) {
    if (!std::isfinite(delta_min) || !std::isfinite(delta_max) || !(delta_min >= 0.0) ||
        !(delta_max > delta_min))
      throw invalid_parameter("scan grid: need 0 <= delta_min < delta_max");
    if (points < 2) throw invalid_parameter("scan grid: at least 2 points are required");
  }

  /// Whole band [0, b/2].
  static ScanGrid full_band(double bandwidth, std::size_t points) { return {0.0, 0.5 * bandwidth, points}; }

  double delta_min() const noexcept { return min_; }
  double delta_max() const noexcept { return max_; }
  std::size_t points() const noexcept { return points_; }

  double operator[](std::size_t i) const noexcept {
    if (i + 1 == points_) return max_;
    return min_ + (max_ - min_) * static_cast<double>(i) / static_cast<double>(points_ - 1);
  }

  void check_within(double bandwidth) const {
    if (max_ > 0.5 * bandwidth)
      throw invalid_parameter("scan grid: delta_max " + std::to_string(max_) + " exceeds b/2 = " +
                              std::to_string(0.5 * bandwidth));
  }

 private:
  double min_;
  double max_;
  std::size_t points_;
};

struct ScanRow {
  double delta_s = 0.0;
  std::vector<LevelAmplitude> levels;
  complex amplitude{0.0, 0.0};
  double relative_rate = 0.0;
  std::optional<double> g;  // empty when the unflipped rate vanishes
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double bandwidth = 0.0;
  std::size_t level_count = 0;
  double baseline_rate = 0.0;
  bool baseline_degenerate = false;
};

/// Closed-form evaluation at every grid point. Rows are independent, so
/// `workers` > 1 splits them into contiguous blocks; output is identical.
inline ScanResult scan(const LevelStructure& levels, double bandwidth, const ScanGrid& grid,
                       unsigned workers = 1) {
  grid.check_within(bandwidth);
  const InputSpectrum base(bandwidth);
  const auto base_amps = level_amplitudes(levels, base);
  const auto base_rate = combine_levels(levels, base_amps);

  ScanResult result;
  result.bandwidth = bandwidth;
  result.level_count = levels.size();
  result.baseline_rate = base_rate.relative_rate;
  result.baseline_degenerate = is_degenerate(levels, base_amps, base_rate);
  result.rows.resize(grid.points());

  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      ScanRow& row = result.rows[i];
      row.delta_s = grid[i];
      const auto spec = InputSpectrum::single_flip(bandwidth, row.delta_s);
      row.levels = level_amplitudes(levels, spec);
      const auto rate = combine_levels(levels, row.levels);
      row.amplitude = rate.amplitude;
      row.relative_rate = rate.relative_rate;
      if (!result.baseline_degenerate) row.g = rate.relative_rate / result.baseline_rate;
    }
  };

  const std::size_t n = grid.points();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::min<std::size_t>(n, 64)));
  if (workers == 1) {
    fill(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t block = (n + workers - 1) / workers;
    for (std::size_t begin = 0; begin < n; begin += block) pool.emplace_back(fill, begin, std::min(n, begin + block));
  }
  return result;
}

struct PeakReport {
  double location = 0.0;
  double value = 0.0;
  double tolerance = 0.0;
  bool uses_enhancement = true;  // false: maximised the raw relative rate
  bool flat_landscape = false;
};

/// Maximise g (or the raw rate when g is undefined) over [lo, hi]: coarse
/// scan followed by golden-section refinement of the bracketing triple.
inline PeakReport find_peak(const LevelStructure& levels, double bandwidth, double lo, double hi,
                            std::size_t coarse_points = 512) {
  const ScanGrid grid(lo, hi, std::max<std::size_t>(coarse_points, 512));
  grid.check_within(bandwidth);

  const InputSpectrum base(bandwidth);
  const auto base_amps = level_amplitudes(levels, base);
  const auto base_rate = combine_levels(levels, base_amps);
  const bool use_g = !is_degenerate(levels, base_amps, base_rate);
  const double denom = use_g ? base_rate.relative_rate : 1.0;
  auto objective = [&](double delta) {
    return total_rate(levels, InputSpectrum::single_flip(bandwidth, delta)).relative_rate / denom;
  };

  std::vector<double> values(grid.points());
  for (std::size_t i = 0; i < grid.points(); ++i) values[i] = objective(grid[i]);
  const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  const double vmax = values[best];
  const double vmin = *std::min_element(values.begin(), values.end());

  PeakReport report;
  report.uses_enhancement = use_g;
  report.tolerance = 1e-6 * bandwidth;
  report.location = grid[best];
  report.value = vmax;
  report.flat_landscape = !(vmax > vmin * (1.0 + 1e-9));
  if (report.flat_landscape) return report;

  // golden section on [grid[best-1], grid[best+1]]
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.points() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > report.tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  const double x = fc >= fd ? c : d;
  const double fx = std::max(fc, fd);
  if (fx >= vmax) {
    report.location = x;
    report.value = fx;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Figure datasets

/// g_res against nu/gamma (the only figure not scanned over delta_s).
struct GresSeries {
  std::vector<double> ratio;
  std::vector<double> g_res;
};

struct FigureCurve {
  std::string key;    // file stem
  std::string label;
  std::string style;  // solid, dashed, dashdot, dotted
  std::optional<double> bandwidth;  // absent for the broadband limit
  std::vector<IntermediateLevel> levels;
  std::variant<ScanResult, GresSeries> data;
};

struct FigureDataset {
  int id = 0;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string normalization;  // empty: raw values
  std::vector<double> reference_lines;
  std::vector<FigureCurve> curves;
};

inline constexpr std::size_t figure_scan_points = 801;
inline constexpr std::size_t figure_gres_points = 200;

namespace detail {

inline FigureCurve scan_curve(std::string key, std::string label, std::string style,
                              std::vector<IntermediateLevel> levels, double bandwidth) {
  auto result = scan(LevelStructure(levels), bandwidth, ScanGrid::full_band(bandwidth, figure_scan_points));
  return {std::move(key), std::move(label), std::move(style), bandwidth, std::move(levels), std::move(result)};
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (i + 1 == n) ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

// single-level linewidth sweep shared by the first three figures; nu = 1, b = 4
inline std::vector<FigureCurve> linewidth_curves(const std::string& prefix) {
  struct Case {
    double divisor;
    const char* tag;
    const char* style;
  };
  const Case cases[] = {{20.0, "20", "solid"}, {10.0, "10", "dashed"}, {3.0, "3", "dashdot"}};
  std::vector<FigureCurve> out;
  for (const auto& c : cases)
    out.push_back(scan_curve(prefix + "_gamma_nu_over_" + c.tag, std::string("gamma = nu/") + c.tag, c.style,
                             {IntermediateLevel(1.0, 1.0 / c.divisor)}, 4.0));
  return out;
}

}  // namespace detail

/// Parameter sets and curves for figure 1..6; frequencies in units of nu (nu_1).
inline FigureDataset figure_dataset(int figure_id) {
  FigureDataset fig;
  fig.id = figure_id;
  switch (figure_id) {
    case 1:
      fig.title = "Resonant and off-resonant contributions A_m, B_m vs flip frequency (nu_m = b/4)";
      fig.x_label = "delta_s / nu_m";
      fig.y_label = "A_m, B_m";
      fig.curves = detail::linewidth_curves("fig1");
      break;
    case 2:
      fig.title = "Squared contributions A_0^2 and B_0^2 for a single level (b = 4 nu_0)";
      fig.x_label = "delta_s / nu_0";
      fig.y_label = "A_0^2 / 4pi^2, B_0^2 / 4pi^2";
      fig.normalization = "square_over_4pi2";
      fig.curves = detail::linewidth_curves("fig2");
      break;
    case 3:
      fig.title = "Enhancement factor g vs flip frequency (b = 4 nu_0)";
      fig.x_label = "delta_s / nu_0";
      fig.y_label = "g";
      fig.reference_lines = {1.0};
      fig.curves = detail::linewidth_curves("fig3");
      break;
    case 4: {
      fig.title = "Resonant enhancement g_res vs inverse linewidth nu_0/gamma_0";
      fig.x_label = "nu_0 / gamma_0";
      fig.y_label = "g_res";
      fig.reference_lines = {1.0};
      const auto ratios = detail::log_grid(1.0, 50.0, figure_gres_points);
      GresSeries broadband{ratios, {}};
      for (double r : ratios) broadband.g_res.push_back(g_res_broadband_derived(r));
      fig.curves.push_back({"fig4_broadband", "broadband limit", "solid", std::nullopt, {}, broadband});
      struct Case {
        double b;
        const char* tag;
        const char* style;
      };
      for (const Case& c : {Case{8.0, "8", "dashed"}, Case{6.0, "6", "dashdot"}, Case{4.0, "4", "dotted"}}) {
        GresSeries s{ratios, {}};
        for (double r : ratios) s.g_res.push_back(resonant_enhancement(IntermediateLevel(1.0, 1.0 / r), c.b));
        fig.curves.push_back({std::string("fig4_b_") + c.tag + "nu", std::string("b = ") + c.tag + " nu_0", c.style,
                              c.b, {}, std::move(s)});
      }
      break;
    }
    case 5:
      fig.title = "Two-level contributions for nu_2 = 3 nu_1, gamma = nu_1/20";
      fig.x_label = "delta_s / nu_1";
      fig.y_label = "A_m, B_m and their sums/differences";
      fig.curves.push_back(detail::scan_curve("fig5_levels", "levels nu_1, nu_2 = 3 nu_1", "solid",
                                              {IntermediateLevel(1.0, 0.05), IntermediateLevel(3.0, 0.05)}, 8.0));
      break;
    case 6:
      fig.title = "TPA rate for constructive and destructive two-level interference (gamma = nu_1/20)";
      fig.x_label = "delta_s / nu_1";
      fig.y_label = "relative rate";
      struct Panel {
        double nu2;
        const char* key;
        const char* tag;
      };
      for (const Panel& p : {Panel{3.0, "fig6a", "3"}, Panel{1.5, "fig6b", "1.5"}}) {
        const std::string suffix = std::string(", nu_2 = ") + p.tag + " nu_1";
        fig.curves.push_back(detail::scan_curve(std::string(p.key) + "_constructive", "constructive" + suffix, "solid",
                                                {IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(p.nu2, 0.05, 1.0)},
                                                8.0));
        fig.curves.push_back(detail::scan_curve(std::string(p.key) + "_destructive", "destructive" + suffix, "dashed",
                                                {IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(p.nu2, 0.05, -1.0)},
                                                8.0));
      }
      break;
    default:
      throw invalid_parameter("unknown figure id " + std::to_string(figure_id) + " (expected 1..6)");
  }
  return fig;
}

}  // namespace tpaflip
