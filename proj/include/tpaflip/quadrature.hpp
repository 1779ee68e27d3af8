#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) integration over a set of
// panels. The interval is first split at caller-supplied breakpoints, then the
// panel with the largest |K21 - G10| estimate is bisected until the summed
// estimate meets the tolerance or the panel budget runs out.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "tpaflip/errors.hpp"

namespace tpaflip {

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_subdivisions = 1'000'000;

  void validate() const {
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) throw invalid_parameter("quadrature: rel_tol must be > 0");
    if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol)) throw invalid_parameter("quadrature: abs_tol must be >= 0");
    if (max_subdivisions < 1) throw invalid_parameter("quadrature: max_subdivisions must be >= 1");
  }

  friend bool operator==(const QuadratureSettings&, const QuadratureSettings&) = default;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  std::size_t panels = 0;
};

namespace gk21 {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd entries are
// the 10-point Gauss nodes.
inline constexpr std::array<double, 11> nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208091755040, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct PanelEstimate {
  T kronrod{};
  T gauss{};
  double abs_integral = 0.0;  // integral of |f|, for the roundoff floor
};

template <class T, class F>
PanelEstimate<T> apply(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  PanelEstimate<T> e;
  const T fc = f(center);
  e.kronrod = kronrod_weights[10] * fc;
  e.abs_integral = kronrod_weights[10] * std::abs(fc);
  for (std::size_t i = 0; i < 10; ++i) {
    const double dx = half * nodes[i];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    e.kronrod += kronrod_weights[i] * (f1 + f2);
    e.abs_integral += kronrod_weights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) e.gauss += gauss_weights[i / 2] * (f1 + f2);
  }
  e.kronrod *= half;
  e.gauss *= half;
  e.abs_integral *= std::abs(half);
  return e;
}

}  // namespace gk21

/// Integrate f over [breakpoints.front(), breakpoints.back()], with mandatory
/// panel edges at every breakpoint. Breakpoints need not be sorted or unique.
/// Throws tolerance_not_reached when the budget is exhausted.
template <class T, class F>
QuadratureResult<T> integrate_adaptive(F&& f, std::vector<double> breakpoints, const QuadratureSettings& settings) {
  settings.validate();
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  if (breakpoints.size() < 2) return {};

  struct Panel {
    double lo, hi;
    T value;
    double error;
    double abs_integral;
  };
  auto make_panel = [&f](double lo, double hi) {
    const auto e = gk21::apply<T>(f, lo, hi);
    return Panel{lo, hi, e.kronrod, std::abs(e.kronrod - e.gauss), e.abs_integral};
  };
  auto by_error = [](const Panel& a, const Panel& b) {
    if (a.error != b.error) return a.error < b.error;
    return a.lo > b.lo;  // deterministic tie-break
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(by_error)> queue(by_error);

  T total{};
  double total_error = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Panel p = make_panel(breakpoints[i], breakpoints[i + 1]);
    total += p.value;
    total_error += p.error;
    total_abs += p.abs_integral;
    queue.push(std::move(p));
  }

  auto tolerance = [&] {
    return std::max({settings.abs_tol, settings.rel_tol * std::abs(total),
                     50.0 * std::numeric_limits<double>::epsilon() * total_abs});
  };
  // Running sums drift; recompute them from the panels in a fixed order.
  auto resum = [&] {
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
      panels.push_back(queue.top());
      queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    total = T{};
    total_error = 0.0;
    total_abs = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      total_error += p.error;
      total_abs += p.abs_integral;
    }
    for (auto& p : panels) queue.push(std::move(p));
  };

  std::size_t iteration = 0;
  for (;;) {
    if (total_error <= tolerance()) {
      resum();
      if (total_error <= tolerance()) break;
    }
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const bool splittable = mid > worst.lo && mid < worst.hi;
    if (queue.size() >= settings.max_subdivisions || !splittable) {
      resum();
      throw tolerance_not_reached("adaptive quadrature: tolerance not reached after " +
                                      std::to_string(queue.size()) + " panels (error estimate " +
                                      std::to_string(total_error) + ", requested " +
                                      std::to_string(tolerance()) + ")",
                                  total_error, tolerance());
    }
    queue.pop();
    Panel left = make_panel(worst.lo, mid);
    Panel right = make_panel(mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_integral + right.abs_integral - worst.abs_integral;
    queue.push(std::move(left));
    queue.push(std::move(right));
    if (++iteration % 256 == 0) resum();
  }

  return {total, total_error, queue.size()};
}

}  // namespace tpaflip
