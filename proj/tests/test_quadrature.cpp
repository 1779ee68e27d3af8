#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "tpaflip/quadrature.hpp"

using namespace tpaflip;
using Catch::Approx;

TEST_CASE("Kronrod and Gauss weights integrate constants") {
  double k = gk21::kronrod_weights[10];
  for (int i = 0; i < 10; ++i) k += 2.0 * gk21::kronrod_weights[i];
  const double g = 2.0 * std::accumulate(gk21::gauss_weights.begin(), gk21::gauss_weights.end(), 0.0);
  CHECK(k == Approx(2.0).epsilon(1e-15));
  CHECK(g == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("K21 is exact through degree 31, G10 through degree 19") {
  for (int degree = 0; degree <= 31; ++degree) {
    auto f = [degree](double x) { return std::pow(x, degree) + std::pow(x, degree / 2); };
    const auto e = gk21::apply<double>(f, 0.0, 1.0);
    const double exact = 1.0 / (degree + 1) + 1.0 / (degree / 2 + 1);
    CHECK(e.kronrod == Approx(exact).epsilon(1e-14));
    if (degree <= 19) CHECK(e.gauss == Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("Adaptive integration of a sharp Lorentzian") {
  const double g = 1e-4;
  auto f = [g](double x) { return g / (g * g + x * x); };
  const auto r = integrate_adaptive<double>(f, {-1.0, 0.0, 1.0}, QuadratureSettings{});
  CHECK(r.value == Approx(2.0 * std::atan(1.0 / g)).epsilon(1e-10));
  CHECK(r.error_estimate <= 1e-10 * std::abs(r.value));

  // without a breakpoint at the peak it still converges
  const auto blind = integrate_adaptive<double>(f, {-1.0, 0.3, 1.0}, QuadratureSettings{});
  CHECK(blind.value == Approx(r.value).epsilon(1e-10));
}

TEST_CASE("Complex-valued integrands") {
  using C = std::complex<double>;
  auto f = [](double x) { return C(1.0, 0.0) / C(0.5, -x); };
  // int_{-2}^{3} dx / (0.5 - i x) = i [ln(0.5 - 3i) - ln(0.5 + 2i)]
  const C exact = C(0.0, 1.0) * (std::log(C(0.5, -3.0)) - std::log(C(0.5, 2.0)));
  const auto r = integrate_adaptive<C>(f, {-2.0, 3.0}, QuadratureSettings{});
  CHECK(std::abs(r.value - exact) <= 1e-10 * std::abs(exact));
}

TEST_CASE("Unsorted and duplicate breakpoints are normalized") {
  auto f = [](double x) { return std::exp(x); };
  const auto r = integrate_adaptive<double>(f, {1.0, 0.0, 0.5, 0.5, 1.0}, QuadratureSettings{});
  CHECK(r.value == Approx(std::numbers::e - 1.0).epsilon(1e-13));
}

TEST_CASE("Exhausted budget reports the achieved estimate") {
  auto f = [](double x) { return 1e-3 / (1e-6 + x * x); };
  QuadratureSettings s;
  s.max_subdivisions = 3;
  try {
    (void)integrate_adaptive<double>(f, {-1.0, 0.3, 1.0}, s);
    FAIL("expected tolerance_not_reached");
  } catch (const tolerance_not_reached& e) {
    CHECK(e.error_estimate() > e.requested());
  }
}

TEST_CASE("Settings are validated") {
  auto f = [](double x) { return x; };
  QuadratureSettings s;
  s.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate_adaptive<double>(f, {0.0, 1.0}, s), invalid_parameter);
  s = {};
  s.abs_tol = -1.0;
  CHECK_THROWS_AS(integrate_adaptive<double>(f, {0.0, 1.0}, s), invalid_parameter);
  s = {};
  s.max_subdivisions = 0;
  CHECK_THROWS_AS(integrate_adaptive<double>(f, {0.0, 1.0}, s), invalid_parameter);
}

TEST_CASE("Repeated runs are bit-identical") {
  auto f = [](double x) { return std::sin(40.0 * x) / (1.0 + x * x); };
  const auto a = integrate_adaptive<double>(f, {-3.0, 3.0}, QuadratureSettings{});
  const auto b = integrate_adaptive<double>(f, {-3.0, 3.0}, QuadratureSettings{});
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
}
