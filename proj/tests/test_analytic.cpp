// Closed forms against frozen high-precision values and against the
// quadrature oracle. Reference numbers were produced at 50 digits by direct
// integration of the Lorentzian response (independent of these formulas).

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "tpaflip/analytic.hpp"
#include "tpaflip/oracle.hpp"

using namespace tpaflip;
using Catch::Approx;
using std::numbers::pi;

namespace {

double ulps(double a, double b) {
  if (a == b) return 0.0;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) / (std::nextafter(scale, INFINITY) - scale);
}

}  // namespace

TEST_CASE("A and B match direct integration at b = 4 nu") {
  const IntermediateLevel level(1.0, 0.05);
  struct Ref {
    double delta, a, b;
  };
  for (const Ref& r : {Ref{0.0, 6.1499382683078194571, 2.1950054363423060501},
                       Ref{1.0, -0.033267864396086381808, -12.561761989651123322},
                       Ref{0.3, 6.0184787692514100800, -0.27392965200626692285}}) {
    const auto spec = InputSpectrum::single_flip(4.0, r.delta);
    CHECK(amplitude_A(level, spec) == Approx(r.a).epsilon(1e-13).margin(1e-14));
    CHECK(amplitude_B(level, spec) == Approx(r.b).epsilon(1e-13).margin(1e-14));
  }
}

TEST_CASE("Broadband limits of A and B") {
  // gamma -> 0: A(0) -> 2 pi
  CHECK(amplitude_A(IntermediateLevel(1.0, 1e-6), InputSpectrum(1e8)) == Approx(2.0 * pi).margin(1e-3));

  const IntermediateLevel level(1.0, 0.05);
  const auto flat = InputSpectrum(1e8);
  const auto res = InputSpectrum::single_flip(1e8, 1.0);
  // 2 pi - 4 atan(40) to leading order; exact finite-b value frozen
  CHECK(amplitude_A(level, res) == Approx(0.099979170475680638007).epsilon(1e-9));
  CHECK(std::abs(amplitude_B(level, flat)) < 1e-6);
  CHECK(amplitude_B(level, flat) == Approx(8.0000000000000000106e-8).epsilon(1e-6));
  CHECK(amplitude_B(level, res) == Approx(-14.756767345993429372).epsilon(1e-12));
  CHECK(amplitude_B(level, res) == Approx(-2.0 * std::log(1.0 + 1600.0)).epsilon(1e-6));
  CHECK(amplitude_B(level, res) == Approx(-4.0 * std::log(40.0)).epsilon(1e-3));
}

TEST_CASE("Flip at b/2 reverses the global sign") {
  const IntermediateLevel level(1.0, 0.05);
  const auto base = level_amplitude(level, InputSpectrum(4.0));
  const auto edge = level_amplitude(level, InputSpectrum::single_flip(4.0, 2.0));
  CHECK(edge.a == -base.a);
  CHECK(edge.b_off == -base.b_off);
}

TEST_CASE("Single-level rate equals 4|C|^2 (A^2 + B^2)") {
  const IntermediateLevel level(1.0, 0.05, {0.6, -0.3});
  const auto spec = InputSpectrum::single_flip(4.0, 0.8);
  const auto amp = level_amplitude(level, spec);
  const auto rate = total_rate(LevelStructure{level}, spec);
  CHECK(rate.relative_rate == Approx(4.0 * std::norm(level.coupling()) * (amp.a * amp.a + amp.b_off * amp.b_off)).epsilon(1e-14));
  CHECK(ulps(rate.relative_rate, std::norm(rate.amplitude)) <= 2.0);
}

TEST_CASE("Broadband unflipped rate approaches (4 pi)^2") {
  const auto rate = total_rate(LevelStructure{IntermediateLevel(1.0, 0.05)}, InputSpectrum(1e8));
  CHECK(rate.relative_rate == Approx(157.91367021636783374).epsilon(1e-12));
  CHECK(rate.relative_rate == Approx(16.0 * pi * pi).epsilon(1e-8));
}

TEST_CASE("Identical levels with opposite couplings cancel exactly") {
  const LevelStructure pair{IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(1.0, 0.05, -1.0)};
  for (double d : {0.0, 0.4, 1.0, 1.7}) CHECK(total_rate(pair, InputSpectrum::single_flip(4.0, d)).relative_rate == 0.0);
  CHECK_THROWS_AS(enhancement(pair, 4.0, 1.0), degenerate_baseline);
}

TEST_CASE("Broadband destructive interference suppresses the unflipped rate") {
  const double b = 1e8;
  const LevelStructure con{IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(3.0, 0.05, 1.0)};
  const LevelStructure des{IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(3.0, 0.05, -1.0)};
  const double rc = total_rate(con, InputSpectrum(b)).relative_rate;
  const double rd = total_rate(des, InputSpectrum(b)).relative_rate;
  CHECK(rd <= 1e-3 * rc);
}

TEST_CASE("Enhancement identities") {
  const LevelStructure levels{IntermediateLevel(1.0, 0.05, {1.0, 0.3}), IntermediateLevel(1.7, 0.2, -0.4)};
  CHECK(enhancement(levels, 4.0, 0.0) == 1.0);
  CHECK(std::abs(enhancement(levels, 4.0, 2.0) - 1.0) <= 1e-12);
  CHECK(enhancement(levels, 4.0, -0.7) == enhancement(levels, 4.0, 0.7));
}

TEST_CASE("Broad linewidth gives no enhancement anywhere inside the band") {
  const LevelStructure one{IntermediateLevel(1.0, 1.0 / 3.0)};
  for (int i = 1; i < 2000; ++i) {
    const double d = 2.0 * i / 2000.0;
    INFO("delta_s = " << d);
    CHECK(enhancement(one, 4.0, d) < 1.0);
  }
}

TEST_CASE("Enhancement peaks near the resonance for narrow lines") {
  for (double divisor : {20.0, 10.0}) {
    const double gamma = 1.0 / divisor;
    const LevelStructure one{IntermediateLevel(1.0, gamma)};
    double best = 0.0, at = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double d = 2.0 * i / 2000.0;
      const double g = enhancement(one, 4.0, d);
      if (g > best) best = g, at = d;
    }
    CHECK(best > 1.0);
    CHECK(std::abs(at - 1.0) <= gamma);
    // g < 1 on a punctured neighborhood of 0
    for (int i = 1; i <= 50; ++i) CHECK(enhancement(one, 4.0, 0.2 * i / 50.0) < 1.0);
  }
}

TEST_CASE("Broadband g_res formulas") {
  const double r_four = std::exp(pi) / 2.0;
  const double r_one = std::exp(pi / 2.0) / 2.0;
  CHECK(g_res_broadband_approx(r_four) == Approx(4.0).epsilon(1e-14));
  CHECK(g_res_broadband_approx(r_one) == Approx(1.0).epsilon(1e-14));
  CHECK(g_res_broadband_approx(0.5) == 0.0);
  CHECK(g_res_broadband_approx(20.0) == Approx(5.5150464290066040941).epsilon(1e-13));
  CHECK(g_res_broadband_exact(20.0) == Approx(5.5893799483157993793).epsilon(1e-13));
  CHECK(g_res_broadband_derived(20.0) == Approx(5.5162337782290684918).epsilon(1e-13));
  CHECK(std::abs(g_res_broadband_exact(20.0) / g_res_broadband_approx(20.0) - 1.0) < 0.25);

  // printed and derived broadband forms: ~3.2% apart at nu/gamma = 10, under 1% from 25 on
  for (double r = 10.0; r <= 1000.0; r *= 1.1) {
    INFO("nu/gamma = " << r);
    const double dev = std::abs(g_res_broadband_exact(r) / g_res_broadband_derived(r) - 1.0);
    CHECK(dev < 0.033);
    if (r >= 25.0) CHECK(dev < 0.01);
  }
  // the log approximation is the large-ratio asymptote of both
  CHECK(g_res_broadband_exact(1e6) / g_res_broadband_approx(1e6) == Approx(1.0).epsilon(1e-5));
  CHECK(g_res_broadband_derived(1e6) / g_res_broadband_approx(1e6) == Approx(1.0).epsilon(1e-5));

  CHECK_THROWS_AS(g_res_broadband_exact(0.0), invalid_parameter);
}

TEST_CASE("Derived broadband g_res is the large-b limit of the finite-b closed forms") {
  for (double r : {3.0, 11.57, 40.0}) {
    const double finite = resonant_enhancement(IntermediateLevel(1.0, 1.0 / r), 1e9);
    CHECK(finite == Approx(g_res_broadband_derived(r)).epsilon(1e-6));
  }
}

TEST_CASE("Resonant ratio") {
  const IntermediateLevel level(1.0, 0.05);
  const double broadband = resonant_ratio(level, 1e8);
  CHECK(broadband == Approx(5.5159805279785545387).epsilon(1e-10));
  CHECK(broadband == Approx(std::pow(2.0 / pi * std::log(40.0), 2)).epsilon(0.02));
  CHECK(resonant_ratio(level, 4.0) < broadband);
  CHECK(resonant_ratio(IntermediateLevel(1.0, 1e3), 1e8) < 1e-3);
}

TEST_CASE("Multi-flip closed form matches the oracle") {
  const IntermediateLevel level(1.2, 0.08, {0.7, 0.4});
  const InputSpectrum spec(6.0, {0.5, 1.2, 2.1});
  const auto q = level_amplitude_via_quadrature(level, spec);
  const auto a = level_amplitude(level, spec);
  CHECK(a.a == Approx(q.a).epsilon(1e-9).margin(1e-10));
  CHECK(a.b_off == Approx(q.b_off).epsilon(1e-9).margin(1e-10));
}

TEST_CASE("Randomized equivalence with the oracle, |A| bound and evenness") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    const double b = 1.0 + 9.0 * u(rng);
    const IntermediateLevel level(0.6 * b * u(rng), b * std::pow(10.0, -4.0 + 3.3 * u(rng)));
    const double d = 0.5 * b * u(rng);
    const auto spec = InputSpectrum::single_flip(b, d);
    const auto amp = level_amplitude(level, spec);
    const auto q = level_amplitude_via_quadrature(level, spec);
    const double scale = std::max(1.0, std::abs(amp.value()));
    CHECK(std::abs(amp.value() - q.value()) <= 1e-8 * scale);
    CHECK(std::abs(amp.a) < 2.0 * pi);

    const auto mirrored = level_amplitude(level, InputSpectrum::single_flip(b, -d));
    CHECK(mirrored.a == amp.a);
    CHECK(mirrored.b_off == amp.b_off);
  }
}

TEST_CASE("Scale invariance of A, B and g") {
  const LevelStructure levels{IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(2.3, 0.3, {0.2, -0.5})};
  for (double lambda : {1e-3, 1e3, 7.25}) {
    for (double d : {0.0, 0.35, 0.99, 1.6, 3.1}) {
      const auto spec = InputSpectrum::single_flip(8.0, d);
      const auto scaled_levels = levels.scaled(lambda);
      const auto scaled_spec = spec.scaled(lambda);
      for (std::size_t m = 0; m < levels.size(); ++m) {
        const auto x = level_amplitude(levels[m], spec);
        const auto y = level_amplitude(scaled_levels[m], scaled_spec);
        const double mag = std::abs(x.value());
        CHECK(std::abs(x.a - y.a) <= 1e-12 * mag);
        CHECK(std::abs(x.b_off - y.b_off) <= 1e-12 * mag);
      }
      const double r1 = total_rate(levels, spec).relative_rate;
      const double r2 = total_rate(scaled_levels, scaled_spec).relative_rate;
      CHECK(std::abs(r1 - r2) <= 1e-12 * r1);
      const double g1 = enhancement(levels, spec), g2 = enhancement(scaled_levels, scaled_spec);
      CHECK(std::abs(g1 - g2) <= 1e-12 * g1);
    }
  }
}

TEST_CASE("Global phase of real two-level couplings leaves the rate unchanged to 4 ulp") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const complex phase = std::polar(1.0, 2.0 * pi * u(rng));
    const auto spec = InputSpectrum::single_flip(8.0, 4.0 * u(rng));
    for (double c2 : {1.0, -1.0}) {
      const LevelStructure a{IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(3.0, 0.05, c2)};
      const LevelStructure b{IntermediateLevel(1.0, 0.05, phase), IntermediateLevel(3.0, 0.05, c2 * phase)};
      worst = std::max(worst, ulps(total_rate(a, spec).relative_rate, total_rate(b, spec).relative_rate));
    }
    const LevelStructure one{IntermediateLevel(1.0, 0.1, 0.8)};
    const LevelStructure one_rot{IntermediateLevel(1.0, 0.1, 0.8 * phase)};
    worst = std::max(worst, ulps(total_rate(one, spec).relative_rate, total_rate(one_rot, spec).relative_rate));
  }
  INFO("worst deviation in ulp: " << worst);
  CHECK(worst <= 4.0);
}

TEST_CASE("Global phase with arbitrary complex couplings: error bounded by the cancellation ratio") {
  // The rotated couplings are themselves rounded, so the invariance holds to a
  // few ulp times sum_m |2 C_m z_m| / |sum_m 2 C_m z_m| (squared for the rate).
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<IntermediateLevel> levels;
    const int n = 1 + i % 3;
    for (int k = 0; k < n; ++k)
      levels.emplace_back(3.0 * u(rng), 0.01 + 0.5 * u(rng), complex{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0});
    const auto spec = InputSpectrum::single_flip(8.0, 4.0 * u(rng));
    const complex phase = std::polar(1.0, 2.0 * pi * u(rng));
    std::vector<IntermediateLevel> rotated;
    double spread = 0.0;
    for (const auto& l : levels) {
      rotated.push_back(l.with_coupling(l.coupling() * phase));
      spread += 2.0 * std::abs(l.coupling() * level_amplitude(l, spec).value());
    }
    const auto a = total_rate(LevelStructure(levels), spec);
    const auto b = total_rate(LevelStructure(rotated), spec);
    const double kappa = spread / std::abs(a.amplitude);
    CHECK(std::abs(a.relative_rate - b.relative_rate) <=
          8.0 * std::numeric_limits<double>::epsilon() * a.relative_rate * kappa * kappa);
    if (n == 1) CHECK(ulps(a.relative_rate, b.relative_rate) <= 4.0);
  }
}
