#pragma once

// Subcommand implementations behind tools/tpa_flip.cpp. Each returns a process
// exit code and writes only to the streams/paths it is given.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpaflip/analytic.hpp"
#include "tpaflip/cli/config.hpp"
#include "tpaflip/cli/csv.hpp"
#include "tpaflip/oracle.hpp"
#include "tpaflip/scan.hpp"
#include "tpaflip/verification.hpp"

namespace tpaflip::cli {

enum exit_code : int { ok = 0, config_failure = 2, tolerance_failure = 3, io_failure = 4 };

enum class Method { analytic, quadrature };

inline constexpr double verify_tolerance = 1e-8;

namespace detail {

inline std::string flips_field(const InputSpectrum& spec) {
  const auto f = spec.flips();
  if (f.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? ";" : "") + format_number(f[i]);
  return s;
}

}  // namespace detail

/// Single evaluation; one CSV row (with header) on `out`.
inline int cmd_rate(const RunConfig& cfg, Method method, std::ostream& out, std::ostream& err) {
  if (!cfg.has_model()) {
    err << "error: rate needs \"levels\" and \"bandwidth\" in the config\n";
    return config_failure;
  }
  const auto levels = cfg.level_structure();
  const auto spec = cfg.input_spectrum();

  std::vector<LevelAmplitude> amps;
  RateResult rate;
  std::optional<double> g;
  if (method == Method::analytic) {
    amps = level_amplitudes(levels, spec);
    rate = combine_levels(levels, amps);
    const auto base_amps = level_amplitudes(levels, spec.baseline());
    const auto base = combine_levels(levels, base_amps);
    if (!is_degenerate(levels, base_amps, base)) g = rate.relative_rate / base.relative_rate;
  } else {
    try {
      for (const auto& l : levels) amps.push_back(level_amplitude_via_quadrature(l, spec, cfg.quadrature));
      const auto amp = amplitude_via_quadrature(levels, spec, cfg.quadrature);
      rate.amplitude = amp.value;
      rate.relative_rate = std::norm(amp.value);
      const auto base = amplitude_via_quadrature(levels, spec.baseline(), cfg.quadrature);
      double scale = 0.0;
      for (const auto& l : levels)
        scale += 2.0 * std::abs(l.coupling() * level_amplitude_via_quadrature(l, spec.baseline(), cfg.quadrature).value());
      if (std::abs(base.value) > base.error_estimate + 64.0 * std::numeric_limits<double>::epsilon() * scale)
        g = rate.relative_rate / std::norm(base.value);
    } catch (const tolerance_not_reached& e) {
      err << "error: " << e.what() << '\n';
      return tolerance_failure;
    }
  }
  out << scan_header(levels.size()) << '\n';
  write_row(out, detail::flips_field(spec), amps, rate.amplitude, rate.relative_rate, g);
  return ok;
}

/// Sweep over the config's scan grid (or `grid_override`) as CSV on `out`.
inline int cmd_scan(RunConfig cfg, const std::optional<GridConfig>& grid_override, std::ostream& out,
                    std::ostream& err, unsigned workers = 1) {
  if (grid_override) cfg.scan = grid_override;
  try {
    cfg.validate();
    if (!cfg.has_model()) throw config_error("scan needs \"levels\" and \"bandwidth\" in the config");
    const auto grid = cfg.scan_grid();
    const auto result = scan(cfg.level_structure(), cfg.scaled_bandwidth(), grid, workers);
    write_scan_csv(out, result);
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return config_failure;
  }
  return ok;
}

/// Writes one CSV per curve plus manifest.json into `out_dir`.
inline int cmd_figures(std::span<const int> ids, const std::filesystem::path& out_dir, std::ostream& err) {
  std::vector<FigureDataset> figures;
  try {
    for (int id : ids) figures.push_back(figure_dataset(id));
  } catch (const invalid_parameter& e) {
    err << "error: " << e.what() << '\n';
    return config_failure;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create " << out_dir << ": " << ec.message() << '\n';
    return io_failure;
  }

  nlohmann::json manifest{{"version", 1}, {"figures", nlohmann::json::array()}};
  for (const auto& fig : figures) {
    nlohmann::json jf{{"id", fig.id},
                      {"title", fig.title},
                      {"x_label", fig.x_label},
                      {"y_label", fig.y_label},
                      {"normalization", fig.normalization},
                      {"reference_lines", fig.reference_lines},
                      {"curves", nlohmann::json::array()}};
    for (const auto& curve : fig.curves) {
      const std::string file = curve.key + ".csv";
      std::ofstream csv(out_dir / file, std::ios::binary);
      if (!csv) {
        err << "error: cannot write " << (out_dir / file) << '\n';
        return io_failure;
      }
      nlohmann::json jc{{"file", file}, {"label", curve.label}, {"style", curve.style}};
      if (const auto* s = std::get_if<ScanResult>(&curve.data)) {
        write_scan_csv(csv, *s);
        jc["kind"] = "scan";
        jc["columns"] = scan_header(s->level_count);
      } else {
        write_gres_csv(csv, std::get<GresSeries>(curve.data));
        jc["kind"] = "g_res";
        jc["columns"] = "nu_over_gamma,g_res";
      }
      jc["bandwidth"] = curve.bandwidth ? nlohmann::json(*curve.bandwidth) : nlohmann::json(nullptr);
      jc["levels"] = nlohmann::json::array();
      for (const auto& l : curve.levels)
        jc["levels"].push_back({{"nu", l.nu()}, {"gamma", l.gamma()}, {"c_re", l.coupling().real()}, {"c_im", l.coupling().imag()}});
      if (!csv.good()) {
        err << "error: failed writing " << (out_dir / file) << '\n';
        return io_failure;
      }
      jf["curves"].push_back(std::move(jc));
    }
    manifest["figures"].push_back(std::move(jf));
  }
  std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
  if (!mf.good()) {
    err << "error: cannot write manifest in " << out_dir << '\n';
    return io_failure;
  }
  return ok;
}

struct VerifyOptions {
  QuadratureSettings quadrature;
  double closed_form_perturbation = 0.0;  // negative-control hook
};

struct VerifyReport {
  std::size_t cases = 0;
  std::size_t widened = 0;   // outside 1e-8 but within the oracle's own error estimate
  std::size_t failures = 0;
  std::size_t oracle_failures = 0;
  double max_deviation = 0.0;
};

inline VerifyReport run_verification(std::span<const VerificationCase> cases, const VerifyOptions& opts) {
  VerifyReport rep;
  for (const auto& c : cases) {
    ++rep.cases;
    CaseComparison cmp;
    try {
      cmp = compare_case(c, opts.quadrature, opts.closed_form_perturbation);
    } catch (const tolerance_not_reached&) {
      ++rep.oracle_failures;
      continue;
    }
    rep.max_deviation = std::max(rep.max_deviation, cmp.deviation);
    if (cmp.deviation <= verify_tolerance) continue;
    const double scale = std::max(1.0, std::abs(cmp.analytic));
    if (std::abs(cmp.analytic - cmp.quadrature) <= cmp.quadrature_error + verify_tolerance * scale)
      ++rep.widened;
    else
      ++rep.failures;
  }
  return rep;
}

/// Oracle-equivalence report. Uses the config's case (its flips, or every
/// point of its scan grid) when it defines levels, else the built-in grid.
inline int cmd_verify(const std::optional<RunConfig>& cfg, const VerifyOptions& base_opts, std::ostream& out) {
  VerifyOptions opts = base_opts;
  std::vector<VerificationCase> cases;
  if (cfg) opts.quadrature = cfg->quadrature;
  if (cfg && cfg->has_model()) {
    const auto levels = cfg->level_structure();
    if (cfg->scan) {
      const auto grid = cfg->scan_grid();
      for (std::size_t i = 0; i < grid.points(); ++i)
        cases.push_back({levels, InputSpectrum::single_flip(cfg->scaled_bandwidth(), grid[i])});
    } else {
      cases.push_back({levels, cfg->input_spectrum()});
    }
  } else {
    cases = verification_cases();
  }

  const auto rep = run_verification(cases, opts);
  const bool pass = rep.failures == 0 && rep.oracle_failures == 0;
  out << "cases: " << rep.cases << '\n'
      << "max relative deviation: " << format_number(rep.max_deviation) << '\n'
      << "tolerance: " << format_number(verify_tolerance) << '\n'
      << "widened (within oracle error estimate): " << rep.widened << '\n'
      << "oracle tolerance failures: " << rep.oracle_failures << '\n'
      << "failures: " << rep.failures << '\n'
      << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? ok : tolerance_failure;
}

}  // namespace tpaflip::cli
