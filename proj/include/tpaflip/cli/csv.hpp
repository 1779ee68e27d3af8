#pragma once

// CSV output: LF line endings, '.' decimal separator, shortest round-trip
// decimal for every number, empty field for an undefined enhancement.

#include <charconv>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "tpaflip/scan.hpp"

namespace tpaflip::cli {

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) return "nan";
  return {buf, res.ptr};
}

inline std::string scan_header(std::size_t level_count) {
  std::string h = "delta_s";
  for (std::size_t m = 1; m <= level_count; ++m) h += ",A_" + std::to_string(m) + ",B_" + std::to_string(m);
  h += ",amp_re,amp_im,rate_rel,g";
  return h;
}

/// One data row; `delta_field` is preformatted so multi-flip inputs can list all flips.
inline void write_row(std::ostream& out, const std::string& delta_field, std::span<const LevelAmplitude> levels,
                      complex amplitude, double rate, std::optional<double> g) {
  out << delta_field;
  for (const auto& l : levels) out << ',' << format_number(l.a) << ',' << format_number(l.b_off);
  out << ',' << format_number(amplitude.real()) << ',' << format_number(amplitude.imag()) << ','
      << format_number(rate) << ',';
  if (g) out << format_number(*g);
  out << '\n';
}

inline void write_scan_csv(std::ostream& out, const ScanResult& result) {
  out << scan_header(result.level_count) << '\n';
  for (const auto& row : result.rows)
    write_row(out, format_number(row.delta_s), row.levels, row.amplitude, row.relative_rate, row.g);
}

inline void write_gres_csv(std::ostream& out, const GresSeries& series) {
  out << "nu_over_gamma,g_res\n";
  for (std::size_t i = 0; i < series.ratio.size(); ++i)
    out << format_number(series.ratio[i]) << ',' << format_number(series.g_res[i]) << '\n';
}

}  // namespace tpaflip::cli
