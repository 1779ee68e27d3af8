// tpa-flip: entangled two-photon absorption rates under spectral phase flips.
//
//   tpa-flip rate    --config run.json [--method analytic|quadrature] [--out file.csv]
//   tpa-flip scan    --config run.json [--grid min:max:points] [--out file.csv]
//   tpa-flip figures [--figures 1,2,...] --out dir
//   tpa-flip verify  [--config run.json]
//
// Exit codes: 0 success, 2 config error, 3 numerical tolerance failure, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tpaflip/cli/commands.hpp"

namespace {

using namespace tpaflip::cli;

struct LoadError {
  int code;
};

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config " << path << '\n';
    throw LoadError{io_failure};
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const config_error& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    throw LoadError{config_failure};
  }
}

// Runs `body` against the --out file when given (or the config's "output"),
// otherwise stdout. The file is only replaced when the command succeeds.
template <class Body>
int with_output(const std::optional<std::string>& path, Body body) {
  if (!path) return body(std::cout);
  std::ostringstream buffer;
  const int code = body(buffer);
  if (code != ok) return code;
  std::ofstream out(*path, std::ios::binary);
  out << buffer.str();
  if (!out.good()) {
    std::cerr << "error: cannot write " << *path << '\n';
    return io_failure;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled two-photon absorption with spectral phase flips"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string method_name = "analytic";
  std::string grid_text;
  std::vector<int> figure_ids;
  bool inject_fault = false;

  auto* rate = app.add_subcommand("rate", "single evaluation of the TPA rate");
  rate->add_option("--config", config_path, "JSON run configuration")->required();
  rate->add_option("--method", method_name, "analytic or quadrature")
      ->check(CLI::IsMember({"analytic", "quadrature"}));
  rate->add_option("--out", out_path, "CSV output file (default: stdout)");

  auto* scan = app.add_subcommand("scan", "sweep the flip frequency");
  scan->add_option("--config", config_path, "JSON run configuration")->required();
  scan->add_option("--grid", grid_text, "min:max:points (overrides the config scan grid)");
  scan->add_option("--out", out_path, "CSV output file (default: config output, else stdout)");

  auto* figures = app.add_subcommand("figures", "write figure datasets and a manifest");
  figures->add_option("--figures", figure_ids, "figure ids (default: all)")->delimiter(',');
  figures->add_option("--out", out_path, "output directory")->required();
  figures->add_option("--config", config_path, "ignored; accepted for uniformity");

  auto* verify = app.add_subcommand("verify", "compare closed forms against the quadrature oracle");
  verify->add_option("--config", config_path, "JSON run configuration (default: built-in case grid)");
  verify->add_flag("--inject-fault", inject_fault, "perturb the closed form (negative control)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_failure;
  }

  try {
    if (*rate) {
      const auto cfg = load_config(config_path);
      const auto method = method_name == "quadrature" ? Method::quadrature : Method::analytic;
      const std::optional<std::string> out = out_path.empty() ? cfg.output : std::optional{out_path};
      return with_output(out, [&](std::ostream& os) { return cmd_rate(cfg, method, os, std::cerr); });
    }
    if (*scan) {
      const auto cfg = load_config(config_path);
      std::optional<GridConfig> grid;
      if (!grid_text.empty()) grid = parse_grid(grid_text);
      const std::optional<std::string> out = out_path.empty() ? cfg.output : std::optional{out_path};
      const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
      return with_output(out, [&](std::ostream& os) { return cmd_scan(cfg, grid, os, std::cerr, workers); });
    }
    if (*figures) {
      if (figure_ids.empty()) figure_ids = {1, 2, 3, 4, 5, 6};
      return cmd_figures(figure_ids, out_path, std::cerr);
    }
    if (*verify) {
      std::optional<RunConfig> cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      VerifyOptions opts;
      if (inject_fault) opts.closed_form_perturbation = 1e-6;
      return cmd_verify(cfg, opts, std::cout);
    }
  } catch (const LoadError& e) {
    return e.code;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return config_failure;
  }
  return config_failure;
}
