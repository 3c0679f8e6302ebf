#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "fhn/config.hpp"
#include "fhn/io.hpp"
#include "fhn/simulation.hpp"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 input or run error, 2 theorem check failed under --strict.
constexpr int kExitError = 1;
constexpr int kExitStrict = 2;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct RunOutput {
  fhn::SimulationContext context;
  fhn::Trajectory trajectory;
  fhn::RunReport report;
};

RunOutput run_to_dir(const fhn::RunConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  auto context = fhn::prepare_context(config);
  fhn::SimulationOptions options;
  if (config.output.snapshots) {
    const auto snap_dir = out_dir / "snapshots";
    const std::size_t stride = static_cast<std::size_t>(config.output.snapshot_stride);
    options.on_sample = [&, snap_dir, stride](const fhn::NetworkState& s, std::size_t index) {
      if (index % stride == 0) fhn::write_snapshot(snap_dir, context.mesh, s, index);
    };
  }
  auto trajectory = fhn::run_simulation(config, context, options);
  auto report = fhn::evaluate_run(config, context, trajectory);

  std::ostringstream csv;
  fhn::write_timeseries(csv, trajectory.samples, config.model.m);
  write_file(out_dir / "timeseries.csv", csv.str());
  write_file(out_dir / "summary.json", fhn::summary_json(config, context, trajectory, report));
  return {std::move(context), std::move(trajectory), std::move(report)};
}

int cmd_simulate(const std::string& config_path, const std::string& out, bool strict) {
  const auto config = fhn::load_config(config_path);
  const auto result = run_to_dir(config, out);
  bool failed = false;
  for (const auto& c : result.report.checks) {
    std::cout << (c.pass ? "[ok]   " : "[fail] ") << c.name << ": " << c.detail << '\n';
    // The threshold condition is a monitor and never gates the exit code.
    if (!c.pass && c.name != "threshold_condition") failed = true;
  }
  if (result.report.pair_decay)
    std::cout << "pair decay rate " << fhn::format_number(result.report.pair_decay->rate) << '\n';
  else
    std::cout << "pair decay rate unavailable: " << result.report.pair_decay_note << '\n';
  std::cout << "wrote " << (fs::path(out) / "timeseries.csv").string() << " ("
            << result.trajectory.samples.size() << " samples)\n";
  return strict && failed ? kExitStrict : 0;
}

int cmd_constants(const std::string& config_path) {
  const auto config = fhn::load_config(config_path);
  const auto context = fhn::prepare_context(config);
  if (!context.constants) {
    std::cout << "no theorem constants: kinetics '" << config.kinetics.name()
              << "' has no growth-bound constants\n";
    return 0;
  }
  const auto& k = *context.assumption;
  std::cout << "kinetics " << config.kinetics.name() << ": lambda=" << fhn::format_number(k.lambda)
            << " phi=" << fhn::format_number(k.phi) << " alpha=" << fhn::format_number(k.alpha)
            << " zeta=" << fhn::format_number(k.zeta) << " beta=" << fhn::format_number(k.beta)
            << " xi=" << fhn::format_number(k.xi) << " gamma=" << fhn::format_number(k.gamma) << '\n';
  std::cout << "poincare (" << context.poincare.method << "): eta1=" << fhn::format_number(context.poincare.eta1)
            << " eta2=" << fhn::format_number(context.poincare.eta2) << '\n';
  for (const auto& line : fhn::constants_report(*context.constants)) {
    std::ostringstream value;
    if (line.value && std::isfinite(*line.value)) {
      value << std::setprecision(6) << *line.value;
    } else if (line.value) {
      value << "exceeds double range";
    } else {
      value << "not numerically determined";
    }
    std::cout << std::left << std::setw(8) << line.name << " = " << std::setw(28) << value.str() << "  <- "
              << line.formula << '\n';
  }
  return 0;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("--values: not a number: '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("--values: empty list");
  return values;
}

int cmd_sweep(const std::string& config_path, const std::string& param, const std::string& values_csv,
              const std::string& out, int jobs) {
  const auto base = fhn::load_config(config_path);
  const auto values = parse_values(values_csv);
  // Reject unknown names before launching anything.
  {
    auto probe = base;
    fhn::set_parameter(probe, param, values.front());
  }

  auto run_one = [&](std::size_t idx) {
    fhn::SweepRow row{values[idx], false, {}, 0.0, std::nullopt, 0.0, std::nullopt};
    try {
      auto config = base;
      fhn::set_parameter(config, param, values[idx]);
      std::ostringstream sub;
      sub << "run_" << std::setw(3) << std::setfill('0') << idx;
      const auto result = run_to_dir(config, fs::path(out) / sub.str());
      row.ok = true;
      row.sync_degree = result.report.sync_degree;
      if (result.report.pair_decay) row.decay_rate = result.report.pair_decay->rate;
      row.p_tail_min_S = result.report.p_tail_min_S;
      if (result.context.constants) row.R = result.context.constants->R;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };

  const std::size_t workers = static_cast<std::size_t>(
      jobs > 0 ? jobs : std::max(1u, std::thread::hardware_concurrency()));
  std::vector<fhn::SweepRow> rows(values.size());
  for (std::size_t start = 0; start < values.size(); start += workers) {
    std::vector<std::future<fhn::SweepRow>> batch;
    for (std::size_t k = start; k < std::min(values.size(), start + workers); ++k)
      batch.push_back(std::async(std::launch::async, run_one, k));
    for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
  }

  std::ostringstream csv;
  fhn::write_sweep_summary(csv, param, rows);
  fs::create_directories(out);
  write_file(fs::path(out) / "sweep_summary.csv", csv.str());
  std::cout << csv.str();
  bool any_failed = false;
  for (const auto& r : rows)
    if (!r.ok) {
      std::cerr << param << "=" << fhn::format_number(r.value) << " failed: " << r.error << '\n';
      any_failed = true;
    }
  return any_failed ? kExitError : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-coupled FitzHugh-Nagumo network simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, param, values;
  bool strict = false;
  int jobs = 0;
  std::string filter;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation and write timeseries.csv and summary.json");
  simulate->add_option("--config", config_path, "YAML run config")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_flag("--strict", strict, "Exit 2 when a theorem check fails");

  auto* constants = app.add_subcommand("constants", "Print the theorem constants for a config");
  constants->add_option("--config", config_path, "YAML run config")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Run one simulation per parameter value");
  sweep->add_option("--config", config_path, "YAML run config")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Parameter name, e.g. model.p or run.dt")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory")->default_val("sweep_out");
  sweep->add_option("--jobs", jobs, "Concurrent runs (0 = hardware threads)")->default_val(0);

  auto* verify = app.add_subcommand("verify", "Run the built-in acceptance scenarios");
  verify->add_option("--filter", filter, "Scenario id or name substring");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(config_path, out_dir, strict);
    if (*constants) return cmd_constants(config_path);
    if (*sweep) return cmd_sweep(config_path, param, values, out_dir, jobs);
    if (*verify) return fhn::acceptance::run_scenarios(filter, true) == 0 ? 0 : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
