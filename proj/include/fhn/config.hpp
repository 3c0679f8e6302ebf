#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhn/constants.hpp"
#include "fhn/integrator.hpp"
#include "fhn/kinetics.hpp"
#include "fhn/mesh.hpp"
#include "fhn/params.hpp"

namespace fhn {

/// Parse errors carry "line L, column C"; semantic errors carry the field path.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DiagnosticsConfig {
  double tail_fraction{0.2};
  double slack{1.05};           ///< multiplicative slack for the energy and L4 bounds
  double gronwall_slack{0.05};  ///< relative slack for the weighted-energy inequality
  bool discrete_poincare{false};
  UserEstimates estimates;
};

struct OutputConfig {
  bool snapshots{false};
  int snapshot_stride{1};  ///< in output samples
};

struct RunConfig {
  ModelParams model;
  RunParams run;
  DomainSpec domain;
  PartitionSpec partition;
  Kinetics kinetics = Kinetics::classic();
  std::vector<NeuronInit> initial_conditions;
  DiagnosticsConfig diagnostics;
  OutputConfig output;
};

/// YAML schema (all sections but `model`, `domain`, `initial_conditions` optional):
///   model:     {d, sigma, J, epsilon, a, b, p, m}
///   run:       {dt, t_end, output_stride, solver_tol, solver_max_iter,
///               coupling_mode: automatic|lagged|monolithic, scheme: imex_euler|imex_bdf2, blowup_guard}
///   domain:    {kind: interval, length, nodes} | {kind: rectangle, lx, ly, nx, ny}
///   partition: {preset: zero_flux|all_to_all} | {segments: [{edge, from?, to?, partner: [...]}]}
///   kinetics:  {family: classic_cubic|general_cubic|polynomial|zero, kappa, c, coefficients: [c0..c3]}
///   initial_conditions: one entry per neuron, {u: field, w: field} with
///              field = {kind: constant|bump|random, value, amplitude, center: [x, y], width, seed}
///   diagnostics: {tail_fraction, slack, gronwall_slack, poincare: analytic|discrete,
///                 estimates: {c, alpha0, C4, C_star}}
///   output:    {snapshots, snapshot_stride}
/// Unknown keys are rejected. The result is fully validated, including the
/// partition against the mesh.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Sets one scalar parameter by name (model.*, run.dt, run.t_end); used by sweeps.
void set_parameter(RunConfig& config, const std::string& name, double value);

}  // namespace fhn
