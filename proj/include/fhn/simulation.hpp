#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fhn/config.hpp"
#include "fhn/constants.hpp"
#include "fhn/diagnostics.hpp"
#include "fhn/integrator.hpp"

namespace fhn {

/// Everything derived from a config before time stepping.
struct SimulationContext {
  Mesh mesh;
  BoundaryPartition partition;
  PoincareConstants poincare;
  /// Absent for zero kinetics, which has no growth-bound constants.
  std::optional<AssumptionConstants> assumption;
  std::optional<TheoremConstants> constants;
};

SimulationContext prepare_context(const RunConfig& config);

struct Trajectory {
  std::vector<SampleDiagnostics> samples;  ///< strictly increasing t
  NetworkState final_state;
  std::vector<NetworkState> states;        ///< filled only when requested
};

struct SimulationOptions {
  bool keep_states{false};
  /// Called for every recorded sample with its 0-based sample index.
  std::function<void(const NetworkState&, std::size_t)> on_sample;
};

/// Deterministic given the config: fixed iteration orders, seeded initial data.
/// E_w uses C1 from the context (0 when no constants exist).
Trajectory run_simulation(const RunConfig& config, const SimulationContext& context,
                          const SimulationOptions& options = {});

struct RunReport {
  std::vector<CheckResult> checks;
  std::optional<DecayFit> pair_decay;  ///< fit of P(t) over the tail window
  std::string pair_decay_note;          ///< why the fit is absent, if it is
  double sync_degree{0.0};
  double tail_difference_energy{0.0};
  double p_tail_min_S{0.0};
};

/// Theorem checks and tail statistics of a finished run.
RunReport evaluate_run(const RunConfig& config, const SimulationContext& context, const Trajectory& trajectory);

}  // namespace fhn
