#include "fhn/simulation.hpp"

#include <algorithm>
#include <limits>

namespace fhn {

SimulationContext prepare_context(const RunConfig& config) {
  Mesh mesh = build_mesh(config.domain);
  BoundaryPartition partition = build_boundary_partition(mesh, config.partition, config.model.m);
  PoincareConstants poincare = config.diagnostics.discrete_poincare ? estimate_poincare_constants(mesh)
                                                                    : analytic_poincare_constants(mesh);
  SimulationContext ctx{std::move(mesh), std::move(partition), poincare, std::nullopt, std::nullopt};
  if (config.kinetics.family() != Kinetics::Family::zero) {
    ctx.assumption = extract_assumption_constants(config.kinetics);
    ctx.constants = compute_theorem_constants(config.model, *ctx.assumption, ctx.mesh.volume(), ctx.poincare,
                                              config.diagnostics.estimates);
  }
  return ctx;
}

Trajectory run_simulation(const RunConfig& config, const SimulationContext& context,
                          const SimulationOptions& options) {
  Integrator integrator(context.mesh, context.partition, config.model, config.kinetics, config.run);
  const NetworkState initial = make_initial_state(context.mesh, config.initial_conditions);
  const double C1 = context.constants ? context.constants->C1 : 0.0;

  Trajectory traj;
  traj.final_state = integrate(integrator, initial, config.run.t_end, config.run.output_stride,
                               [&](const NetworkState& s) {
                                 traj.samples.push_back(sample_diagnostics(s, context.mesh, C1));
                                 if (options.keep_states) traj.states.push_back(s);
                                 if (options.on_sample) options.on_sample(s, traj.samples.size() - 1);
                               });
  return traj;
}

RunReport evaluate_run(const RunConfig& config, const SimulationContext& context, const Trajectory& traj) {
  RunReport rep;
  const auto& diag = config.diagnostics;
  const std::span<const SampleDiagnostics> samples(traj.samples);
  if (context.constants) {
    const auto& c = *context.constants;
    rep.checks.push_back(check_dissipative_bound(samples, c, diag.slack, diag.tail_fraction));
    rep.checks.push_back(check_l4_bound(samples, c, diag.slack, diag.tail_fraction));
    rep.checks.push_back(check_gronwall(samples, c, diag.gronwall_slack));
    rep.checks.push_back(check_threshold_condition(samples, c, config.model.p, diag.tail_fraction));
  }
  rep.sync_degree = sync_degree_estimate(samples, diag.tail_fraction);
  rep.tail_difference_energy = tail_difference_energy_norm(samples, diag.tail_fraction);

  double smin = std::numeric_limits<double>::infinity();
  const std::size_t start = tail_start(samples.size(), diag.tail_fraction);
  for (std::size_t k = start; k < samples.size(); ++k) smin = std::min(smin, samples[k].S);
  rep.p_tail_min_S = config.model.p * smin;

  std::vector<double> t, P;
  for (const auto& s : samples) {
    t.push_back(s.t);
    P.push_back(s.P);
  }
  try {
    rep.pair_decay = fit_decay_rate(t, P, samples[start].t, samples.back().t);
  } catch (const DiagnosticsError& e) {
    rep.pair_decay_note = e.what();
  }
  return rep;
}

}  // namespace fhn
