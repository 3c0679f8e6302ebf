#include "fhn/integrator.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace fhn {

Field make_initial_field(const Mesh& mesh, const FieldInit& init, std::uint64_t fallback_seed) {
  using Kind = FieldInit::Kind;
  switch (init.kind) {
    case Kind::constant:
      return Field(mesh.num_nodes(), init.value);
    case Kind::bump: {
      if (!(init.width > 0.0)) throw std::invalid_argument("bump width must be > 0");
      const double two_w2 = 2.0 * init.width * init.width;
      return interpolate(mesh, [&](double x, double y) {
        const double dx = x - init.center[0];
        const double dy = mesh.dim() == 2 ? y - init.center[1] : 0.0;
        return init.value + init.amplitude * std::exp(-(dx * dx + dy * dy) / two_w2);
      });
    }
    case Kind::random: {
      std::mt19937_64 rng(init.seed.value_or(fallback_seed));
      std::uniform_real_distribution<double> dist(-init.amplitude, init.amplitude);
      Field out(mesh.num_nodes());
      for (double& v : out) v = init.value + dist(rng);
      return out;
    }
  }
  throw std::logic_error("unknown initial-condition kind");
}

NetworkState make_initial_state(const Mesh& mesh, std::span<const NeuronInit> neurons) {
  NetworkState s;
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    s.u.push_back(make_initial_field(mesh, neurons[i].u, 2 * i + 1));
    s.w.push_back(make_initial_field(mesh, neurons[i].w, 2 * i + 2));
  }
  return s;
}

Integrator::Integrator(const Mesh& mesh, const BoundaryPartition& partition, const ModelParams& params,
                       const Kinetics& kinetics, const RunParams& run)
    : mesh_(mesh), params_(params), kinetics_(kinetics), run_(run), mode_(run.resolved_mode(params.m)) {
  if (!(run.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (partition.m() != params.m) throw std::invalid_argument("partition and params disagree on m");
  for (int i = 0; i < params.m; ++i) ops_.push_back(assemble_diffusion(mesh, partition, params, i, mode_));

  const double dt = run.dt;
  if (mode_ == CouplingMode::monolithic) {
    neumann_ = neumann_stiffness(mesh, params.d);
    mono_euler_ = build_monolithic(1.0, dt);
    if (run.scheme == TimeScheme::imex_bdf2) mono_bdf2_ = build_monolithic(3.0, 2.0 * dt);
  } else {
    auto build = [&](double mass, double dt_scale) {
      std::vector<SystemPair> out;
      const int n = mesh.num_nodes();
      for (const auto& op : ops_) {
        std::vector<Triplet> t;
        for (int k = 0; k < n; ++k) t.push_back({k, k, mass * mesh.weights()[k]});
        SystemPair sys;
        sys.matrix = CsrMatrix::from_triplets(n, n, std::move(t)).add_scaled(op.stiffness(), -dt_scale);
        sys.precond = sys.matrix.diagonal();
        out.push_back(std::move(sys));
      }
      return out;
    };
    lagged_euler_ = build(1.0, dt);
    if (run.scheme == TimeScheme::imex_bdf2) lagged_bdf2_ = build(3.0, 2.0 * dt);
  }
}

Integrator::MonolithicSystem Integrator::build_monolithic(double mass, double dt_scale) const {
  const int n = mesh_.num_nodes();
  const int m = params_.m;
  MonolithicSystem sys{mass, dt_scale, {}};
  const auto kdiag = neumann_.diagonal();
  std::vector<double> robin(static_cast<std::size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (const auto& e : ops_[i].coupling()) robin[i * n + e.node] += e.weight;
  // Shared across neurons so the iteration commutes with neuron relabeling.
  sys.precond.resize(robin.size());
  for (int k = 0; k < n; ++k) {
    double mean = 0.0;
    for (int i = 0; i < m; ++i) mean += robin[i * n + k];
    mean /= m;
    const double diag = mass * mesh_.weights()[k] - dt_scale * (kdiag[k] - mean);
    for (int i = 0; i < m; ++i) sys.precond[i * n + k] = diag;
  }
  return sys;
}

void Integrator::apply_monolithic(const MonolithicSystem& sys, std::span<const double> x,
                                  std::span<double> y) const {
  const int n = mesh_.num_nodes();
  const auto w = mesh_.weights();
  for (int i = 0; i < params_.m; ++i) {
    const auto xi = x.subspan(static_cast<std::size_t>(i) * n, n);
    const auto yi = y.subspan(static_cast<std::size_t>(i) * n, n);
    neumann_.multiply(xi, yi);
    for (int k = 0; k < n; ++k) yi[k] = sys.mass * w[k] * xi[k] - sys.dt_scale * yi[k];
    // Coupling as weight * (u_j - u_i): exactly zero on synchronized states.
    for (const auto& e : ops_[i].coupling())
      yi[e.node] -= sys.dt_scale * e.weight * (x[static_cast<std::size_t>(e.partner) * n + e.node] - xi[e.node]);
  }
}

Field Integrator::reaction(const Field& u, const Field& w) const {
  Field g(u.size());
  for (std::size_t k = 0; k < u.size(); ++k)
    g[k] = eval_f(kinetics_, u[k]) - params_.sigma * w[k] + params_.J;
  return g;
}

NetworkState Integrator::step(const NetworkState& state) {
  const int m = params_.m;
  const int n = mesh_.num_nodes();
  if (state.m() != m || static_cast<int>(state.w.size()) != m)
    throw StepError("state has the wrong number of neurons", step_count_);
  for (int i = 0; i < m; ++i)
    if (static_cast<int>(state.u[i].size()) != n || static_cast<int>(state.w[i].size()) != n)
      throw StepError("state field size does not match the mesh", step_count_);

  const double dt = run_.dt;
  const bool bdf2 = run_.scheme == TimeScheme::imex_bdf2 && history_.has_value();
  const auto weights = mesh_.weights();

  std::vector<Field> explicit_rhs(m), coupling;
  for (int i = 0; i < m; ++i) explicit_rhs[i] = reaction(state.u[i], state.w[i]);
  if (mode_ == CouplingMode::lagged)
    for (int i = 0; i < m; ++i) coupling.push_back(apply_coupling(ops_[i], state.u, Form::weak));

  // Weak-form right-hand sides.
  std::vector<Field> rhs(m, Field(n));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      if (bdf2) {
        const double g = 2.0 * explicit_rhs[i][k] - history_->explicit_rhs[i][k];
        rhs[i][k] = weights[k] * (4.0 * state.u[i][k] - history_->prev.u[i][k] + 2.0 * dt * g);
      } else {
        rhs[i][k] = weights[k] * (state.u[i][k] + dt * explicit_rhs[i][k]);
      }
    }
    if (mode_ == CouplingMode::lagged) {
      for (int k = 0; k < n; ++k)
        rhs[i][k] += bdf2 ? 2.0 * dt * (2.0 * coupling[i][k] - history_->coupling[i][k])
                          : dt * coupling[i][k];
    }
  }

  NetworkState next;
  next.t = state.t + dt;
  next.u = solve_u(state, rhs, bdf2);

  const double eps = params_.epsilon;
  next.w.assign(m, Field(n));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      const double src = eps * (next.u[i][k] + params_.a);
      next.w[i][k] = bdf2 ? (4.0 * state.w[i][k] - history_->prev.w[i][k] + 2.0 * dt * src) /
                                (3.0 + 2.0 * dt * eps * params_.b)
                          : (state.w[i][k] + dt * src) / (1.0 + dt * eps * params_.b);
    }
  }

  ++step_count_;
  check_state(next);
  if (run_.scheme == TimeScheme::imex_bdf2) history_ = History{state, std::move(explicit_rhs), std::move(coupling)};
  return next;
}

std::vector<Field> Integrator::solve_u(const NetworkState& state, const std::vector<Field>& rhs, bool bdf2) {
  const int m = params_.m;
  const int n = mesh_.num_nodes();
  last_iterations_ = 0;
  std::vector<Field> out(m);
  try {
    if (mode_ == CouplingMode::monolithic) {
      const MonolithicSystem& sys = bdf2 ? mono_bdf2_ : mono_euler_;
      std::vector<double> b(static_cast<std::size_t>(m) * n), x(b.size());
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) {
          b[i * n + k] = rhs[i][k];
          x[i * n + k] = state.u[i][k];
        }
      const LinearOperator apply = [&](std::span<const double> in, std::span<double> y) {
        apply_monolithic(sys, in, y);
      };
      last_iterations_ = solve_spd(apply, b, x, run_.solver_tol, run_.solver_max_iter, sys.precond).iterations;
      for (int i = 0; i < m; ++i) out[i].assign(x.begin() + i * n, x.begin() + (i + 1) * n);
    } else {
      const auto& systems = bdf2 ? lagged_bdf2_ : lagged_euler_;
      for (int i = 0; i < m; ++i) {
        out[i] = state.u[i];
        last_iterations_ += solve_spd(systems[i].matrix, rhs[i], out[i], run_.solver_tol,
                                      run_.solver_max_iter, systems[i].precond)
                                .iterations;
      }
    }
  } catch (const SolverError& e) {
    throw StepError(std::string("linear solve failed: ") + e.what(), step_count_);
  }
  return out;
}

void Integrator::check_state(const NetworkState& s) const {
  for (int i = 0; i < s.m(); ++i) {
    for (std::size_t k = 0; k < s.u[i].size(); ++k) {
      const double u = s.u[i][k], w = s.w[i][k];
      if (!std::isfinite(u) || !std::isfinite(w)) {
        std::ostringstream os;
        os << "non-finite state in neuron " << i + 1 << " at node " << k << ", t=" << s.t;
        throw StepError(os.str(), step_count_);
      }
      if (std::abs(u) > run_.blowup_guard) {
        std::ostringstream os;
        os << "|u| exceeded the blow-up guard " << run_.blowup_guard << " in neuron " << i + 1
           << ", t=" << s.t;
        throw StepError(os.str(), step_count_);
      }
    }
  }
}

NetworkState integrate(Integrator& integrator, const NetworkState& initial, double t_end, int stride,
                       const std::function<void(const NetworkState&)>& observer) {
  if (stride < 1) throw std::invalid_argument("output_stride must be >= 1");
  const double dt = integrator.dt();
  const long nsteps = std::lround((t_end - initial.t) / dt);
  const double t0 = initial.t;
  NetworkState state = initial;
  if (observer) observer(state);
  for (long s = 1; s <= nsteps; ++s) {
    try {
      state = integrator.step(state);
    } catch (const StepError& e) {
      std::ostringstream os;
      os << "step " << s << ": " << e.what();
      throw StepError(os.str(), s);
    }
    // Times are n * dt rather than accumulated sums.
    state.t = t0 + static_cast<double>(s) * dt;
    if (observer && (s % stride == 0 || s == nsteps)) observer(state);
  }
  return state;
}

}  // namespace fhn
