#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhn/kinetics.hpp"
#include "fhn/mesh.hpp"
#include "fhn/operators.hpp"
#include "fhn/params.hpp"
#include "fhn/sparse.hpp"

namespace fhn {

/// The 2m nodal fields (u_i, w_i) at time t.
struct NetworkState {
  double t{0.0};
  std::vector<Field> u;
  std::vector<Field> w;

  int m() const { return static_cast<int>(u.size()); }
  bool operator==(const NetworkState&) const = default;
};

/// Initial profile of one field.
///   constant: value
///   bump:     value + amplitude * exp(-|x - center|^2 / (2 width^2))
///   random:   value + uniform in [-amplitude, amplitude], per node, seeded
struct FieldInit {
  enum class Kind { constant, bump, random };
  Kind kind{Kind::constant};
  double value{0.0};
  double amplitude{0.0};
  std::array<double, 2> center{0.5, 0.5};
  double width{0.1};
  std::optional<std::uint64_t> seed;
};

struct NeuronInit {
  FieldInit u;
  FieldInit w;
};

/// Nodal interpolation of `init`; random fields without their own seed use
/// `fallback_seed`.
Field make_initial_field(const Mesh& mesh, const FieldInit& init, std::uint64_t fallback_seed);

/// Neuron i's random fields default to seeds 2i+1 (u) and 2i+2 (w).
NetworkState make_initial_state(const Mesh& mesh, std::span<const NeuronInit> neurons);

/// Thrown when a step fails: solver non-convergence or a non-finite/blown-up state.
class StepError : public std::runtime_error {
public:
  StepError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step_index() const { return step_; }

private:
  long step_;
};

/// Advances the network with an IMEX scheme: diffusion, the Robin self-term
/// and the linear w-decay implicit; the reaction explicit; the inter-neuron
/// coupling either lagged (explicit, one N x N solve per neuron) or folded
/// into a single monolithic (m N) x (m N) solve.
///
/// IMEX Euler:
///   (W - dt S_i) u_i' = W (u_i + dt (f(u_i) - sigma w_i + J)) + dt C_i(u)
///   w_i' = (w_i + dt eps (u_i' + a)) / (1 + dt eps b)
/// IMEX-BDF2 uses the same splitting with extrapolated explicit terms and
/// an Euler start-up step.
class Integrator {
public:
  Integrator(const Mesh& mesh, const BoundaryPartition& partition, const ModelParams& params,
             const Kinetics& kinetics, const RunParams& run);

  /// One step of size run.dt. Throws StepError.
  NetworkState step(const NetworkState& state);

  CouplingMode mode() const { return mode_; }
  TimeScheme scheme() const { return run_.scheme; }
  double dt() const { return run_.dt; }
  const DiffusionOperator& op(int neuron) const { return ops_[neuron]; }
  /// Forgets BDF2 history; the next step is an Euler start-up step.
  void reset_history() { history_.reset(); }
  /// Iterations used by the most recent step (summed over solves).
  int last_iterations() const { return last_iterations_; }

private:
  struct History {
    NetworkState prev;
    std::vector<Field> explicit_rhs;  // f(u) - sigma w + J per neuron
    std::vector<Field> coupling;      // weak-form coupling per neuron (lagged)
  };
  struct SystemPair {
    CsrMatrix matrix;
    std::vector<double> precond;
  };
  /// mass W u - dt_scale S_full u, applied matrix-free.
  struct MonolithicSystem {
    double mass{1.0};
    double dt_scale{0.0};
    std::vector<double> precond;
  };

  Field reaction(const Field& u, const Field& w) const;
  MonolithicSystem build_monolithic(double mass, double dt_scale) const;
  void apply_monolithic(const MonolithicSystem& sys, std::span<const double> x, std::span<double> y) const;
  std::vector<Field> solve_u(const NetworkState& state, const std::vector<Field>& rhs, bool bdf2);
  void check_state(const NetworkState& s) const;

  const Mesh& mesh_;
  ModelParams params_;
  Kinetics kinetics_;
  RunParams run_;
  CouplingMode mode_;
  std::vector<DiffusionOperator> ops_;
  CsrMatrix neumann_;
  MonolithicSystem mono_euler_, mono_bdf2_;
  std::vector<SystemPair> lagged_euler_, lagged_bdf2_;
  std::optional<History> history_;
  long step_count_{0};
  int last_iterations_{0};
};

/// Steps from `initial` to t_end (nsteps = round(t_end / dt)), calling
/// `observer` on the initial state, every `stride`-th state and the final state.
/// Returns the final state. StepError messages carry the step index.
NetworkState integrate(Integrator& integrator, const NetworkState& initial, double t_end, int stride,
                       const std::function<void(const NetworkState&)>& observer);

}  // namespace fhn
