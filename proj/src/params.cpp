#include "fhn/params.hpp"

#include <cmath>

namespace fhn {

double ModelParams::abs_J() const { return std::abs(J); }

std::string to_string(CouplingMode mode) {
  switch (mode) {
    case CouplingMode::automatic: return "auto";
    case CouplingMode::lagged: return "lagged";
    case CouplingMode::monolithic: return "monolithic";
  }
  return "unknown";
}

std::string to_string(TimeScheme scheme) {
  switch (scheme) {
    case TimeScheme::imex_euler: return "imex_euler";
    case TimeScheme::imex_bdf2: return "imex_bdf2";
  }
  return "unknown";
}

CouplingMode RunParams::resolved_mode(int m) const {
  if (coupling_mode != CouplingMode::automatic) return coupling_mode;
  return m <= 8 ? CouplingMode::monolithic : CouplingMode::lagged;
}

namespace {

void require_positive(double value, const char* name) {
  // written so that NaN fails too
  if (!(value > 0.0) || !std::isfinite(value))
    throw ParameterError(std::string(name) + " must be > 0");
}

}  // namespace

ValidatedParams validate_params(const ModelParams& raw) {
  require_positive(raw.d, "d");
  require_positive(raw.sigma, "sigma");
  if (!std::isfinite(raw.J)) throw ParameterError("J must be finite");
  require_positive(raw.epsilon, "epsilon");
  require_positive(raw.a, "a");
  require_positive(raw.b, "b");
  if (!(raw.p >= 0.0) || !std::isfinite(raw.p)) throw ParameterError("p must be >= 0");
  if (raw.m < 2) throw ParameterError("m must be >= 2");
  return ValidatedParams(raw);
}

void validate_run_params(const RunParams& run) {
  require_positive(run.dt, "dt");
  require_positive(run.t_end, "t_end");
  if (!(run.dt < run.t_end)) throw ParameterError("dt must be < t_end");
  if (run.output_stride < 1) throw ParameterError("output_stride must be >= 1");
  if (!(run.solver_tol > 0.0 && run.solver_tol < 1.0))
    throw ParameterError("solver_tol must be in (0, 1)");
  if (run.solver_max_iter < 1) throw ParameterError("solver_max_iter must be >= 1");
  require_positive(run.blowup_guard, "blowup_guard");
}

ModelParams default_model_params() { return ModelParams{}; }

}  // namespace fhn
