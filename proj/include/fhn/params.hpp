#pragma once

#include <stdexcept>
#include <string>

namespace fhn {

/// Scalar coefficients of the boundary-coupled FitzHugh-Nagumo network.
struct ModelParams {
  double d{1.0};        ///< diffusion coefficient
  double sigma{1.0};    ///< recovery coupling in the u-equation
  double J{0.5};        ///< external current (any sign)
  double epsilon{0.08}; ///< recovery time scale
  double a{0.7};        ///< recovery offset
  double b{0.8};        ///< recovery decay
  double p{1.0};        ///< boundary coupling strength
  int m{2};             ///< number of neurons

  /// Estimates use |J|; the sign of J only matters to the dynamics.
  double abs_J() const;

  bool operator==(const ModelParams&) const = default;
};

enum class CouplingMode { automatic, lagged, monolithic };
enum class TimeScheme { imex_euler, imex_bdf2 };

std::string to_string(CouplingMode mode);
std::string to_string(TimeScheme scheme);

struct RunParams {
  double dt{0.01};
  double t_end{10.0};
  int output_stride{10};
  double solver_tol{1e-10};
  int solver_max_iter{2000};
  CouplingMode coupling_mode{CouplingMode::automatic};
  TimeScheme scheme{TimeScheme::imex_euler};
  double blowup_guard{1e6}; ///< max |u| tolerated before a step is declared a blow-up

  /// Monolithic for m <= 8, lagged above, unless set explicitly.
  CouplingMode resolved_mode(int m) const;
};

/// Thrown for every constraint violation in user-supplied parameters.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// ModelParams that have passed validate_params. Only validate_params can make one.
class ValidatedParams {
public:
  const ModelParams& get() const { return params_; }
  operator const ModelParams&() const { return params_; }

private:
  explicit ValidatedParams(const ModelParams& p) : params_(p) {}
  friend ValidatedParams validate_params(const ModelParams& raw);
  ModelParams params_;
};

/// Checks every invariant in declaration order; throws ParameterError naming
/// the first violated constraint ("b must be > 0", "m must be >= 2").
ValidatedParams validate_params(const ModelParams& raw);

/// Throws ParameterError if the run parameters are inconsistent.
void validate_run_params(const RunParams& run);

/// Repository default parameter set (classic recovery constants).
ModelParams default_model_params();

}  // namespace fhn
