#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhn/kinetics.hpp"
#include "fhn/mesh.hpp"
#include "fhn/params.hpp"

namespace fhn {

class ConstantsError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Constants of the inequality eta1 ||U||^2 <= ||grad U||^2 + eta2 (int U)^2.
struct PoincareConstants {
  double eta1;
  double eta2;
  std::string method;  ///< "analytic" or "discrete"
  int iterations{0};
};

/// Analytic Neumann value: eta1 = pi^2 / L_max^2, eta2 = eta1 / |Omega|.
PoincareConstants analytic_poincare_constants(const Mesh& mesh);

/// eta1 = smallest nonzero eigenvalue of the discrete zero-flux Laplacian
/// (generalized problem K v = eta W v), eta2 = eta1 / |Omega|.
/// Shifted inverse iteration with the constants deflated; each inner solve
/// is preconditioned CG. Throws ConstantsError on non-convergence.
PoincareConstants estimate_poincare_constants(const Mesh& mesh, double tol = 1e-12, int max_iter = 500);

/// Quantities never pinned numerically by the theory. K needs c, alpha0 and
/// C4; Pi additionally needs C_star.
struct UserEstimates {
  std::optional<double> c;
  std::optional<double> alpha0;
  std::optional<double> C4;
  std::optional<double> C_star;
};

struct TheoremConstants {
  double C1, C2, r, Q;
  double C3, delta, L;
  std::optional<double> M, K, Pi;
  double eta1, eta2;
  double R, mu;
  // Inputs carried along for the checks.
  int m;
  double volume;
  double phi_norm_sq;  ///< phi^2 |Omega|
  double xi_norm;      ///< xi sqrt(|Omega|)
  /// Ratio max{C1,1}/min{C1,1} multiplying e^{-rt} E(0).
  double decay_prefactor;
  /// (2m / (r min{C1,1})) (C1 ||phi||^2 + C2 |Omega|): asymptote of E(t).
  double energy_asymptote;
  /// 2 C1 m ||phi||^2 + 2 C2 m |Omega|: right side of the weighted-energy inequality.
  double gronwall_rhs;
};

/// Direct substitution into the closed-form constant chain. ||phi||^2 and
/// ||xi|| are phi^2 |Omega| and xi sqrt(|Omega|); estimates use |J|.
/// Throws ConstantsError for nonpositive inputs.
TheoremConstants compute_theorem_constants(const ModelParams& params, const AssumptionConstants& k,
                                           double volume, const PoincareConstants& poincare,
                                           const UserEstimates& estimates = {});

/// Independent evaluation of the synchronization threshold
///   R = m(m-1) (eta2 d |Omega| + gamma + 3|eps - sigma|) Q
/// recomputing Q from the parameters rather than reading constants.Q.
double compute_R(const TheoremConstants& constants, const ModelParams& params,
                 const AssumptionConstants& k, double volume);

struct ConstantLine {
  std::string name;
  std::optional<double> value;
  std::string formula;
};

/// Flat report, one line per constant, each with its defining formula.
/// Constants that need absent user estimates carry no value.
std::vector<ConstantLine> constants_report(const TheoremConstants& constants);

}  // namespace fhn
