#include "fhn/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fhn/operators.hpp"
#include "fhn/sparse.hpp"

namespace fhn {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConstantsError(std::string(name) + " must be > 0");
}

}  // namespace

PoincareConstants analytic_poincare_constants(const Mesh& mesh) {
  const double lmax = mesh.dim() == 2 ? std::max(mesh.lx(), mesh.ly()) : mesh.lx();
  const double eta1 = std::numbers::pi * std::numbers::pi / (lmax * lmax);
  return {eta1, eta1 / mesh.volume(), "analytic", 0};
}

PoincareConstants estimate_poincare_constants(const Mesh& mesh, double tol, int max_iter) {
  const int n = mesh.num_nodes();
  const auto w = mesh.weights();
  const double volume = mesh.volume();

  // K = -(zero-flux stiffness) is positive semi-definite with kernel span{1}.
  const CsrMatrix stiff = neumann_stiffness(mesh, 1.0);
  const double shift = 1.0;
  std::vector<Triplet> mass;
  for (int k = 0; k < n; ++k) mass.push_back({k, k, shift * w[k]});
  const CsrMatrix shifted = CsrMatrix::from_triplets(n, n, std::move(mass)).add_scaled(stiff, -1.0);

  auto deflate = [&](std::vector<double>& v) {
    const double mean = dot(v, w) / volume;
    for (double& x : v) x -= mean;
    double norm = 0.0;
    for (int k = 0; k < n; ++k) norm += w[k] * v[k] * v[k];
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  };

  // Start from a smooth, non-symmetric field that overlaps every low mode.
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) {
    const double x = mesh.x_of(k) / mesh.lx();
    const double y = mesh.dim() == 2 ? mesh.y_of(k) / mesh.ly() : 0.0;
    v[k] = x + 0.7 * y + 0.3 * x * x * y;
  }
  deflate(v);

  std::vector<double> rhs(n), next(n), kv(n);
  double eta = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    for (int k = 0; k < n; ++k) rhs[k] = w[k] * v[k];
    next = v;
    try {
      solve_spd(shifted, rhs, next, 1e-14, 10 * n + 100);
    } catch (const SolverError& e) {
      throw ConstantsError(std::string("eigen-solve inner solve failed: ") + e.what());
    }
    deflate(next);
    v.swap(next);
    // Rayleigh quotient v^T K v / v^T W v with v W-normalized.
    stiff.multiply(v, kv);
    const double eta_new = -dot(v, kv);
    if (it > 1 && std::abs(eta_new - eta) <= tol * std::abs(eta_new)) return {eta_new, eta_new / volume, "discrete", it};
    eta = eta_new;
  }
  std::ostringstream os;
  os << "eigen-solve did not converge in " << max_iter << " iterations (last estimate " << eta << ")";
  throw ConstantsError(os.str());
}

TheoremConstants compute_theorem_constants(const ModelParams& params, const AssumptionConstants& k,
                                           double volume, const PoincareConstants& poincare,
                                           const UserEstimates& estimates) {
  require_positive(params.d, "d");
  require_positive(params.sigma, "sigma");
  require_positive(params.epsilon, "epsilon");
  require_positive(params.a, "a");
  require_positive(params.b, "b");
  require_positive(k.lambda, "lambda");
  require_positive(k.gamma, "gamma");
  require_positive(volume, "|Omega|");
  require_positive(poincare.eta1, "eta1");
  require_positive(poincare.eta2, "eta2");
  if (params.m < 2) throw ConstantsError("m must be >= 2");
  if (!(k.phi >= 0.0) || !(k.xi >= 0.0)) throw ConstantsError("phi and xi must be >= 0");

  const double eps = params.epsilon, b = params.b, sigma = params.sigma, a = params.a;
  const double lambda = k.lambda, J = params.abs_J(), m = params.m;

  TheoremConstants c{};
  c.m = params.m;
  c.volume = volume;
  c.phi_norm_sq = k.phi * k.phi * volume;
  c.xi_norm = k.xi * std::sqrt(volume);
  c.eta1 = poincare.eta1;
  c.eta2 = poincare.eta2;

  c.C1 = eps * b * lambda / (2.0 * sigma * sigma);
  c.C2 = c.C1 + c.C1 * lambda / 2.0 + c.C1 * J * J / (2.0 * lambda) + eps * a * a / b +
         4.0 * eps * sigma * sigma / (lambda * lambda * b * b * b);
  c.r = std::min(4.0 * sigma * sigma / (lambda * b * b), eps * b / 2.0);
  const double c1_min = std::min(c.C1, 1.0);
  c.energy_asymptote = 2.0 * m / (c.r * c1_min) * (c.C1 * c.phi_norm_sq + c.C2 * volume);
  c.Q = 1.0 + c.energy_asymptote;
  c.decay_prefactor = std::max(c.C1, 1.0) / c1_min;
  c.gronwall_rhs = 2.0 * c.C1 * m * c.phi_norm_sq + 2.0 * c.C2 * m * volume;

  c.C3 = 14.0 * sigma * sigma / (eps * b * lambda);
  c.delta = 2.0 * std::min(lambda, sigma * sigma / (c.C3 * lambda));
  const double tail = 1.0 + 2.0 * c.C3 * eps / (b * lambda);
  c.L = m / (c.delta * std::min(1.0, 2.0 * c.C3)) *
        (24.0 / lambda * (1.0 + c.phi_norm_sq) +
         (24.0 * J * J / lambda + 4.0 * c.C3 * eps * a * a / b + lambda / 2.0 * tail * tail) * volume);

  if (estimates.C4) {
    c.M = *estimates.C4 * (2.0 * std::sqrt(c.L) + c.xi_norm) + eps + sigma;
    if (estimates.c && estimates.alpha0) {
      require_positive(*estimates.alpha0, "alpha0");
      const double cc = *estimates.c, M = *c.M;
      c.K = 2.0 * cc * c.Q + 2.0 * cc * cc * M * c.Q * std::numbers::pi * std::exp(cc * cc * M * M / *estimates.alpha0);
      if (estimates.C_star) c.Pi = *estimates.C_star * *c.K * *c.K;
    }
  }

  c.R = m * (m - 1.0) * (c.eta2 * params.d * volume + k.gamma + 3.0 * std::abs(eps - sigma)) * c.Q;
  c.mu = 2.0 * std::min(c.eta1 * params.d, eps * b);
  return c;
}

double compute_R(const TheoremConstants& constants, const ModelParams& params,
                 const AssumptionConstants& k, double volume) {
  const double m = params.m;
  const double s2 = params.sigma * params.sigma;
  const double eb = params.epsilon * params.b;
  const double C1 = eb * k.lambda / (2.0 * s2);
  const double J2 = params.J * params.J;
  const double C2 = C1 * (1.0 + k.lambda / 2.0 + J2 / (2.0 * k.lambda)) +
                    params.epsilon * params.a * params.a / params.b +
                    4.0 * params.epsilon * s2 / (k.lambda * k.lambda * std::pow(params.b, 3));
  // r from its alternate form 2 eps / (C1 b).
  const double r = std::min(2.0 * params.epsilon / (C1 * params.b), eb / 2.0);
  const double bracket = 1.0 + 2.0 * m / (r * std::min(C1, 1.0)) * (C1 * k.phi * k.phi * volume + C2 * volume);
  const double lead = constants.eta2 * params.d * volume + k.gamma + 3.0 * std::abs(params.epsilon - params.sigma);
  return m * (m - 1.0) * lead * bracket;
}

std::vector<ConstantLine> constants_report(const TheoremConstants& c) {
  return {
      {"C1", c.C1, "eps b lambda / (2 sigma^2)"},
      {"C2", c.C2, "C1 + C1 lambda/2 + C1 J^2/(2 lambda) + eps a^2/b + 4 eps sigma^2/(lambda^2 b^3)"},
      {"r", c.r, "min{4 sigma^2/(lambda b^2), eps b/2}"},
      {"Q", c.Q, "1 + 2m/(r min{C1,1}) (C1 ||phi||^2 + C2 |Omega|)"},
      {"C3", c.C3, "14 sigma^2/(eps b lambda)"},
      {"delta", c.delta, "2 min{lambda, sigma^2/(C3 lambda)}"},
      {"L", c.L,
       "m/(delta min{1,2C3}) [24/lambda (1 + ||phi||^2) + (24 J^2/lambda + 4 C3 eps a^2/b + lambda/2 (1 + 2 C3 eps/(b lambda))^2) |Omega|]"},
      {"M", c.M, "C4 (2 sqrt(L) + ||xi||) + eps + sigma  [needs C4]"},
      {"K", c.K, "2cQ + 2c^2 M Q pi exp(c^2 M^2/alpha0)  [needs c, alpha0, C4]"},
      {"Pi", c.Pi, "C_star K^2  [needs c, alpha0, C4, C_star]"},
      {"eta1", c.eta1, "first nonzero zero-flux Laplacian eigenvalue"},
      {"eta2", c.eta2, "eta1 / |Omega|"},
      {"R", c.R, "m(m-1) (eta2 d |Omega| + gamma + 3|eps - sigma|) Q"},
      {"mu", c.mu, "2 min{eta1 d, eps b}"},
  };
}

}  // namespace fhn
