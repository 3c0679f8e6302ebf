#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhn/constants.hpp"
#include "fhn/integrator.hpp"
#include "fhn/mesh.hpp"

namespace fhn {

class DiagnosticsError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Difference functionals of one pair i < j (0-based), with
/// U = u_i - u_j and W = w_i - w_j.
struct PairDiagnostics {
  int i, j;
  double U_sq;           ///< ||U||^2
  double W_sq;           ///< ||W||^2
  double grad_U_sq;      ///< ||grad U||^2
  double boundary_U_sq;  ///< integral of U^2 over the whole boundary
};

struct SampleDiagnostics {
  double t{0.0};
  std::vector<double> u_sq, w_sq, u_l4, grad_u_sq;  ///< per neuron; u_l4 = ||u||_{L4}^4
  std::vector<PairDiagnostics> pairs;               ///< lexicographic (i, j), i < j
  double E{0.0};    ///< sum(||u_i||^2 + ||w_i||^2)
  double E_w{0.0};  ///< C1 sum ||u_i||^2 + sum ||w_i||^2
  double P{0.0};    ///< sum over pairs of ||U||^2 + ||W||^2
  double S{0.0};    ///< sum over pairs of the boundary integral of U^2
  double l4_energy{0.0};  ///< sum(||u_i||_{L4}^4 + ||w_i||^2)
};

/// Quadrature of every functional. `C1` weights E_w.
SampleDiagnostics sample_diagnostics(const NetworkState& state, const Mesh& mesh, double C1);

struct CheckResult {
  std::string name;
  bool pass{false};
  double worst_margin{0.0};  ///< min over checked samples of (bound - value) / |bound|; < 0 is a violation
  double worst_time{0.0};
  double tolerance{0.0};     ///< multiplicative slack or relative tolerance used
  std::string detail;
};

/// Index of the first sample in the trailing `tail_fraction` of the series
/// (at least one sample is always in the tail).
std::size_t tail_start(std::size_t count, double tail_fraction);

/// E(t) <= slack * (pre e^{-rt} E(0) + asymptote) at every sample, with
/// pre = max{C1,1}/min{C1,1}; plus E(t) <= Q on the tail window.
CheckResult check_dissipative_bound(std::span<const SampleDiagnostics> samples, const TheoremConstants& c,
                                    double slack = 1.05, double tail_fraction = 0.2);

/// Tail-window sum(||u_i||_{L4}^4 + ||w_i||^2) <= slack * L.
CheckResult check_l4_bound(std::span<const SampleDiagnostics> samples, const TheoremConstants& c,
                           double slack = 1.05, double tail_fraction = 0.2);

/// Monitor only: compares p * (tail min of S) with R. pass == "satisfied".
CheckResult check_threshold_condition(std::span<const SampleDiagnostics> samples, const TheoremConstants& c,
                                      double p, double tail_fraction = 0.2);

/// Centered-difference dE_w/dt + r E_w <= (1 + rel_slack) rhs + abs_slack at
/// every interior sample, rhs = 2 C1 m ||phi||^2 + 2 C2 m |Omega|.
CheckResult check_gronwall(std::span<const SampleDiagnostics> samples, const TheoremConstants& c,
                           double rel_slack = 0.05, double abs_slack = 0.0);

/// Centered-difference dE_w/dt + r E_w at interior samples 1..n-2.
std::vector<double> gronwall_lhs(std::span<const SampleDiagnostics> samples, double r);

/// Sum over pairs of the tail maximum of ||g_i - g_j||_H = sqrt(||U||^2 + ||W||^2).
double sync_degree_estimate(std::span<const SampleDiagnostics> samples, double tail_fraction = 0.2);

/// Tail maximum over pairs of sqrt(||U||^2 + ||grad U||^2 + ||W||^2).
double tail_difference_energy_norm(std::span<const SampleDiagnostics> samples, double tail_fraction = 0.2);

struct DecayFit {
  double rate;           ///< negated least-squares slope of log(value)
  double log_intercept;
  int samples;
};

/// Fits value ~ exp(log_intercept - rate t) on samples with t in [t_from, t_to].
/// Throws DiagnosticsError for fewer than 10 samples or a nonpositive value.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> value, double t_from, double t_to);

/// Boundary coupling sum over all ordered (i, j) of
///   G_ij = sum_k int_{Gamma_ik} (u_i - u_k)(u_i - u_j) - sum_k int_{Gamma_jk} (u_j - u_k)(u_i - u_j),
/// evaluated piece by piece.
double coupling_G_sum(const Mesh& mesh, const BoundaryPartition& partition, std::span<const Field> u);

/// Sum over all ordered (i, j) of int_Gamma (u_i - u_j)^2.
double pairwise_boundary_sum(const Mesh& mesh, std::span<const Field> u);

/// Sum over all ordered (i, j) of int_Gamma (ut_i - ut_j)(u_i - u_j), where
/// ut_i = u_{pi(i)} face by face. coupling_G_sum equals
/// pairwise_boundary_sum minus this term.
double partner_trace_sum(const Mesh& mesh, const BoundaryPartition& partition, std::span<const Field> u);

}  // namespace fhn
