#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fhn/mesh.hpp"
#include "fhn/params.hpp"
#include "fhn/sparse.hpp"

namespace fhn {

using Field = std::vector<double>;

/// Robin coupling contribution of one face share: neuron i at `node` is
/// forced by `weight * u_partner(node)` (weak form, i.e. already multiplied
/// by the boundary quadrature share).
struct CouplingEntry {
  int node;
  int partner;
  double weight;
};

/// Diffusion operator d*Laplacian for one neuron, with the Robin condition
///   du_i/dnu + p u_i = p u_j  on Gamma_ij
/// eliminated through ghost nodes.
///
/// Stored in weak (stiffness) form: `stiffness()` is S = W A where A is the
/// strong-form finite-difference operator and W the lumped trapezoid
/// weights. S is symmetric, so A is self-adjoint in the discrete L2 inner
/// product <u, v> = sum_n W_n u_n v_n. The Robin self-term sits on the
/// diagonal of S; the +p u_j forcing is the coupling list.
class DiffusionOperator {
public:
  int neuron() const { return neuron_; }
  CouplingMode mode() const { return mode_; }
  const CsrMatrix& stiffness() const { return stiffness_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const CouplingEntry> coupling() const { return coupling_; }
  int size() const { return stiffness_.rows(); }

  /// Strong-form action A u = W^{-1} S u.
  Field apply_strong(std::span<const double> u) const;
  /// Strong-form matrix entry A(row, col).
  double strong_entry(int row, int col) const;
  /// Strong-form Robin self-term magnitude: the value the coupling forcing
  /// balances when all neurons agree (zero away from coupled faces).
  Field robin_self_term(std::span<const double> u) const;

private:
  friend DiffusionOperator assemble_diffusion(const Mesh&, const BoundaryPartition&,
                                              const ModelParams&, int, CouplingMode);
  int neuron_{0};
  CouplingMode mode_{CouplingMode::monolithic};
  CsrMatrix stiffness_;
  std::vector<double> weights_;
  std::vector<CouplingEntry> coupling_;
};

DiffusionOperator assemble_diffusion(const Mesh& mesh, const BoundaryPartition& partition,
                                     const ModelParams& params, int neuron, CouplingMode mode);

/// Zero-flux stiffness: u^T K u = -d ||grad u||^2 (edge-wise differences).
CsrMatrix neumann_stiffness(const Mesh& mesh, double d);

/// Full (m N) x (m N) weak-form operator, neuron-major ordering (i * N + node).
/// Symmetric; annihilates any constant replicated across neurons.
CsrMatrix assemble_monolithic(const Mesh& mesh, const BoundaryPartition& partition,
                              const ModelParams& params);

enum class Form { strong, weak };

/// The +p u_j boundary forcing for op.neuron(). Strong form by default.
Field apply_coupling(const DiffusionOperator& op, std::span<const Field> fields,
                     Form form = Form::strong);

/// Restricts boundary quadrature to Gamma_ij (0-based neurons).
struct PieceFilter {
  const BoundaryPartition* partition;
  int i;
  int j;
};

/// Face-wise trapezoid quadrature of a*b over Gamma (or one piece).
double boundary_integral(const Mesh& mesh, std::span<const double> a, std::span<const double> b,
                         std::optional<PieceFilter> piece = std::nullopt);
/// Integral of v^2 over Gamma or over Gamma_ij.
double boundary_integral_sq(const Mesh& mesh, std::span<const double> v,
                            std::optional<PieceFilter> piece = std::nullopt);

/// Trapezoid nodal quadrature of field^q, q in {1, 2, 4}.
double volume_integral(const Mesh& mesh, std::span<const double> field, int q);

/// Discrete ||grad v||^2 as a sum over grid edges of (difference / h)^2
/// times the edge's dual-cell measure.
double gradient_norm_sq(const Mesh& mesh, std::span<const double> v);

/// Samples a function of (x, y) at every node.
Field interpolate(const Mesh& mesh, const std::function<double(double, double)>& fn);

}  // namespace fhn
