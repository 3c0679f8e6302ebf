#include "fhn/operators.hpp"

#include <map>
#include <stdexcept>

namespace fhn {

namespace {

/// Calls visit(a, b, coefficient) for every grid edge, where coefficient is
/// the edge's dual-cell measure divided by its length.
template <typename Visit>
void for_each_edge(const Mesh& mesh, Visit&& visit) {
  const int nx = mesh.nx(), ny = mesh.ny();
  auto trap = [](int k, int n) { return (k == 0 || k == n - 1) ? 0.5 : 1.0; };
  for (int j = 0; j < ny; ++j) {
    const double wy = mesh.dim() == 2 ? mesh.hy() * trap(j, ny) : 1.0;
    for (int i = 0; i + 1 < nx; ++i) visit(mesh.index(i, j), mesh.index(i + 1, j), wy / mesh.hx());
  }
  if (mesh.dim() == 2) {
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i)
        visit(mesh.index(i, j), mesh.index(i, j + 1), mesh.hx() * trap(i, nx) / mesh.hy());
  }
}

std::vector<Triplet> neumann_triplets(const Mesh& mesh, double d, int offset) {
  std::vector<Triplet> t;
  for_each_edge(mesh, [&](int a, int b, double c) {
    const double k = d * c;
    t.push_back({offset + a, offset + a, -k});
    t.push_back({offset + b, offset + b, -k});
    t.push_back({offset + a, offset + b, k});
    t.push_back({offset + b, offset + a, k});
  });
  return t;
}

/// Robin coupling entries of one neuron, merged per (node, partner) and
/// accumulated in face order.
std::vector<CouplingEntry> coupling_entries(const Mesh& mesh, const BoundaryPartition& partition,
                                            const ModelParams& params, int neuron) {
  std::vector<CouplingEntry> out;
  if (params.p == 0.0) return out;
  std::map<std::pair<int, int>, double> merged;
  const auto faces = mesh.faces();
  for (int f = 0; f < partition.num_faces(); ++f) {
    const int j = partition.partner(f, neuron);
    if (j == neuron) continue;
    const auto& face = faces[f];
    const double share = face.measure / face.node_count;
    for (int k = 0; k < face.node_count; ++k)
      merged[{face.nodes[k], j}] += params.d * params.p * share;
  }
  out.reserve(merged.size());
  for (const auto& [key, w] : merged) out.push_back({key.first, key.second, w});
  return out;
}

void check_sizes(const Mesh& mesh, const BoundaryPartition& partition) {
  if (partition.num_faces() != static_cast<int>(mesh.faces().size()))
    throw std::invalid_argument("partition and mesh disagree on the number of boundary faces");
}

}  // namespace

CsrMatrix neumann_stiffness(const Mesh& mesh, double d) {
  const int n = mesh.num_nodes();
  return CsrMatrix::from_triplets(n, n, neumann_triplets(mesh, d, 0));
}

DiffusionOperator assemble_diffusion(const Mesh& mesh, const BoundaryPartition& partition,
                                     const ModelParams& params, int neuron, CouplingMode mode) {
  check_sizes(mesh, partition);
  if (neuron < 0 || neuron >= partition.m())
    throw std::invalid_argument("neuron index outside the partition");

  DiffusionOperator op;
  op.neuron_ = neuron;
  op.mode_ = mode;
  op.weights_.assign(mesh.weights().begin(), mesh.weights().end());
  op.coupling_ = coupling_entries(mesh, partition, params, neuron);

  auto t = neumann_triplets(mesh, params.d, 0);
  for (const auto& e : op.coupling_) t.push_back({e.node, e.node, -e.weight});
  const int n = mesh.num_nodes();
  op.stiffness_ = CsrMatrix::from_triplets(n, n, std::move(t));
  return op;
}

Field DiffusionOperator::apply_strong(std::span<const double> u) const {
  Field y = stiffness_.multiply(u);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] /= weights_[k];
  return y;
}

double DiffusionOperator::strong_entry(int row, int col) const {
  return stiffness_.at(row, col) / weights_[row];
}

Field DiffusionOperator::robin_self_term(std::span<const double> u) const {
  Field out(u.size(), 0.0);
  for (const auto& e : coupling_) out[e.node] += e.weight * u[e.node];
  for (std::size_t k = 0; k < out.size(); ++k) out[k] /= weights_[k];
  return out;
}

CsrMatrix assemble_monolithic(const Mesh& mesh, const BoundaryPartition& partition,
                              const ModelParams& params) {
  check_sizes(mesh, partition);
  const int n = mesh.num_nodes();
  const int m = partition.m();
  std::vector<Triplet> t;
  for (int i = 0; i < m; ++i) {
    auto block = neumann_triplets(mesh, params.d, i * n);
    t.insert(t.end(), block.begin(), block.end());
    for (const auto& e : coupling_entries(mesh, partition, params, i)) {
      t.push_back({i * n + e.node, i * n + e.node, -e.weight});
      t.push_back({i * n + e.node, e.partner * n + e.node, e.weight});
    }
  }
  return CsrMatrix::from_triplets(m * n, m * n, std::move(t));
}

Field apply_coupling(const DiffusionOperator& op, std::span<const Field> fields, Form form) {
  const auto n = static_cast<std::size_t>(op.size());
  for (const auto& f : fields)
    if (f.size() != n) throw std::invalid_argument("apply_coupling: field size mismatch");
  Field out(n, 0.0);
  for (const auto& e : op.coupling()) out[e.node] += e.weight * fields[e.partner][e.node];
  if (form == Form::strong)
    for (std::size_t k = 0; k < n; ++k) out[k] /= op.weights()[k];
  return out;
}

double boundary_integral(const Mesh& mesh, std::span<const double> a, std::span<const double> b,
                         std::optional<PieceFilter> piece) {
  const auto faces = mesh.faces();
  double total = 0.0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (piece && piece->partition->partner(static_cast<int>(f), piece->i) != piece->j) continue;
    const auto& face = faces[f];
    double mean = 0.0;
    for (int k = 0; k < face.node_count; ++k) mean += a[face.nodes[k]] * b[face.nodes[k]];
    total += face.measure * mean / face.node_count;
  }
  return total;
}

double boundary_integral_sq(const Mesh& mesh, std::span<const double> v,
                            std::optional<PieceFilter> piece) {
  return boundary_integral(mesh, v, v, piece);
}

double volume_integral(const Mesh& mesh, std::span<const double> field, int q) {
  if (q != 1 && q != 2 && q != 4) throw std::invalid_argument("volume_integral: q must be 1, 2 or 4");
  const auto w = mesh.weights();
  double total = 0.0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const double v = field[k];
    const double v2 = v * v;
    total += w[k] * (q == 1 ? v : q == 2 ? v2 : v2 * v2);
  }
  return total;
}

double gradient_norm_sq(const Mesh& mesh, std::span<const double> v) {
  double total = 0.0;
  for_each_edge(mesh, [&](int a, int b, double c) {
    const double diff = v[b] - v[a];
    total += c * diff * diff;
  });
  return total;
}

Field interpolate(const Mesh& mesh, const std::function<double(double, double)>& fn) {
  Field out(mesh.num_nodes());
  for (int k = 0; k < mesh.num_nodes(); ++k) out[k] = fn(mesh.x_of(k), mesh.y_of(k));
  return out;
}

}  // namespace fhn
