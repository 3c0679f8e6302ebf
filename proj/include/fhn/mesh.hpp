#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhn {

enum class DomainKind { interval, rectangle };

/// Interval [0, lx] or rectangle [0, lx] x [0, ly], with nodes per axis.
struct DomainSpec {
  DomainKind kind{DomainKind::rectangle};
  double lx{1.0};
  double ly{1.0};
  int nx{17};
  int ny{17};

  static DomainSpec interval(double length, int nodes);
  static DomainSpec rectangle(double lx, double ly, int nx, int ny);
};

class MeshError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Boundary pieces of the domain. An interval only has `left` and `right`.
enum class Edge { left, right, bottom, top };

std::string to_string(Edge edge);
std::optional<Edge> edge_from_string(const std::string& name);

/// One boundary face. In 2D this is the edge segment between two adjacent
/// boundary nodes; in 1D it is an endpoint carrying unit (counting) measure.
/// Quadrature splits the measure equally between the face's nodes.
struct BoundaryFace {
  Edge edge;
  int normal_axis;           ///< 0 for x-normal faces, 1 for y-normal faces
  std::array<int, 2> nodes;  ///< node indices; both equal in 1D
  int node_count;            ///< 1 in 1D, 2 in 2D
  double measure;
  double lo, hi;             ///< extent along the edge (0, 0 in 1D)
};

/// Uniform tensor grid with trapezoid volume weights and boundary faces.
class Mesh {
public:
  int dim() const { return dim_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  int num_nodes() const { return nx_ * ny_; }
  int index(int i, int j) const { return j * nx_ + i; }
  double x(int i) const { return i * hx_; }
  double y(int j) const { return dim_ == 2 ? j * hy_ : 0.0; }
  double x_of(int node) const { return x(node % nx_); }
  double y_of(int node) const { return y(node / nx_); }

  /// Lumped (trapezoid) quadrature weight of each node; sums to |Omega|.
  std::span<const double> weights() const { return weights_; }
  std::span<const int> interior_nodes() const { return interior_; }
  std::span<const int> boundary_nodes() const { return boundary_; }
  std::span<const BoundaryFace> faces() const { return faces_; }

  double volume() const { return volume_; }
  double boundary_measure() const { return boundary_measure_; }

private:
  friend Mesh build_mesh(const DomainSpec& spec);
  int dim_{2};
  int nx_{0}, ny_{1};
  double lx_{0}, ly_{0}, hx_{0}, hy_{1};
  std::vector<double> weights_;
  std::vector<int> interior_, boundary_;
  std::vector<BoundaryFace> faces_;
  double volume_{0}, boundary_measure_{0};
};

Mesh build_mesh(const DomainSpec& spec);

class PartitionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// One labeled stretch of boundary: every face of `edge` inside [from, to]
/// gets the partner table `partner` (1-based: partner[i-1] = j means the face
/// lies in Gamma_ij for neuron i). `from`/`to` must fall on node coordinates.
struct PartitionSegment {
  Edge edge{Edge::left};
  std::optional<double> from;
  std::optional<double> to;
  std::vector<int> partner;
};

/// How the boundary is labeled in a run config.
struct PartitionSpec {
  enum class Preset { none, zero_flux, all_to_all };
  Preset preset{Preset::none};
  std::vector<PartitionSegment> segments;
};

/// Per-face partner involution over neurons 0..m-1 (0-based internally).
class BoundaryPartition {
public:
  int m() const { return m_; }
  int num_faces() const { return static_cast<int>(partner_.size()); }
  int partner(int face, int neuron) const { return partner_[face][neuron]; }

private:
  friend BoundaryPartition make_partition(const Mesh&, int, std::vector<std::vector<int>>);
  int m_{0};
  std::vector<std::vector<int>> partner_;
};

/// Validates a 0-based per-face table. Throws PartitionError on a wrong face
/// count, a missing label ("face unlabeled for neuron i"), an out-of-range
/// partner, or a non-involutive table ("partition not involutive").
BoundaryPartition make_partition(const Mesh& mesh, int m, std::vector<std::vector<int>> table);

/// Resolves a config-level description onto the mesh faces.
BoundaryPartition build_boundary_partition(const Mesh& mesh, const PartitionSpec& spec, int m);

BoundaryPartition zero_flux_partition(const Mesh& mesh, int m);
/// Every face pairs neuron 1 with neuron 2; requires m == 2.
BoundaryPartition all_to_all_pair_partition(const Mesh& mesh, int m);

/// Measure of Gamma_ij (0-based neurons): total measure of faces with pi(i) = j.
double piece_measure(const BoundaryPartition& partition, const Mesh& mesh, int i, int j);

}  // namespace fhn
