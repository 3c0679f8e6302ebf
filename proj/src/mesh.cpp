#include "fhn/mesh.hpp"

#include <cmath>
#include <sstream>

namespace fhn {

DomainSpec DomainSpec::interval(double length, int nodes) {
  return DomainSpec{DomainKind::interval, length, 1.0, nodes, 1};
}

DomainSpec DomainSpec::rectangle(double lx, double ly, int nx, int ny) {
  return DomainSpec{DomainKind::rectangle, lx, ly, nx, ny};
}

std::string to_string(Edge edge) {
  switch (edge) {
    case Edge::left: return "left";
    case Edge::right: return "right";
    case Edge::bottom: return "bottom";
    case Edge::top: return "top";
  }
  return "unknown";
}

std::optional<Edge> edge_from_string(const std::string& name) {
  if (name == "left") return Edge::left;
  if (name == "right") return Edge::right;
  if (name == "bottom") return Edge::bottom;
  if (name == "top") return Edge::top;
  return std::nullopt;
}

namespace {

double trapezoid_factor(int k, int n) { return (k == 0 || k == n - 1) ? 0.5 : 1.0; }

}  // namespace

Mesh build_mesh(const DomainSpec& spec) {
  if (!(spec.lx > 0.0)) throw MeshError("domain length must be > 0");
  if (spec.nx < 3) throw MeshError("resolution must be >= 3 per axis");

  Mesh mesh;
  mesh.lx_ = spec.lx;
  mesh.nx_ = spec.nx;
  mesh.hx_ = spec.lx / (spec.nx - 1);

  if (spec.kind == DomainKind::interval) {
    mesh.dim_ = 1;
    mesh.ny_ = 1;
    mesh.ly_ = 0.0;
    mesh.hy_ = 1.0;
  } else {
    if (!(spec.ly > 0.0)) throw MeshError("domain length must be > 0");
    if (spec.ny < 3) throw MeshError("resolution must be >= 3 per axis");
    mesh.dim_ = 2;
    mesh.ny_ = spec.ny;
    mesh.ly_ = spec.ly;
    mesh.hy_ = spec.ly / (spec.ny - 1);
  }

  const int nx = mesh.nx_, ny = mesh.ny_;
  mesh.weights_.resize(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const double wy = mesh.dim_ == 2 ? mesh.hy_ * trapezoid_factor(j, ny) : 1.0;
    for (int i = 0; i < nx; ++i) {
      const int n = mesh.index(i, j);
      mesh.weights_[n] = mesh.hx_ * trapezoid_factor(i, nx) * wy;
      const bool on_boundary =
          i == 0 || i == nx - 1 || (mesh.dim_ == 2 && (j == 0 || j == ny - 1));
      (on_boundary ? mesh.boundary_ : mesh.interior_).push_back(n);
    }
  }
  mesh.volume_ = mesh.dim_ == 2 ? spec.lx * spec.ly : spec.lx;

  auto& faces = mesh.faces_;
  if (mesh.dim_ == 1) {
    faces.push_back({Edge::left, 0, {0, 0}, 1, 1.0, 0.0, 0.0});
    faces.push_back({Edge::right, 0, {nx - 1, nx - 1}, 1, 1.0, 0.0, 0.0});
  } else {
    for (int i = 0; i + 1 < nx; ++i)
      faces.push_back({Edge::bottom, 1, {mesh.index(i, 0), mesh.index(i + 1, 0)}, 2, mesh.hx_,
                       mesh.x(i), mesh.x(i + 1)});
    for (int i = 0; i + 1 < nx; ++i)
      faces.push_back({Edge::top, 1, {mesh.index(i, ny - 1), mesh.index(i + 1, ny - 1)}, 2,
                       mesh.hx_, mesh.x(i), mesh.x(i + 1)});
    for (int j = 0; j + 1 < ny; ++j)
      faces.push_back({Edge::left, 0, {mesh.index(0, j), mesh.index(0, j + 1)}, 2, mesh.hy_,
                       mesh.y(j), mesh.y(j + 1)});
    for (int j = 0; j + 1 < ny; ++j)
      faces.push_back({Edge::right, 0, {mesh.index(nx - 1, j), mesh.index(nx - 1, j + 1)}, 2,
                       mesh.hy_, mesh.y(j), mesh.y(j + 1)});
  }
  // exact perimeter rather than the accumulated face sum
  mesh.boundary_measure_ = mesh.dim_ == 2 ? 2.0 * (spec.lx + spec.ly) : 2.0;
  return mesh;
}

BoundaryPartition make_partition(const Mesh& mesh, int m, std::vector<std::vector<int>> table) {
  if (m < 1) throw PartitionError("partition needs at least one neuron");
  if (static_cast<int>(table.size()) != static_cast<int>(mesh.faces().size())) {
    std::ostringstream os;
    os << "partition has " << table.size() << " face entries, mesh has " << mesh.faces().size();
    throw PartitionError(os.str());
  }
  for (std::size_t f = 0; f < table.size(); ++f) {
    const auto& pi = table[f];
    if (static_cast<int>(pi.size()) < m) {
      std::ostringstream os;
      os << "face " << f << " unlabeled for neuron " << pi.size() + 1;
      throw PartitionError(os.str());
    }
    if (static_cast<int>(pi.size()) > m) {
      std::ostringstream os;
      os << "face " << f << " has " << pi.size() << " labels, expected " << m;
      throw PartitionError(os.str());
    }
    for (int i = 0; i < m; ++i) {
      if (pi[i] < 0 || pi[i] >= m) {
        std::ostringstream os;
        os << "face " << f << ": partner " << pi[i] + 1 << " of neuron " << i + 1
           << " is not a neuron index in 1.." << m;
        throw PartitionError(os.str());
      }
    }
    for (int i = 0; i < m; ++i) {
      const int j = pi[i];
      if (pi[j] != i) {
        std::ostringstream os;
        os << "partition not involutive at face " << f << ": pi(" << i + 1 << ")=" << j + 1
           << " but pi(" << j + 1 << ")=" << pi[j] + 1;
        throw PartitionError(os.str());
      }
    }
  }
  BoundaryPartition partition;
  partition.m_ = m;
  partition.partner_ = std::move(table);
  return partition;
}

BoundaryPartition zero_flux_partition(const Mesh& mesh, int m) {
  std::vector<int> identity(m);
  for (int i = 0; i < m; ++i) identity[i] = i;
  return make_partition(mesh, m, std::vector<std::vector<int>>(mesh.faces().size(), identity));
}

BoundaryPartition all_to_all_pair_partition(const Mesh& mesh, int m) {
  if (m != 2) throw PartitionError("all_to_all preset needs m = 2; list segments for m > 2");
  return make_partition(mesh, m, std::vector<std::vector<int>>(mesh.faces().size(), {1, 0}));
}

namespace {

bool on_grid(double coord, double h) {
  const double k = coord / h;
  return std::abs(k - std::round(k)) < 1e-9;
}

}  // namespace

BoundaryPartition build_boundary_partition(const Mesh& mesh, const PartitionSpec& spec, int m) {
  switch (spec.preset) {
    case PartitionSpec::Preset::zero_flux: return zero_flux_partition(mesh, m);
    case PartitionSpec::Preset::all_to_all: return all_to_all_pair_partition(mesh, m);
    case PartitionSpec::Preset::none: break;
  }

  const auto faces = mesh.faces();
  std::vector<std::vector<int>> table(faces.size());
  std::vector<int> owner(faces.size(), -1);

  for (std::size_t s = 0; s < spec.segments.size(); ++s) {
    const auto& seg = spec.segments[s];
    if (mesh.dim() == 1 && (seg.edge == Edge::bottom || seg.edge == Edge::top))
      throw PartitionError("segment " + std::to_string(s) + ": an interval has no " +
                           to_string(seg.edge) + " edge");
    const bool along_x = seg.edge == Edge::bottom || seg.edge == Edge::top;
    const double length = along_x ? mesh.lx() : mesh.ly();
    const double h = along_x ? mesh.hx() : mesh.hy();
    const double from = seg.from.value_or(0.0);
    const double to = seg.to.value_or(length);
    if (mesh.dim() == 2) {
      if (!(from >= -1e-12 && to <= length * (1 + 1e-12) && from < to))
        throw PartitionError("segment " + std::to_string(s) + ": range must satisfy 0 <= from < to <= edge length");
      if (!on_grid(from, h) || !on_grid(to, h))
        throw PartitionError("segment " + std::to_string(s) +
                             ": endpoints must coincide with mesh nodes (sub-face labels are unsupported)");
    }
    std::vector<int> zero_based(seg.partner.size());
    for (std::size_t i = 0; i < seg.partner.size(); ++i) zero_based[i] = seg.partner[i] - 1;

    const double tol = 1e-9 * h;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const auto& face = faces[f];
      if (face.edge != seg.edge) continue;
      if (mesh.dim() == 2 && (face.lo < from - tol || face.hi > to + tol)) continue;
      if (owner[f] >= 0)
        throw PartitionError("face " + std::to_string(f) + " labeled by segments " +
                             std::to_string(owner[f]) + " and " + std::to_string(s));
      owner[f] = static_cast<int>(s);
      table[f] = zero_based;
    }
  }
  for (std::size_t f = 0; f < faces.size(); ++f)
    if (owner[f] < 0)
      throw PartitionError("face " + std::to_string(f) + " on edge " + to_string(faces[f].edge) +
                           " unlabeled for neuron 1");
  return make_partition(mesh, m, std::move(table));
}

double piece_measure(const BoundaryPartition& partition, const Mesh& mesh, int i, int j) {
  double total = 0.0;
  const auto faces = mesh.faces();
  for (int f = 0; f < partition.num_faces(); ++f)
    if (partition.partner(f, i) == j) total += faces[f].measure;
  return total;
}

}  // namespace fhn
