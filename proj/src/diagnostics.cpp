#include "fhn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fhn/operators.hpp"

namespace fhn {

namespace {

Field difference(const Field& a, const Field& b) {
  Field d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return d;
}

double margin(double bound, double value) {
  return (bound - value) / std::max(std::abs(bound), std::numeric_limits<double>::min());
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

SampleDiagnostics sample_diagnostics(const NetworkState& state, const Mesh& mesh, double C1) {
  SampleDiagnostics d;
  d.t = state.t;
  const int m = state.m();
  for (int i = 0; i < m; ++i) {
    d.u_sq.push_back(volume_integral(mesh, state.u[i], 2));
    d.w_sq.push_back(volume_integral(mesh, state.w[i], 2));
    d.u_l4.push_back(volume_integral(mesh, state.u[i], 4));
    d.grad_u_sq.push_back(gradient_norm_sq(mesh, state.u[i]));
    d.E += d.u_sq[i] + d.w_sq[i];
    d.E_w += C1 * d.u_sq[i] + d.w_sq[i];
    d.l4_energy += d.u_l4[i] + d.w_sq[i];
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Field U = difference(state.u[i], state.u[j]);
      const Field W = difference(state.w[i], state.w[j]);
      PairDiagnostics p{i, j, volume_integral(mesh, U, 2), volume_integral(mesh, W, 2),
                        gradient_norm_sq(mesh, U), boundary_integral_sq(mesh, U)};
      d.P += p.U_sq + p.W_sq;
      d.S += p.boundary_U_sq;
      d.pairs.push_back(p);
    }
  }
  return d;
}

std::size_t tail_start(std::size_t count, double tail_fraction) {
  if (count == 0) return 0;
  const double f = std::clamp(tail_fraction, 0.0, 1.0);
  const auto start = static_cast<std::size_t>(std::floor(static_cast<double>(count) * (1.0 - f)));
  return std::min(start, count - 1);
}

CheckResult check_dissipative_bound(std::span<const SampleDiagnostics> samples, const TheoremConstants& c,
                                    double slack, double tail_fraction) {
  CheckResult res{"dissipative_bound", true, std::numeric_limits<double>::infinity(), 0.0, slack, ""};
  if (samples.empty()) {
    res.detail = "no samples";
    return res;
  }
  const double t0 = samples.front().t;
  const double e0 = samples.front().E;
  for (const auto& s : samples) {
    const double bound = slack * (c.decay_prefactor * std::exp(-c.r * (s.t - t0)) * e0 + c.energy_asymptote);
    const double mg = margin(bound, s.E);
    if (mg < res.worst_margin) {
      res.worst_margin = mg;
      res.worst_time = s.t;
    }
    if (s.E > bound || !std::isfinite(s.E)) res.pass = false;
  }
  double ball_worst = std::numeric_limits<double>::infinity();
  double ball_time = 0.0;
  for (std::size_t k = tail_start(samples.size(), tail_fraction); k < samples.size(); ++k) {
    const double mg = margin(c.Q, samples[k].E);
    if (mg < ball_worst) {
      ball_worst = mg;
      ball_time = samples[k].t;
    }
  }
  const bool in_ball = ball_worst >= 0.0;
  res.pass = res.pass && in_ball;
  res.detail = std::string(res.pass ? "" : "violated; ") + "worst bound margin " + fmt(res.worst_margin) +
               " at t=" + fmt(res.worst_time) + "; tail E <= Q " + (in_ball ? "holds" : "fails") +
               " (worst margin " + fmt(ball_worst) + " at t=" + fmt(ball_time) + ")";
  return res;
}

CheckResult check_l4_bound(std::span<const SampleDiagnostics> samples, const TheoremConstants& c,
                           double slack, double tail_fraction) {
  CheckResult res{"l4_bound", true, std::numeric_limits<double>::infinity(), 0.0, slack, ""};
  const double bound = slack * c.L;
  for (std::size_t k = tail_start(samples.size(), tail_fraction); k < samples.size(); ++k) {
    const double mg = margin(bound, samples[k].l4_energy);
    if (mg < res.worst_margin) {
      res.worst_margin = mg;
      res.worst_time = samples[k].t;
    }
    if (!(samples[k].l4_energy <= bound)) res.pass = false;
  }
  res.detail = "tail max of sum(||u||_L4^4 + ||w||^2) vs L=" + fmt(c.L) + ", worst margin " +
               fmt(res.worst_margin) + " at t=" + fmt(res.worst_time);
  return res;
}

CheckResult check_threshold_condition(std::span<const SampleDiagnostics> samples, const TheoremConstants& c,
                                      double p, double tail_fraction) {
  CheckResult res{"threshold_condition", false, 0.0, 0.0, 0.0, ""};
  if (!(p > 0.0) || samples.empty()) {
    res.worst_margin = -1.0;
    res.detail = "monitor: p must be > 0; condition unsatisfied";
    return res;
  }
  double smin = std::numeric_limits<double>::infinity();
  for (std::size_t k = tail_start(samples.size(), tail_fraction); k < samples.size(); ++k) {
    if (samples[k].S < smin) {
      smin = samples[k].S;
      res.worst_time = samples[k].t;
    }
  }
  const double lhs = p * smin;
  res.pass = lhs > c.R;
  res.worst_margin = (lhs - c.R) / c.R;
  res.detail = "monitor: p*tailmin(S)=" + fmt(lhs) + " vs R=" + fmt(c.R) + (res.pass ? " satisfied" : " unsatisfied");
  return res;
}

std::vector<double> gronwall_lhs(std::span<const SampleDiagnostics> samples, double r) {
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const double dedt = (samples[k + 1].E_w - samples[k - 1].E_w) / (samples[k + 1].t - samples[k - 1].t);
    out.push_back(dedt + r * samples[k].E_w);
  }
  return out;
}

CheckResult check_gronwall(std::span<const SampleDiagnostics> samples, const TheoremConstants& c,
                           double rel_slack, double abs_slack) {
  CheckResult res{"gronwall", true, std::numeric_limits<double>::infinity(), 0.0, rel_slack, ""};
  const double bound = (1.0 + rel_slack) * c.gronwall_rhs + abs_slack;
  const auto lhs = gronwall_lhs(samples, c.r);
  int violations = 0;
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    const double mg = margin(bound, lhs[k]);
    if (mg < res.worst_margin) {
      res.worst_margin = mg;
      res.worst_time = samples[k + 1].t;
    }
    if (!(lhs[k] <= bound)) ++violations;
  }
  res.pass = violations == 0;
  res.detail = std::to_string(violations) + " violations over " + std::to_string(lhs.size()) +
               " interior samples; rhs=" + fmt(c.gronwall_rhs) + ", abs slack=" + fmt(abs_slack);
  return res;
}

double sync_degree_estimate(std::span<const SampleDiagnostics> samples, double tail_fraction) {
  if (samples.empty()) throw DiagnosticsError("sync_degree_estimate: empty trajectory");
  const std::size_t start = tail_start(samples.size(), tail_fraction);
  const std::size_t pairs = samples.front().pairs.size();
  double total = 0.0;
  for (std::size_t q = 0; q < pairs; ++q) {
    double mx = 0.0;
    for (std::size_t k = start; k < samples.size(); ++k)
      mx = std::max(mx, std::sqrt(samples[k].pairs[q].U_sq + samples[k].pairs[q].W_sq));
    total += mx;
  }
  return total;
}

double tail_difference_energy_norm(std::span<const SampleDiagnostics> samples, double tail_fraction) {
  double mx = 0.0;
  for (std::size_t k = tail_start(samples.size(), tail_fraction); k < samples.size(); ++k)
    for (const auto& p : samples[k].pairs) mx = std::max(mx, std::sqrt(p.U_sq + p.grad_U_sq + p.W_sq));
  return mx;
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> value, double t_from, double t_to) {
  if (t.size() != value.size()) throw DiagnosticsError("fit_decay_rate: size mismatch");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_from || t[k] > t_to) continue;
    if (!(value[k] > 0.0)) {
      std::ostringstream os;
      os << "fit_decay_rate: nonpositive value " << value[k] << " at t=" << t[k] << "; rate undefined";
      throw DiagnosticsError(os.str());
    }
    xs.push_back(t[k]);
    ys.push_back(std::log(value[k]));
  }
  if (xs.size() < 10) throw DiagnosticsError("fit_decay_rate: need at least 10 samples in the window");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (!(sxx > 0.0)) throw DiagnosticsError("fit_decay_rate: window has no time spread");
  const double slope = sxy / sxx;
  return {-slope, my - slope * mx, static_cast<int>(xs.size())};
}

double coupling_G_sum(const Mesh& mesh, const BoundaryPartition& partition, std::span<const Field> u) {
  const int m = partition.m();
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Field uij = difference(u[i], u[j]);
      for (int k = 0; k < m; ++k) {
        total += boundary_integral(mesh, difference(u[i], u[k]), uij, PieceFilter{&partition, i, k});
        total -= boundary_integral(mesh, difference(u[j], u[k]), uij, PieceFilter{&partition, j, k});
      }
    }
  }
  return total;
}

double pairwise_boundary_sum(const Mesh& mesh, std::span<const Field> u) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) total += boundary_integral_sq(mesh, difference(u[i], u[j]));
  return total;
}

double partner_trace_sum(const Mesh& mesh, const BoundaryPartition& partition, std::span<const Field> u) {
  const int m = partition.m();
  const auto faces = mesh.faces();
  double total = 0.0;
  for (int f = 0; f < partition.num_faces(); ++f) {
    const auto& face = faces[f];
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const auto& ti = u[partition.partner(f, i)];
        const auto& tj = u[partition.partner(f, j)];
        double mean = 0.0;
        for (int q = 0; q < face.node_count; ++q) {
          const int nd = face.nodes[q];
          mean += (ti[nd] - tj[nd]) * (u[i][nd] - u[j][nd]);
        }
        total += face.measure * mean / face.node_count;
      }
    }
  }
  return total;
}

}  // namespace fhn
