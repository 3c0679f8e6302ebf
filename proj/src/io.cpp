#include "fhn/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace fhn {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> timeseries_header(int m) {
  std::vector<std::string> h{"t", "E", "E_w", "P", "S", "l4_energy"};
  for (int i = 1; i <= m; ++i)
    for (const char* name : {"u_sq_", "w_sq_", "u_l4_", "grad_u_sq_"}) h.push_back(name + std::to_string(i));
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      for (const char* name : {"U_sq_", "W_sq_", "grad_U_sq_", "bnd_U_sq_"})
        h.push_back(name + std::to_string(i) + "_" + std::to_string(j));
  return h;
}

std::vector<double> timeseries_row(const SampleDiagnostics& s) {
  std::vector<double> r{s.t, s.E, s.E_w, s.P, s.S, s.l4_energy};
  for (std::size_t i = 0; i < s.u_sq.size(); ++i) {
    r.push_back(s.u_sq[i]);
    r.push_back(s.w_sq[i]);
    r.push_back(s.u_l4[i]);
    r.push_back(s.grad_u_sq[i]);
  }
  for (const auto& p : s.pairs) {
    r.push_back(p.U_sq);
    r.push_back(p.W_sq);
    r.push_back(p.grad_U_sq);
    r.push_back(p.boundary_U_sq);
  }
  return r;
}

void write_timeseries(std::ostream& out, const std::vector<SampleDiagnostics>& samples, int m) {
  const auto header = timeseries_header(m);
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& s : samples) {
    const auto row = timeseries_row(s);
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_number(row[k]);
    out << '\n';
  }
}

namespace {

nlohmann::json check_json(const CheckResult& c) {
  return {{"name", c.name},
          {"pass", c.pass},
          {"worst_margin", c.worst_margin},
          {"worst_time", c.worst_time},
          {"tolerance", c.tolerance},
          {"detail", c.detail}};
}

}  // namespace

std::string summary_json(const RunConfig& config, const SimulationContext& ctx, const Trajectory& traj,
                         const RunReport& report) {
  using nlohmann::json;
  const auto& m = config.model;
  json j;
  j["model"] = {{"d", m.d}, {"sigma", m.sigma}, {"J", m.J}, {"epsilon", m.epsilon},
                {"a", m.a}, {"b", m.b},         {"p", m.p}, {"m", m.m}};
  j["run"] = {{"dt", config.run.dt},
              {"t_end", config.run.t_end},
              {"output_stride", config.run.output_stride},
              {"solver_tol", config.run.solver_tol},
              {"coupling_mode", to_string(config.run.resolved_mode(m.m))},
              {"scheme", to_string(config.run.scheme)}};
  j["kinetics"] = config.kinetics.name();
  j["mesh"] = {{"dim", ctx.mesh.dim()},
               {"nx", ctx.mesh.nx()},
               {"ny", ctx.mesh.ny()},
               {"volume", ctx.mesh.volume()},
               {"boundary_measure", ctx.mesh.boundary_measure()}};
  j["poincare"] = {{"eta1", ctx.poincare.eta1}, {"eta2", ctx.poincare.eta2}, {"method", ctx.poincare.method}};

  if (ctx.assumption) {
    const auto& a = *ctx.assumption;
    j["assumption_constants"] = {{"lambda", a.lambda}, {"phi", a.phi},   {"alpha", a.alpha}, {"zeta", a.zeta},
                                 {"beta", a.beta},     {"xi", a.xi},     {"gamma", a.gamma}};
  }
  if (ctx.constants) {
    json cs = json::array();
    for (const auto& line : constants_report(*ctx.constants))
      cs.push_back({{"name", line.name},
                    {"value", line.value ? json(*line.value) : json("not numerically determined")},
                    {"formula", line.formula}});
    j["constants"] = cs;
  } else {
    j["constants"] = "unavailable for zero kinetics";
  }

  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back(check_json(c));
  j["checks"] = checks;
  if (report.pair_decay)
    j["pair_decay_fit"] = {{"rate", report.pair_decay->rate}, {"samples", report.pair_decay->samples}};
  else
    j["pair_decay_fit"] = {{"rate", nullptr}, {"note", report.pair_decay_note}};
  if (ctx.constants) j["pair_decay_fit"]["mu"] = ctx.constants->mu;
  j["sync_degree"] = report.sync_degree;
  j["tail_max_difference_energy_norm"] = report.tail_difference_energy;
  j["p_tail_min_S"] = report.p_tail_min_S;
  j["samples"] = traj.samples.size();
  j["final_time"] = traj.final_state.t;
  return j.dump(2) + "\n";
}

void write_snapshot(const std::filesystem::path& dir, const Mesh& mesh, const NetworkState& state,
                    std::size_t sample_index) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < state.m(); ++i) {
    for (const char field : {'u', 'w'}) {
      const auto& values = field == 'u' ? state.u[i] : state.w[i];
      std::ostringstream name;
      name << "snap_" << std::setw(6) << std::setfill('0') << sample_index << '_' << field << i + 1 << ".txt";
      std::ofstream out(dir / name.str());
      if (!out) throw std::runtime_error("cannot write snapshot " + (dir / name.str()).string());
      out << "time " << format_number(state.t) << '\n'
          << "dims " << mesh.nx() << ' ' << mesh.ny() << '\n'
          << "neuron " << i + 1 << '\n';
      for (int r = 0; r < mesh.ny(); ++r) {
        for (int c = 0; c < mesh.nx(); ++c) out << (c ? " " : "") << format_number(values[mesh.index(c, r)]);
        out << '\n';
      }
    }
  }
}

void write_sweep_summary(std::ostream& out, const std::string& param, const std::vector<SweepRow>& rows) {
  out << param << ",status,sync_degree,decay_rate,p_tail_min_S,R\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : rows) {
    out << format_number(r.value) << ',' << (r.ok ? "ok" : "failed") << ',';
    if (r.ok)
      out << format_number(r.sync_degree) << ',' << opt(r.decay_rate) << ',' << format_number(r.p_tail_min_S) << ','
          << opt(r.R);
    else
      out << ",,,";
    out << '\n';
  }
}

}  // namespace fhn
