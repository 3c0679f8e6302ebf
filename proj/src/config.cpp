#include "fhn/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace fhn {

namespace {

std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.is_null()) return "";
  return " (line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1) + ")";
}

[[noreturn]] void fail(const std::string& path, const std::string& message, const YAML::Node& node) {
  throw ConfigError(path + ": " + message + where(node));
}

void check_map(const YAML::Node& node, const std::string& path, std::set<std::string> allowed) {
  if (!node.IsMap()) fail(path, "expected a mapping", node);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(path, "unknown key '" + key + "'", kv.first);
  }
}

template <typename T>
void read(const YAML::Node& parent, const std::string& key, const std::string& path, T& out) {
  const auto node = parent[key];
  if (!node) return;
  try {
    out = node.as<T>();
  } catch (const YAML::Exception&) {
    fail(path + "." + key, "invalid value '" + YAML::Dump(node) + "'", node);
  }
}

template <typename T>
void read_optional(const YAML::Node& parent, const std::string& key, const std::string& path,
                   std::optional<T>& out) {
  if (!parent[key]) return;
  T v{};
  read(parent, key, path, v);
  out = v;
}

std::string read_string(const YAML::Node& parent, const std::string& key, const std::string& path,
                        const std::string& fallback) {
  std::string s = fallback;
  read(parent, key, path, s);
  return s;
}

FieldInit parse_field(const YAML::Node& node, const std::string& path) {
  FieldInit f;
  if (!node) return f;
  check_map(node, path, {"kind", "value", "amplitude", "center", "width", "seed"});
  const auto kind = read_string(node, "kind", path, "constant");
  if (kind == "constant") f.kind = FieldInit::Kind::constant;
  else if (kind == "bump") f.kind = FieldInit::Kind::bump;
  else if (kind == "random") f.kind = FieldInit::Kind::random;
  else fail(path + ".kind", "expected constant, bump or random", node["kind"]);
  read(node, "value", path, f.value);
  read(node, "amplitude", path, f.amplitude);
  read(node, "width", path, f.width);
  if (node["center"]) {
    std::vector<double> c;
    read(node, "center", path, c);
    if (c.empty() || c.size() > 2) fail(path + ".center", "expected [x] or [x, y]", node["center"]);
    f.center[0] = c[0];
    if (c.size() == 2) f.center[1] = c[1];
  }
  read_optional(node, "seed", path, f.seed);
  if (f.kind == FieldInit::Kind::bump && !(f.width > 0.0)) fail(path + ".width", "width must be > 0", node);
  if (f.kind == FieldInit::Kind::random && !(f.amplitude >= 0.0))
    fail(path + ".amplitude", "amplitude must be >= 0", node);
  return f;
}

void parse_model(const YAML::Node& node, ModelParams& m) {
  check_map(node, "model", {"d", "sigma", "J", "epsilon", "a", "b", "p", "m"});
  read(node, "d", "model", m.d);
  read(node, "sigma", "model", m.sigma);
  read(node, "J", "model", m.J);
  read(node, "epsilon", "model", m.epsilon);
  read(node, "a", "model", m.a);
  read(node, "b", "model", m.b);
  read(node, "p", "model", m.p);
  read(node, "m", "model", m.m);
}

void parse_run(const YAML::Node& node, RunParams& r) {
  check_map(node, "run", {"dt", "t_end", "output_stride", "solver_tol", "solver_max_iter", "coupling_mode",
                          "scheme", "blowup_guard"});
  read(node, "dt", "run", r.dt);
  read(node, "t_end", "run", r.t_end);
  read(node, "output_stride", "run", r.output_stride);
  read(node, "solver_tol", "run", r.solver_tol);
  read(node, "solver_max_iter", "run", r.solver_max_iter);
  read(node, "blowup_guard", "run", r.blowup_guard);
  const auto mode = read_string(node, "coupling_mode", "run", "automatic");
  if (mode == "automatic") r.coupling_mode = CouplingMode::automatic;
  else if (mode == "lagged") r.coupling_mode = CouplingMode::lagged;
  else if (mode == "monolithic") r.coupling_mode = CouplingMode::monolithic;
  else fail("run.coupling_mode", "expected automatic, lagged or monolithic", node["coupling_mode"]);
  const auto scheme = read_string(node, "scheme", "run", "imex_euler");
  if (scheme == "imex_euler") r.scheme = TimeScheme::imex_euler;
  else if (scheme == "imex_bdf2") r.scheme = TimeScheme::imex_bdf2;
  else fail("run.scheme", "expected imex_euler or imex_bdf2", node["scheme"]);
}

DomainSpec parse_domain(const YAML::Node& node) {
  check_map(node, "domain", {"kind", "length", "nodes", "lx", "ly", "nx", "ny"});
  const auto kind = read_string(node, "kind", "domain", "rectangle");
  if (kind == "interval") {
    double length = 1.0;
    int nodes = 33;
    read(node, "length", "domain", length);
    read(node, "nodes", "domain", nodes);
    return DomainSpec::interval(length, nodes);
  }
  if (kind != "rectangle") fail("domain.kind", "expected interval or rectangle", node["kind"]);
  DomainSpec d = DomainSpec::rectangle(1.0, 1.0, 17, 17);
  read(node, "lx", "domain", d.lx);
  read(node, "ly", "domain", d.ly);
  read(node, "nx", "domain", d.nx);
  read(node, "ny", "domain", d.ny);
  return d;
}

PartitionSpec parse_partition(const YAML::Node& node) {
  PartitionSpec spec;
  check_map(node, "partition", {"preset", "segments"});
  if (node["preset"]) {
    const auto preset = read_string(node, "preset", "partition", "");
    if (preset == "zero_flux") spec.preset = PartitionSpec::Preset::zero_flux;
    else if (preset == "all_to_all") spec.preset = PartitionSpec::Preset::all_to_all;
    else fail("partition.preset", "expected zero_flux or all_to_all", node["preset"]);
  }
  if (const auto segs = node["segments"]) {
    if (!segs.IsSequence()) fail("partition.segments", "expected a list", segs);
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const std::string path = "partition.segments[" + std::to_string(k) + "]";
      const auto s = segs[k];
      check_map(s, path, {"edge", "from", "to", "partner"});
      PartitionSegment seg;
      const auto edge_name = read_string(s, "edge", path, "");
      const auto edge = edge_from_string(edge_name);
      if (!edge) fail(path + ".edge", "unknown edge '" + edge_name + "'", s["edge"]);
      seg.edge = *edge;
      read_optional(s, "from", path, seg.from);
      read_optional(s, "to", path, seg.to);
      if (!s["partner"]) fail(path + ".partner", "missing partner table", s);
      read(s, "partner", path, seg.partner);
      spec.segments.push_back(std::move(seg));
    }
  }
  if (spec.preset != PartitionSpec::Preset::none && !spec.segments.empty())
    fail("partition", "preset and segments are mutually exclusive", node);
  return spec;
}

Kinetics parse_kinetics(const YAML::Node& node) {
  check_map(node, "kinetics", {"family", "kappa", "c", "coefficients"});
  const auto family = read_string(node, "family", "kinetics", "classic_cubic");
  try {
    if (family == "classic_cubic") return Kinetics::classic();
    if (family == "zero") return Kinetics::zero();
    if (family == "general_cubic") {
      double kappa = 1.0, c = 0.5;
      read(node, "kappa", "kinetics", kappa);
      read(node, "c", "kinetics", c);
      return Kinetics::general(kappa, c);
    }
    if (family == "polynomial") {
      std::vector<double> coeff;
      read(node, "coefficients", "kinetics", coeff);
      if (coeff.size() != 4) fail("kinetics.coefficients", "expected 4 coefficients [c0, c1, c2, c3]", node);
      return Kinetics::polynomial({coeff[0], coeff[1], coeff[2], coeff[3]});
    }
  } catch (const KineticsError& e) {
    fail("kinetics", e.what(), node);
  }
  fail("kinetics.family", "expected classic_cubic, general_cubic, polynomial or zero", node["family"]);
}

void parse_diagnostics(const YAML::Node& node, DiagnosticsConfig& d) {
  check_map(node, "diagnostics", {"tail_fraction", "slack", "gronwall_slack", "poincare", "estimates"});
  read(node, "tail_fraction", "diagnostics", d.tail_fraction);
  read(node, "slack", "diagnostics", d.slack);
  read(node, "gronwall_slack", "diagnostics", d.gronwall_slack);
  const auto poincare = read_string(node, "poincare", "diagnostics", "analytic");
  if (poincare == "discrete") d.discrete_poincare = true;
  else if (poincare != "analytic") fail("diagnostics.poincare", "expected analytic or discrete", node["poincare"]);
  if (const auto e = node["estimates"]) {
    check_map(e, "diagnostics.estimates", {"c", "alpha0", "C4", "C_star"});
    read_optional(e, "c", "diagnostics.estimates", d.estimates.c);
    read_optional(e, "alpha0", "diagnostics.estimates", d.estimates.alpha0);
    read_optional(e, "C4", "diagnostics.estimates", d.estimates.C4);
    read_optional(e, "C_star", "diagnostics.estimates", d.estimates.C_star);
  }
  if (!(d.tail_fraction > 0.0 && d.tail_fraction <= 1.0))
    fail("diagnostics.tail_fraction", "tail_fraction must be in (0, 1]", node);
  if (!(d.slack >= 1.0)) fail("diagnostics.slack", "slack must be >= 1", node);
  if (!(d.gronwall_slack >= 0.0)) fail("diagnostics.gronwall_slack", "gronwall_slack must be >= 0", node);
}

void parse_output(const YAML::Node& node, OutputConfig& o) {
  check_map(node, "output", {"snapshots", "snapshot_stride"});
  read(node, "snapshots", "output", o.snapshots);
  read(node, "snapshot_stride", "output", o.snapshot_stride);
  if (o.snapshot_stride < 1) fail("output.snapshot_stride", "snapshot_stride must be >= 1", node);
}

void validate(const RunConfig& c) {
  try {
    validate_params(c.model);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  try {
    validate_run_params(c.run);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("run: ") + e.what());
  }
  if (static_cast<int>(c.initial_conditions.size()) != c.model.m)
    throw ConfigError("initial_conditions: expected " + std::to_string(c.model.m) + " entries");
  Mesh mesh;
  try {
    mesh = build_mesh(c.domain);
  } catch (const MeshError& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  try {
    build_boundary_partition(mesh, c.partition, c.model.m);
  } catch (const PartitionError& e) {
    throw ConfigError(std::string("partition: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("parse error at line " + std::to_string(e.mark.line + 1) + ", column " +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config: expected a mapping at the top level");
  check_map(root, "config",
            {"model", "run", "domain", "partition", "kinetics", "initial_conditions", "diagnostics", "output"});

  RunConfig c;
  if (!root["model"]) throw ConfigError("model: missing section");
  parse_model(root["model"], c.model);
  if (root["run"]) parse_run(root["run"], c.run);
  if (!root["domain"]) throw ConfigError("domain: missing section");
  c.domain = parse_domain(root["domain"]);
  if (root["partition"]) c.partition = parse_partition(root["partition"]);
  else c.partition.preset = PartitionSpec::Preset::zero_flux;
  if (root["kinetics"]) c.kinetics = parse_kinetics(root["kinetics"]);
  if (root["diagnostics"]) parse_diagnostics(root["diagnostics"], c.diagnostics);
  if (root["output"]) parse_output(root["output"], c.output);

  const auto ics = root["initial_conditions"];
  if (!ics) throw ConfigError("initial_conditions: missing section");
  if (!ics.IsSequence()) fail("initial_conditions", "expected a list", ics);
  for (std::size_t k = 0; k < ics.size(); ++k) {
    const std::string path = "initial_conditions[" + std::to_string(k) + "]";
    check_map(ics[k], path, {"u", "w"});
    c.initial_conditions.push_back({parse_field(ics[k]["u"], path + ".u"), parse_field(ics[k]["w"], path + ".w")});
  }

  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void set_parameter(RunConfig& c, const std::string& name, double value) {
  ModelParams& m = c.model;
  if (name == "p" || name == "model.p") m.p = value;
  else if (name == "d" || name == "model.d") m.d = value;
  else if (name == "sigma" || name == "model.sigma") m.sigma = value;
  else if (name == "J" || name == "model.J") m.J = value;
  else if (name == "epsilon" || name == "model.epsilon") m.epsilon = value;
  else if (name == "a" || name == "model.a") m.a = value;
  else if (name == "b" || name == "model.b") m.b = value;
  else if (name == "dt" || name == "run.dt") c.run.dt = value;
  else if (name == "t_end" || name == "run.t_end") c.run.t_end = value;
  else throw ConfigError("sweep: unsupported parameter '" + name + "'");
  validate(c);
}

}  // namespace fhn
