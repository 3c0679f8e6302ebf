#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fhn/config.hpp"
#include "fhn/simulation.hpp"

namespace fhn {

/// Shortest round-trip decimal form ('.' radix, locale independent).
std::string format_number(double v);

/// Stable column names of timeseries.csv for m neurons:
///   t, E, E_w, P, S, l4_energy,
///   then per neuron i:  u_sq_i, w_sq_i, u_l4_i, grad_u_sq_i,
///   then per pair i<j:  U_sq_i_j, W_sq_i_j, grad_U_sq_i_j, bnd_U_sq_i_j   (1-based)
std::vector<std::string> timeseries_header(int m);
std::vector<double> timeseries_row(const SampleDiagnostics& s);
void write_timeseries(std::ostream& out, const std::vector<SampleDiagnostics>& samples, int m);

/// Structured report: parameters, constants with formulas, checks, fit, tail statistics.
std::string summary_json(const RunConfig& config, const SimulationContext& context, const Trajectory& trajectory,
                         const RunReport& report);

/// One file per field and sample: 3 header lines ("time", "dims", "neuron"),
/// then one line per grid row of nodal values.
void write_snapshot(const std::filesystem::path& dir, const Mesh& mesh, const NetworkState& state,
                    std::size_t sample_index);

struct SweepRow {
  double value;
  bool ok;
  std::string error;
  double sync_degree;
  std::optional<double> decay_rate;
  double p_tail_min_S;
  std::optional<double> R;
};

void write_sweep_summary(std::ostream& out, const std::string& param, const std::vector<SweepRow>& rows);

}  // namespace fhn
