#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixeig/adapt.hpp"
#include "mixeig/mesh.hpp"

namespace mixeig {

enum class Command { Converge, Adapt, Identity };

struct ExperimentConfig {
  Command command = Command::Converge;
  Domain domain = Domain::square();
  int k = 0;
  int levels = 5;         // converge/identity: meshes; adapt: refinement steps
  int initial_n = 0;      // 0 selects 4 (square) or 2 (L-shape)
  double theta = 0.5;
  int eigen_index = 1;
  long max_dofs = 2'000'000;
  std::uint64_t seed = 20180901;
  std::string out;        // CSV path; empty writes to stdout
  std::vector<int> dump_levels;

  int resolved_initial_n() const;
  // Throws ConfigError naming the offending field.
  void validate() const;
};

Command parse_command(std::string_view name);
// Applies one `key=value` setting; keys use underscores (eigen_index, dump_mesh, ...).
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);
// Flat key=value text, '#' comments; errors carry the line number.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
std::vector<int> parse_level_list(std::string_view text);

/// Experimental orders of convergence against total dofs:
/// rate_i = log(v_i / v_{i+1}) / log(dofs_{i+1} / dofs_i).
struct EocTable {
  std::string name;
  std::vector<long> dofs;
  std::vector<double> values;
  std::vector<std::optional<double>> rates;  // size values.size() - 1
};

std::optional<double> eoc(double v0, long dofs0, double v1, long dofs1);
EocTable eoc_table(std::string name, const std::vector<long>& dofs, const std::vector<double>& values);
// Least-squares slope of -log(value) against log(dofs) over all entries.
std::optional<double> fitted_rate(const std::vector<long>& dofs, const std::vector<double>& values);

// EOC tables for the standard columns of a run (errors squared where the
// reference figure reports squares).
std::vector<EocTable> standard_eoc_tables(const RunRecord& run);
void print_eoc(std::ostream& os, const EocTable& table);

// CSV with a header row; numbers in 12 significant digits, "nan" when absent.
void write_csv(std::ostream& os, const RunRecord& run, bool adaptive_columns);

// Mesh dump followed by an `eta <count>` line and one `<triangle> <eta>` line per element.
void write_mesh_with_eta(std::ostream& os, const Mesh& mesh, const EstimateReport& report);

Mesh initial_mesh(const ExperimentConfig& cfg);

RunRecord run_converge(const ExperimentConfig& cfg, std::ostream& log);
RunRecord run_adapt(const ExperimentConfig& cfg, std::ostream& log);
// Identity residual per level; throws MissingExactSolution without an analytic eigenpair.
std::vector<double> run_identity(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace mixeig
