#include "mixeig/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mixeig/error.hpp"
#include "mixeig/exact.hpp"

namespace mixeig {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto v = trim(value);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("field '" + std::string(key) + "': cannot parse '" + std::string(v) + "'");
  }
  return out;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : "nan"; }

}  // namespace

int ExperimentConfig::resolved_initial_n() const {
  if (initial_n > 0) return initial_n;
  return domain.kind == DomainKind::Square ? 4 : 2;
}

void ExperimentConfig::validate() const {
  if (k != 0 && k != 1) throw ConfigError("field 'k': must be 0 or 1");
  if (levels < 1) throw ConfigError("field 'levels': must be >= 1");
  if (initial_n < 0) throw ConfigError("field 'initial_n': must be >= 0");
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("field 'theta': must lie in (0, 1]");
  if (eigen_index < 1) throw ConfigError("field 'eigen_index': must be >= 1");
  if (max_dofs < 1) throw ConfigError("field 'max_dofs': must be positive");
  if (domain.kind == DomainKind::Square && !(domain.length > 0.0 && std::isfinite(domain.length))) {
    throw ConfigError("field 'length': must be positive");
  }
  for (int l : dump_levels) {
    if (l < 0) throw ConfigError("field 'dump_mesh': levels must be nonnegative");
  }
}

Command parse_command(std::string_view name) {
  if (name == "converge") return Command::Converge;
  if (name == "adapt") return Command::Adapt;
  if (name == "identity") return Command::Identity;
  throw ConfigError("unknown command '" + std::string(name) + "' (expected converge|adapt|identity)");
}

std::vector<int> parse_level_list(std::string_view text) {
  std::vector<int> out;
  while (!trim(text).empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<int>("dump_mesh", text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "domain") {
    if (value == "square") {
      cfg.domain.kind = DomainKind::Square;
    } else if (value == "lshape") {
      cfg.domain = Domain::lshape();
    } else {
      throw ConfigError("field 'domain': expected square|lshape, got '" + std::string(value) + "'");
    }
  } else if (key == "length") {
    cfg.domain.length = parse_number<double>(key, value);
  } else if (key == "k") {
    cfg.k = parse_number<int>(key, value);
  } else if (key == "levels") {
    cfg.levels = parse_number<int>(key, value);
  } else if (key == "initial_n") {
    cfg.initial_n = parse_number<int>(key, value);
  } else if (key == "theta") {
    cfg.theta = parse_number<double>(key, value);
  } else if (key == "eigen_index") {
    cfg.eigen_index = parse_number<int>(key, value);
  } else if (key == "max_dofs") {
    cfg.max_dofs = parse_number<long>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else if (key == "dump_mesh") {
    cfg.dump_levels = parse_level_list(value);
  } else if (key == "command") {
    cfg.command = parse_command(value);
  } else {
    throw ConfigError("unknown field '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

std::optional<double> eoc(double v0, long dofs0, double v1, long dofs1) {
  if (!(v0 > 0.0 && v1 > 0.0) || dofs0 <= 0 || dofs1 <= 0 || dofs0 == dofs1) return std::nullopt;
  return std::log(v0 / v1) / std::log(static_cast<double>(dofs1) / static_cast<double>(dofs0));
}

EocTable eoc_table(std::string name, const std::vector<long>& dofs, const std::vector<double>& values) {
  EocTable table{std::move(name), dofs, values, {}};
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    table.rates.push_back(eoc(values[i], dofs[i], values[i + 1], dofs[i + 1]));
  }
  return table;
}

std::optional<double> fitted_rate(const std::vector<long>& dofs, const std::vector<double>& values) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || dofs[i] <= 0) return std::nullopt;
    const double x = std::log(static_cast<double>(dofs[i]));
    const double y = -std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double det = n * sxx - sx * sx;
  if (n < 2 || det <= 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / det;
}

std::vector<EocTable> standard_eoc_tables(const RunRecord& run) {
  std::vector<long> dofs;
  for (const auto& l : run.levels) dofs.push_back(l.ndof_total());
  auto column = [&](auto get) {
    std::vector<double> v;
    for (const auto& l : run.levels) v.push_back(get(l));
    return v;
  };
  const double nan = std::nan("");
  std::vector<EocTable> tables;
  tables.push_back(eoc_table("|lambda-lambda_h|", dofs, column([&](const LevelRecord& l) {
                               return l.lambda_ref_error.value_or(nan);
                             })));
  tables.push_back(eoc_table("eta^2", dofs, column([](const LevelRecord& l) { return l.eta * l.eta; })));
  const bool exact = !run.levels.empty() && run.levels.front().errors.has_value();
  if (exact) {
    auto err = [&](auto member) {
      return column([member](const LevelRecord& l) {
        const double v = (*l.errors).*member;
        return v * v;
      });
    };
    tables.push_back(eoc_table("||u-u_h||^2", dofs, err(&ErrorBundle::u_l2)));
    tables.push_back(eoc_table("||sigma-sigma_h||^2", dofs, err(&ErrorBundle::sigma_l2)));
    tables.push_back(eoc_table("||grad(u-u**)||^2", dofs, err(&ErrorBundle::grad_ustar2)));
    tables.push_back(eoc_table("||P_h u-u_h||^2", dofs, err(&ErrorBundle::projection_l2)));
    tables.push_back(eoc_table("||u-u*||^2", dofs, err(&ErrorBundle::u_ustar)));
  }
  return tables;
}

void print_eoc(std::ostream& os, const EocTable& table) {
  os << "EOC " << table.name << ':';
  for (const auto& r : table.rates) {
    os << ' ';
    if (r) {
      os << std::fixed << std::setprecision(3) << *r << std::defaultfloat;
    } else {
      os << '-';
    }
  }
  os << '\n';
}

void write_csv(std::ostream& os, const RunRecord& run, bool adaptive_columns) {
  os << "level,ndof_total,ndof_flux,ndof_scalar,lambda_h,err_lambda,err_u_L2,err_sigma_L2,"
        "err_grad_ustar2,eta,eff_index,identity_residual,reliability_gap";
  if (adaptive_columns) os << ",num_triangles,marked";
  os << '\n';
  for (const auto& l : run.levels) {
    std::optional<double> err_u, err_sigma, err_grad, gap;
    if (l.errors) {
      err_u = l.errors->u_l2;
      err_sigma = l.errors->sigma_l2;
      err_grad = l.errors->grad_ustar2;
    }
    if (l.gap) gap = l.gap->gap;
    os << l.level << ',' << l.ndof_total() << ',' << l.ndof_flux << ',' << l.ndof_scalar << ','
       << format_number(l.lambda_h) << ',' << format_optional(l.lambda_ref_error) << ','
       << format_optional(err_u) << ',' << format_optional(err_sigma) << ','
       << format_optional(err_grad) << ',' << format_number(l.eta) << ','
       << format_optional(l.efficiency) << ',' << format_optional(l.identity_residual) << ','
       << format_optional(gap);
    if (adaptive_columns) os << ',' << l.num_triangles << ',' << l.marked;
    os << '\n';
  }
}

void write_mesh_with_eta(std::ostream& os, const Mesh& mesh, const EstimateReport& report) {
  write_mesh(os, mesh);
  os << "eta " << report.local.size() << '\n' << std::setprecision(12);
  for (Eigen::Index t = 0; t < report.local.size(); ++t) os << t << ' ' << report.local(t) << '\n';
}

Mesh initial_mesh(const ExperimentConfig& cfg) {
  const int n = cfg.resolved_initial_n();
  return cfg.domain.kind == DomainKind::Square ? generate_square(n, cfg.domain.length)
                                               : generate_lshape(n);
}

namespace {

LevelCallback progress_callback(const ExperimentConfig& cfg, std::ostream& log) {
  std::string base = cfg.out.empty() ? "mixeig" : cfg.out;
  if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") base.resize(base.size() - 4);
  return [&cfg, &log, base](const Mesh& mesh, const LevelSolution& sol, const LevelRecord& rec) {
    log << "level " << rec.level << ": triangles " << rec.num_triangles << " dofs " << rec.ndof_total()
        << " lambda_h " << std::setprecision(12) << rec.lambda_h << " eta " << rec.eta
        << " iterations " << rec.iterations << " time " << std::setprecision(3) << rec.seconds
        << "s\n";
    if (std::find(cfg.dump_levels.begin(), cfg.dump_levels.end(), rec.level) != cfg.dump_levels.end()) {
      const std::string path = base + "_mesh_" + std::to_string(rec.level) + ".txt";
      std::ofstream out(path);
      if (!out) throw ConfigError("cannot write mesh dump '" + path + "'");
      write_mesh_with_eta(out, mesh, sol.report);
    }
  };
}

SolverConfig solver_config(const ExperimentConfig& cfg) {
  SolverConfig s;
  s.seed = cfg.seed;
  return s;
}

}  // namespace

RunRecord run_converge(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  RunRecord run = uniform_sweep(initial_mesh(cfg), cfg.levels, cfg.k, cfg.eigen_index, solver_config(cfg),
                                progress_callback(cfg, log));
  for (const auto& t : standard_eoc_tables(run)) print_eoc(log, t);
  return run;
}

RunRecord run_adapt(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  AdaptConfig a;
  a.theta = cfg.theta;
  a.max_levels = cfg.levels;
  a.max_dofs = cfg.max_dofs;
  a.eigen_index = cfg.eigen_index;
  a.k = cfg.k;
  a.solver = solver_config(cfg);
  RunRecord run = adaptive_loop(initial_mesh(cfg), a, progress_callback(cfg, log));
  for (const auto& t : standard_eoc_tables(run)) print_eoc(log, t);
  return run;
}

std::vector<double> run_identity(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (!exact_eigenpair(cfg.domain, cfg.eigen_index)) {
    throw MissingExactSolution(
        "identity: requires an analytic eigenpair (square domain with a simple eigenvalue)");
  }
  const RunRecord run = uniform_sweep(initial_mesh(cfg), cfg.levels, cfg.k, cfg.eigen_index,
                                      solver_config(cfg), progress_callback(cfg, log));
  std::vector<double> residuals;
  for (const auto& l : run.levels) {
    residuals.push_back(*l.identity_residual);
    log << "identity level " << l.level << ": residual " << std::setprecision(3) << std::scientific
        << *l.identity_residual << " (relative " << std::abs(*l.identity_residual) / l.errors->lambda
        << ")" << std::defaultfloat << '\n';
  }
  return residuals;
}

}  // namespace mixeig
