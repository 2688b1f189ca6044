// mixeig: uniform and adaptive experiments for the mixed Laplace eigenproblem.
//
//   mixeig converge --domain square --k 0 --levels 5 --out square_k0.csv
//   mixeig adapt --domain lshape --theta 0.5 --levels 19 --dump-mesh 0,10,19
//   mixeig identity --k 1 --levels 3
//
// Settings are applied in order: defaults, --config file, command-line flags.
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mixeig/error.hpp"
#include "mixeig/experiment.hpp"

namespace {

constexpr int kConfigFailure = 2;
constexpr int kSolverFailure = 3;

struct Flag {
  const char* name;
  const char* key;
  const char* help;
  std::string value;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed Raviart-Thomas eigenvalue experiments"};
  std::string command = "converge";
  std::string config_path;
  app.add_option("command", command, "converge | adapt | identity")->capture_default_str();
  app.add_option("--config", config_path, "flat key=value settings file");

  std::vector<Flag> flags = {
      {"--domain", "domain", "square | lshape", {}},
      {"--length", "length", "side length of the square (default pi)", {}},
      {"--k", "k", "Raviart-Thomas order, 0 or 1", {}},
      {"--levels", "levels", "meshes (converge, identity) or refinement steps (adapt)", {}},
      {"--n", "initial_n", "initial grid subdivisions (default 4 square, 2 L-shape)", {}},
      {"--theta", "theta", "Doerfler bulk parameter in (0, 1]", {}},
      {"--eigen-index", "eigen_index", "1-based index of the eigenvalue to track", {}},
      {"--max-dofs", "max_dofs", "stop adapting past this many total dofs", {}},
      {"--seed", "seed", "eigensolver start vector seed", {}},
      {"--out", "out", "CSV path (default stdout)", {}},
      {"--dump-mesh", "dump_mesh", "comma separated levels to dump with eta", {}},
  };
  std::vector<CLI::Option*> options;
  for (auto& f : flags) options.push_back(app.add_option(f.name, f.value, f.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailure;
  }

  mixeig::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) mixeig::apply_config_file(cfg, config_path);
    cfg.command = mixeig::parse_command(command);
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (options[i]->count() > 0) mixeig::apply_setting(cfg, flags[i].key, flags[i].value);
    }
    cfg.validate();
  } catch (const mixeig::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  }

  try {
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw mixeig::ConfigError("cannot open output '" + cfg.out + "'");
    }
    std::ostream& csv = cfg.out.empty() ? std::cout : file;
    switch (cfg.command) {
      case mixeig::Command::Converge:
        mixeig::write_csv(csv, mixeig::run_converge(cfg, std::cerr), false);
        break;
      case mixeig::Command::Adapt:
        mixeig::write_csv(csv, mixeig::run_adapt(cfg, std::cerr), true);
        break;
      case mixeig::Command::Identity:
        mixeig::run_identity(cfg, std::cout);
        break;
    }
  } catch (const mixeig::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const mixeig::MissingExactSolution& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  return 0;
}
