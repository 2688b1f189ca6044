#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mixeig/error.hpp"
#include "mixeig/experiment.hpp"

using namespace mixeig;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults run without arguments") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.command == Command::Converge);
  CHECK(cfg.domain.kind == DomainKind::Square);
  CHECK(cfg.domain.length == std::numbers::pi);
  CHECK(cfg.resolved_initial_n() == 4);
  cfg.domain = Domain::lshape();
  CHECK(cfg.resolved_initial_n() == 2);
}

TEST_CASE("config text") {
  ExperimentConfig cfg;
  apply_config_text(cfg, "# comment\ncommand = adapt\ndomain=lshape\n\nk = 1  # trailing\ntheta=0.3\ndump_mesh=0, 4,19\n");
  CHECK(cfg.command == Command::Adapt);
  CHECK(cfg.domain.kind == DomainKind::LShape);
  CHECK(cfg.k == 1);
  CHECK(cfg.theta == 0.3);
  CHECK(cfg.dump_levels == std::vector<int>{0, 4, 19});
}

TEST_CASE("config errors name the line and field") {
  ExperimentConfig cfg;
  try {
    apply_config_text(cfg, "k=1\nlevels = five\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("levels") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_config_text(cfg, "bogus=1\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(cfg, "no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "domain", "circle"), ConfigError);
  CHECK_THROWS_AS(parse_command("plot"), ConfigError);
  CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/file.cfg"), ConfigError);

  for (auto [key, value] : {std::pair{"k", "2"}, std::pair{"levels", "0"}, std::pair{"theta", "0"},
                            std::pair{"theta", "1.5"}, std::pair{"eigen_index", "0"}, std::pair{"length", "-1"}}) {
    ExperimentConfig c;
    apply_setting(c, key, value);
    try {
      c.validate();
      FAIL("expected ConfigError for " << key);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
  }
}

TEST_CASE("eoc of a hand computed pair") {
  CHECK(*eoc(1e-2, 100, 2.5e-3, 400) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(eoc(0.0, 100, 1.0, 400).has_value());
  CHECK_FALSE(eoc(1.0, 100, -1.0, 400).has_value());
  const EocTable t = eoc_table("x", {100, 400, 1600}, {1e-2, 2.5e-3, 0.0});
  REQUIRE(t.rates.size() == 2);
  CHECK(*t.rates[0] == doctest::Approx(1.0));
  CHECK_FALSE(t.rates[1].has_value());
  CHECK(*fitted_rate({100, 400, 1600}, {1e-2, 2.5e-3, 6.25e-4}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("csv output is deterministic with a header") {
  ExperimentConfig cfg;
  cfg.levels = 2;
  std::ostringstream log;
  std::ostringstream a, b;
  write_csv(a, run_converge(cfg, log), false);
  write_csv(b, run_converge(cfg, log), false);
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::string header, row;
  std::getline(in, header);
  CHECK(header ==
        "level,ndof_total,ndof_flux,ndof_scalar,lambda_h,err_lambda,err_u_L2,err_sigma_L2,err_grad_ustar2,eta,"
        "eff_index,identity_residual,reliability_gap");
  int rows = 0;
  while (std::getline(in, row)) {
    const auto cells = split(row, ',');
    CHECK(cells.size() == 13);
    // lambda_h printed with 12 significant digits.
    std::string digits;
    for (char c : cells[4]) {
      if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
    }
    CHECK(digits.size() <= 12);
    CHECK(std::stod(cells[4]) == doctest::Approx(2.0).epsilon(0.05));
    ++rows;
  }
  CHECK(rows == 2);
  CHECK(log.str().find("EOC |lambda-lambda_h|") != std::string::npos);
}

TEST_CASE("lshape csv has nan error columns and adaptive extras") {
  ExperimentConfig cfg;
  cfg.command = Command::Adapt;
  cfg.domain = Domain::lshape();
  cfg.levels = 2;
  std::ostringstream log, csv;
  write_csv(csv, run_adapt(cfg, log), true);
  std::istringstream in(csv.str());
  std::string header, row;
  std::getline(in, header);
  CHECK(split(header, ',').size() == 15);
  std::getline(in, row);
  const auto cells = split(row, ',');
  REQUIRE(cells.size() == 15);
  CHECK(cells[5] != "nan");   // reference eigenvalue exists
  CHECK(cells[6] == "nan");   // no analytic eigenfunction
  CHECK(cells[10] == "nan");
}

TEST_CASE("mesh dump with indicators") {
  const Mesh mesh = generate_square(1, 1.0);
  EstimateReport r;
  r.local = Eigen::Vector2d(0.25, 0.5);
  std::ostringstream os;
  write_mesh_with_eta(os, mesh, r);
  const std::string s = os.str();
  const auto pos = s.find("eta 2\n");
  REQUIRE(pos != std::string::npos);
  CHECK(s.substr(pos) == "eta 2\n0 0.25\n1 0.5\n");
}

TEST_CASE("identity refuses the lshape") {
  ExperimentConfig cfg;
  cfg.command = Command::Identity;
  cfg.domain = Domain::lshape();
  std::ostringstream log;
  CHECK_THROWS_AS(run_identity(cfg, log), MissingExactSolution);
}

TEST_CASE("identity residuals are tiny") {
  for (int k = 0; k <= 1; ++k) {
    ExperimentConfig cfg;
    cfg.command = Command::Identity;
    cfg.k = k;
    cfg.levels = k == 0 ? 4 : 3;
    std::ostringstream log;
    const auto res = run_identity(cfg, log);
    REQUIRE(static_cast<int>(res.size()) == cfg.levels);
    for (double r : res) CHECK(std::abs(r) <= 1e-8 * 2.0);
  }
}

TEST_CASE("estimator rates on the 2pi square start low and approach one") {
  ExperimentConfig cfg;
  cfg.domain = Domain::square(2 * std::numbers::pi);
  cfg.eigen_index = 4;
  cfg.levels = 5;
  std::ostringstream log;
  const RunRecord run = run_converge(cfg, log);
  CHECK(run.levels.back().lambda_h == doctest::Approx(2.0).epsilon(1e-3));
  const EocTable eta = standard_eoc_tables(run)[1];
  REQUIRE(eta.rates.size() == 4);
  CHECK(*eta.rates[0] < 0.95);
  CHECK(*eta.rates[0] < *eta.rates[1]);
  CHECK(*eta.rates[3] == doctest::Approx(1.0).epsilon(0.05));
}

}  // TEST_SUITE
