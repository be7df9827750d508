#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bitvar/error.hpp"
#include "bitvar/experiments.hpp"
#include "bitvar/report_io.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

using bitvar::Command;
using bitvar::ExperimentConfig;
using bitvar::Matrix;

TEST_CASE("commands and defaults") {
  for (Command c : {Command::kTable1, Command::kTable2, Command::kTable3, Command::kSweep}) {
    CHECK(bitvar::parse_command(bitvar::to_string(c)) == c);
    CHECK_NOTHROW(bitvar::validate_config(bitvar::default_config(c), c));
  }
  CHECK_THROWS_AS(bitvar::parse_command("table4"), bitvar::Error);
  CHECK(bitvar::default_config(Command::kTable1).replications == 200);
  CHECK(bitvar::default_config(Command::kTable1, true).replications == 1000);
  CHECK(bitvar::default_config(Command::kSweep, true).replications == 1001);
  CHECK(bitvar::default_config(Command::kTable3, true).random.count == 1000);
  const auto models = bitvar::benchmark_models();
  REQUIRE(models.size() == 3);
  CHECK(models[1].coeff(0) == Matrix{{0.7, 0.0}, {1.0, -0.5}});
}

TEST_CASE("parse_config and validation") {
  const auto base = bitvar::default_config(Command::kSweep);
  const auto cfg = bitvar::parse_config(
      R"({"T": [500], "replications": 3, "seed": 9, "eta": [0.5, 1.0], "sweep": "first",
          "eta_fixed": 0.25, "variant": "optimized", "graph": "star",
          "models": [{"A": [[0.5, 0.1], [0.0, 0.3]], "Sigma_E": [[1, 0], [0, 1]]}]})",
      base);
  CHECK(cfg.sample_counts == std::vector<std::size_t>{500});
  CHECK(cfg.replications == 3);
  CHECK(cfg.seed == 9);
  CHECK(cfg.eta_grid == std::vector<double>{0.5, 1.0});
  CHECK(cfg.sweep_mode == bitvar::SweepMode::kFirstOnly);
  CHECK(cfg.eta_fixed == 0.25);
  CHECK(cfg.variant == bitvar::RatioVariant::kOptimized);
  CHECK(cfg.star_graph);
  CHECK(cfg.models.size() == 1);

  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const bitvar::Error& e) {
      return e.code();
    }
    return bitvar::ErrorCode::kIoError;  // sentinel: nothing thrown
  };
  CHECK(code_of([&] { bitvar::parse_config(R"({"bogus": 1})", base); }) ==
        bitvar::ErrorCode::kConfigError);
  CHECK(code_of([&] { bitvar::parse_config("[1, 2", base); }) == bitvar::ErrorCode::kConfigError);
  CHECK(code_of([&] { bitvar::parse_config(R"({"T": 5})", base); }) ==
        bitvar::ErrorCode::kConfigError);

  ExperimentConfig bad = base;
  bad.replications = 0;
  CHECK_THROWS_AS(bitvar::validate_config(bad, Command::kSweep), bitvar::Error);
  bad = base;
  bad.eta_grid = {0.5, 0.0};
  CHECK_THROWS_AS(bitvar::validate_config(bad, Command::kSweep), bitvar::Error);
  bad = bitvar::default_config(Command::kTable1);
  bad.sample_counts = {2};
  CHECK_THROWS_AS(bitvar::validate_config(bad, Command::kTable1), bitvar::Error);
  bad = bitvar::default_config(Command::kTable3);
  bad.random.dims = {9};
  CHECK_THROWS_AS(bitvar::validate_config(bad, Command::kTable3), bitvar::Error);
}

TEST_CASE("EntryAccumulator") {
  bitvar::EntryAccumulator acc(1, 2, true);
  const Matrix truth{{1.0, 0.0}};
  acc.add(Matrix{{1.5, 0.0}}, truth);
  acc.add(Matrix{{0.5, 2.0}}, truth);
  acc.add(Matrix{{2.0, -1.0}}, truth);
  const auto s = acc.stats();
  CHECK(s.count == 3);
  CHECK(s.mean(0, 0) == doctest::Approx(4.0 / 3.0));
  CHECK(s.mse(0, 0) == doctest::Approx((0.25 + 0.25 + 1.0) / 3.0));
  const double m = 4.0 / 3.0;
  CHECK(s.variance(0, 0) ==
        doctest::Approx((std::pow(1.5 - m, 2) + std::pow(0.5 - m, 2) + std::pow(2.0 - m, 2)) / 3));
  CHECK(acc.median_abs_error()(0, 0) == doctest::Approx(0.5));
  CHECK(acc.median_abs_error()(0, 1) == doctest::Approx(1.0));

  bitvar::EntryAccumulator empty(2, 2);
  CHECK(std::isnan(empty.stats().mse(0, 0)));
}

TEST_CASE("small studies are deterministic and well formed") {
  ExperimentConfig cfg = bitvar::default_config(Command::kTable2);
  cfg.sample_counts = {200};
  cfg.replications = 5;
  const auto a = bitvar::run_command(Command::kTable2, cfg);
  const auto b = bitvar::run_command(Command::kTable2, cfg);
  CHECK(bitvar::report_csv(a) == bitvar::report_csv(b));
  CHECK(bitvar::report_json(a) == bitvar::report_json(b));
  cfg.seed = 2;
  CHECK(bitvar::report_csv(bitvar::run_command(Command::kTable2, cfg)) != bitvar::report_csv(a));

  std::istringstream csv(bitvar::report_csv(a));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "section,model,T,setting,statistic,i,j,value");
  bool saw_null_ratio = false;
  while (std::getline(csv, line)) {
    if (line.rfind("ratio,", 0) == 0 && line.find(",mse,0,0,") != std::string::npos) {
      saw_null_ratio = line.back() == ',';
    }
  }
  CHECK(saw_null_ratio);

  const auto j = nlohmann::json::parse(bitvar::report_json(a));
  CHECK(j["command"] == "table2");
  CHECK(j["seed"] == 1);
  CHECK(j.contains("version"));
  CHECK(j.contains("mse_definition"));
  CHECK(j["config"]["replications"] == 5);
}

TEST_CASE("scheme 2 study accounting") {
  ExperimentConfig cfg = bitvar::default_config(Command::kTable1);
  cfg.models = {cfg.models[0]};
  cfg.sample_counts = {300, 600};
  cfg.replications = 8;
  const auto cells = bitvar::run_scheme2_study(cfg);
  REQUIRE(cells.size() == 2);
  for (const auto& c : cells) {
    CHECK(c.a_hat.count + c.failures == 8);
    CHECK(c.mlse.count + c.mlse_failures == 8);
    for (double v : c.a_hat.mse.data()) CHECK(v >= 0.0);
    CHECK(std::isnan(c.prediction(0, 0)));
    CHECK(c.prediction(0, 1) > 0.0);
  }
}

TEST_CASE("table 3 on a tiny run") {
  ExperimentConfig cfg = bitvar::default_config(Command::kTable3);
  cfg.random.dims = {2, 3};
  cfg.random.count = 4;
  const auto rows = bitvar::run_table3(cfg);
  REQUIRE(rows.size() == 2);
  const auto& d2 = rows[0];
  for (std::size_t k = 1; k < d2.variants.size(); ++k) {
    CHECK(testing::near(d2.variants[k].mse_all, d2.variants[0].mse_all, 1e-12));
  }
  CHECK(std::isnan(d2.variants[0].mse_offdiag_other));
  CHECK(rows[1].models + rows[1].failures == 4);
}

TEST_CASE("write_report") {
  ExperimentConfig cfg = bitvar::default_config(Command::kSweep);
  cfg.models = {cfg.models[2]};
  cfg.sample_counts = {500};
  cfg.replications = 3;
  cfg.eta_grid = {0.5, 6.0};
  const auto report = bitvar::run_command(Command::kSweep, cfg);
  const auto dir = std::filesystem::temp_directory_path() / "bitvar_report_test";
  std::filesystem::remove_all(dir);
  bitvar::write_report(report, dir);
  std::ifstream csv(dir / "sweep.csv");
  std::stringstream ss;
  ss << csv.rdbuf();
  CHECK(ss.str() == bitvar::report_csv(report));
  CHECK(std::filesystem::exists(dir / "sweep.json"));
  // eta = 6 with T = 500: every replication fails.
  CHECK(ss.str().find("counts,0,500,6;6,failures,,,3\n") != std::string::npos);
  std::filesystem::remove_all(dir);
}
