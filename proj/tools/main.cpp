// bitvar: simulate VAR data, quantize it to bits, estimate models from the
// bits and run the Monte-Carlo tables.
//
// Exit codes: 0 success, 2 bad arguments / config / I/O, 3 numerical failure.

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bitvar/error.hpp"
#include "bitvar/experiments.hpp"
#include "bitvar/gaussian.hpp"
#include "bitvar/model_io.hpp"
#include "bitvar/quantize.hpp"
#include "bitvar/record_io.hpp"
#include "bitvar/report_io.hpp"
#include "bitvar/scheme1.hpp"
#include "bitvar/scheme2.hpp"
#include "bitvar/var_model.hpp"
#include "bitvar/version.hpp"
#include "bitvar_oracle/oracle.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw bitvar::Error(bitvar::ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[32];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
}

json matrix_json(const bitvar::Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

struct SimulateArgs {
  std::string model;
  std::size_t T = 1000;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string scheme = "sign";
  std::string graph = "complete";
  std::vector<double> thresholds;
  std::vector<double> eta;
  bool no_trajectory = false;
};

int run_simulate(const SimulateArgs& a) {
  const bitvar::VarModel m = bitvar::load_model(a.model);
  const bitvar::Matrix traj = bitvar::simulate(m, a.T, a.seed);
  const std::size_t d = m.dim();
  bitvar::BinaryRecord rec;
  if (a.scheme == "sign") {
    rec = bitvar::sign_and_predominance(
        traj, a.graph == "star" ? bitvar::SensorGraph::star(d) : bitvar::SensorGraph::complete(d));
  } else {
    std::vector<double> c = a.thresholds;
    if (c.empty()) {
      if (a.eta.size() != d) {
        throw bitvar::Error(bitvar::ErrorCode::kConfigError,
                            "threshold scheme needs --thresholds or --eta with d values");
      }
      const bitvar::MomentSet mom = bitvar::true_moments(m, 0);
      c.resize(d);
      for (std::size_t i = 0; i < d; ++i) c[i] = a.eta[i] * mom.sigmas[i];
    }
    rec = bitvar::threshold_quantize(traj, c);
  }
  fs::create_directories(a.out);
  bitvar::save_record(rec, fs::path(a.out) / "record.bits");
  if (!a.no_trajectory) {
    std::ofstream f(fs::path(a.out) / "trajectory.csv", std::ios::binary);
    f << 't';
    for (std::size_t i = 0; i < d; ++i) f << ",z" << i;
    f << '\n';
    for (std::size_t t = 0; t < a.T; ++t) {
      f << t;
      for (std::size_t i = 0; i < d; ++i) f << ',' << fmt(traj(i, t));
      f << '\n';
    }
    if (!f) throw bitvar::Error(bitvar::ErrorCode::kIoError, "cannot write trajectory.csv");
  }
  return 0;
}

struct EstimateArgs {
  std::string record;
  std::size_t order = 1;
  std::string variant = "simple";
  std::string out;
};

int run_estimate(const EstimateArgs& a) {
  const bitvar::BinaryRecord rec = bitvar::load_record(a.record);
  json out;
  int code = 0;
  if (rec.thresholds) {
    const bitvar::Scheme1Result r = bitvar::estimate_model_s1(rec, a.order);
    out["scheme"] = "threshold";
    out["eta_hat"] = r.thresholds.eta_hat;
    json flags = json::array();
    for (auto f : r.thresholds.flags) flags.push_back(bitvar::to_string(f));
    out["flags"] = flags;
    out["clamped_correlations"] = r.correlations.clamped_count;
    if (r.failed()) {
      out["model"] = nullptr;
      code = kExitNumerical;
    } else {
      out["model"] = json::parse(
          bitvar::model_to_json(bitvar::VarModel(r.model->coeff, r.model->noise_cov)));
      out["sigma_hat"] = r.sigma_hat;
      out["ratios"] = matrix_json(r.ratios->r);
    }
  } else {
    const auto variant = bitvar::parse_ratio_variant(a.variant);
    const bitvar::Scheme2Result r = bitvar::estimate_model_s2(rec, a.order, variant);
    out["scheme"] = "sign";
    out["variant"] = bitvar::to_string(variant);
    out["model"] = json::parse(bitvar::model_to_json(
        bitvar::VarModel(r.model_class.coeff, r.model_class.noise_cov_normalized)));
    out["ratios"] = matrix_json(r.ratios.r);
    out["clamped_predominance"] = r.clamped_count;
  }
  const std::string text = out.dump(1) + '\n';
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    f << text;
    if (!f) throw bitvar::Error(bitvar::ErrorCode::kIoError, "cannot write " + a.out);
  }
  if (code != 0) std::cerr << "estimate: threshold scheme failed (see flags)\n";
  return code;
}

struct TableArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string out = ".";
  bool full = false;
};

int run_table(bitvar::Command c, const TableArgs& a) {
  bitvar::ExperimentConfig cfg = bitvar::default_config(c, a.full);
  if (!a.config.empty()) cfg = bitvar::parse_config(read_file(a.config), cfg);
  if (a.seed) cfg.seed = *a.seed;
  if (a.reps) {
    if (c == bitvar::Command::kTable3) {
      cfg.random.count = *a.reps;
    } else {
      cfg.replications = *a.reps;
    }
  }
  const auto start = std::chrono::steady_clock::now();
  const bitvar::Report report = bitvar::run_command(c, cfg);
  bitvar::write_report(report, a.out);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  std::cerr << bitvar::to_string(c) << ": wrote " << (fs::path(a.out) / bitvar::to_string(c)).string()
            << ".{csv,json} in " << took.count() << " s\n";
  return 0;
}

struct OracleArgs {
  std::size_t draws = 1000000;
  std::uint64_t seed = 1;
};

// Prints library values next to the brute-force references on a small grid.
int run_oracle(const OracleArgs& a) {
  std::cout << "check,arg1,arg2,arg3,library,reference,std_error,z\n";
  const double etas[] = {-1.0, 0.0, 0.5, 1.5};
  const double rhos[] = {-0.8, -0.3, 0.3, 0.8};
  std::uint64_t stream = 0;
  auto line = [](const char* what, double x, double y, double z, double lib, double ref,
                 double se) {
    std::cout << what << ',' << fmt(x) << ',' << fmt(y) << ',' << fmt(z) << ',' << fmt(lib)
              << ',' << fmt(ref) << ',' << fmt(se) << ','
              << (se > 0 ? fmt((lib - ref) / se) : "") << '\n';
  };
  for (double h : etas) {
    for (double k : etas) {
      for (double rho : rhos) {
        const bitvar::ThresholdPair eta{h, k};
        const double lib = bitvar::psi(eta, rho);
        line("psi_grid", h, k, rho, lib, bitvar::oracle::psi_fine_grid(eta, rho), 0.0);
        const auto mc = bitvar::oracle::mc_threshold_covariance(eta, rho, a.draws,
                                                                a.seed + stream++);
        line("psi_mc", h, k, rho, lib, mc.mean, mc.std_error);
      }
    }
  }
  for (double r : {0.25, 0.8, 1.0, 2.5}) {
    for (double rho : rhos) {
      const auto mc = bitvar::oracle::mc_predominance(r, rho, a.draws, a.seed + stream++);
      line("predominance_mc", r, rho, 0.0, bitvar::predominance_probability(r, rho), mc.mean,
           mc.std_error);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify Gaussian VAR models from 1-bit measurements"};
  app.set_version_flag("--version", std::string(bitvar::kVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a model and quantize it to bits");
  simulate->add_option("--model", sim.model, "Model JSON file")->required();
  simulate->add_option("-T,--samples", sim.T, "Number of samples")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Seed");
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_option("--scheme", sim.scheme, "sign (predominance bits) or threshold")
      ->check(CLI::IsMember({"sign", "threshold"}));
  simulate->add_option("--graph", sim.graph, "Sensor graph for the sign scheme")
      ->check(CLI::IsMember({"complete", "star"}));
  simulate->add_option("--thresholds", sim.thresholds, "Absolute thresholds c_i")->delimiter(',');
  simulate->add_option("--eta", sim.eta, "Standard thresholds eta_i (c_i = eta_i sigma_i)")
      ->delimiter(',');
  simulate->add_flag("--no-trajectory", sim.no_trajectory, "Only write record.bits");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate a model from a bit record");
  estimate->add_option("--record", est.record, "BITVAR1 record file")->required();
  estimate->add_option("-p,--order", est.order, "VAR order")->check(CLI::PositiveNumber);
  estimate->add_option("--variant", est.variant, "Ratio variant for sign records")
      ->check(CLI::IsMember({"simple", "optimized", "efficient", "log"}));
  estimate->add_option("--out", est.out, "Output JSON file (default stdout)");

  TableArgs tab;
  std::vector<std::pair<CLI::App*, bitvar::Command>> tables;
  for (bitvar::Command c : {bitvar::Command::kTable1, bitvar::Command::kTable2,
                            bitvar::Command::kTable3, bitvar::Command::kSweep}) {
    auto* sub = app.add_subcommand(bitvar::to_string(c), "Run the Monte-Carlo study and write "
                                                         "<out>/<command>.{csv,json}");
    sub->add_option("--config", tab.config, "JSON config overriding the defaults");
    sub->add_option("--seed", tab.seed, "Master seed");
    sub->add_option("--reps", tab.reps, "Replications (random models for table3)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", tab.out, "Output directory");
    sub->add_flag("--full", tab.full, "Full-scale replication counts");
    tables.emplace_back(sub, c);
  }

  OracleArgs orc;
  auto* oracle = app.add_subcommand("oracle", "Compare library maps with brute-force references");
  oracle->add_option("--draws", orc.draws, "Monte-Carlo draws per grid point")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--seed", orc.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*estimate) return run_estimate(est);
    if (*oracle) return run_oracle(orc);
    for (const auto& [sub, c] : tables) {
      if (*sub) return run_table(c, tab);
    }
  } catch (const bitvar::Error& e) {
    std::cerr << "bitvar: " << e.what() << '\n';
    return e.is_usage_error() ? kExitUsage : kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "bitvar: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
