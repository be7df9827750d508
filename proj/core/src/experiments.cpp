#include "bitvar/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bitvar/error.hpp"
#include "bitvar/model_io.hpp"
#include "bitvar/quantize.hpp"
#include "bitvar/rng.hpp"
#include "bitvar/scheme1.hpp"
#include "bitvar/version.hpp"
#include "bitvar/yule_walker.hpp"
#include "json_util.hpp"

namespace bitvar {

using detail::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Seed-space offsets keeping model draws and trajectories of the random-model
// study apart from the fixed-model studies.
constexpr std::uint64_t kRandomModelStream = 0x52414e444f4dULL;
constexpr std::uint64_t kRandomTrajectoryStream = 0x5452414a4543ULL;

struct Truth {
  Matrix a;        // stacked coefficients
  Matrix a_tilde;  // stacked unscaled coefficients
  Matrix ratio;
  std::vector<double> sigmas;
};

Truth truth_of(const VarModel& m) {
  const MomentSet mom = true_moments(m, 0);
  Truth t;
  t.sigmas = mom.sigmas;
  t.a = stack_coefficients(m.coeff());
  t.ratio = ratios_from_sigmas(mom.sigmas).r;
  t.a_tilde = t.a;
  const std::size_t d = m.dim();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t c = 0; c < t.a.cols(); ++c) {
      t.a_tilde(i, c) /= t.ratio(i, c % d);
    }
  }
  return t;
}

Matrix independence_prediction(const Truth& truth, const EntryStats& a_tilde,
                               const EntryStats& ratio) {
  const std::size_t d = truth.ratio.rows();
  Matrix pred(truth.a.rows(), truth.a.cols(), kNaN);
  if (a_tilde.count == 0) return pred;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t c = 0; c < truth.a.cols(); ++c) {
      const std::size_t j = c % d;
      if (i == j) continue;
      pred(i, c) = predict_variance_indep(truth.a_tilde(i, c), a_tilde.variance(i, c),
                                          ratio.variance(i, j), ratio.mean(i, j));
    }
  }
  return pred;
}

SensorGraph graph_for(const ExperimentConfig& cfg, std::size_t d) {
  return cfg.star_graph ? SensorGraph::star(d) : SensorGraph::complete(d);
}

std::vector<double> eta_point(const ExperimentConfig& cfg, std::size_t d, double eta) {
  std::vector<double> out(d, cfg.sweep_mode == SweepMode::kBothEqual ? eta : cfg.eta_fixed);
  out[0] = eta;
  return out;
}

template <class T>
std::vector<T> json_list(const json& j, const char* key) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kConfigError, std::string(key) + ": expected a list");
  }
  std::vector<T> out;
  for (const json& v : j) out.push_back(v.get<T>());
  return out;
}

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::kTable1: return "table1";
    case Command::kTable2: return "table2";
    case Command::kTable3: return "table3";
    case Command::kSweep: return "sweep";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  if (name == "table1") return Command::kTable1;
  if (name == "table2") return Command::kTable2;
  if (name == "table3") return Command::kTable3;
  if (name == "sweep") return Command::kSweep;
  throw Error(ErrorCode::kConfigError, "unknown command '" + std::string(name) + "'");
}

std::vector<VarModel> benchmark_models() {
  const Matrix id = Matrix::identity(2);
  return {
      VarModel({Matrix{{0.25, 1.0}, {0.0, -0.2}}}, id),
      VarModel({Matrix{{0.7, 0.0}, {1.0, -0.5}}}, id),
      VarModel({Matrix{{0.9, 0.5}, {-0.5, 0.7}}}, id),
  };
}

ExperimentConfig default_config(Command c, bool full) {
  ExperimentConfig cfg;
  cfg.replications = full ? 1000 : 200;
  switch (c) {
    case Command::kTable1:
    case Command::kTable2:
      cfg.models = benchmark_models();
      cfg.sample_counts = {250, 500, 1000, 2000};
      break;
    case Command::kTable3:
      cfg.random.dims = {2, 3, 4, 5, 6, 7, 8};
      cfg.random.count = full ? 1000 : 200;
      cfg.sample_counts = {2000};
      cfg.replications = 1;
      break;
    case Command::kSweep:
      cfg.models = benchmark_models();
      cfg.sample_counts = {10000};
      cfg.replications = full ? 1001 : 200;
      cfg.eta_grid = {0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
      break;
  }
  return cfg;
}

ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig cfg) {
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw Error(ErrorCode::kConfigError, "config: expected an object");
    for (const auto& [key, value] : j.items()) {
      if (key == "models") {
        cfg.models.clear();
        for (const json& m : value) cfg.models.push_back(model_from_json(m.dump()));
      } else if (key == "random") {
        if (value.contains("dims")) cfg.random.dims = json_list<std::size_t>(value["dims"], "dims");
        if (value.contains("count")) cfg.random.count = value["count"].get<std::size_t>();
        if (value.contains("band")) {
          const auto band = json_list<double>(value["band"], "band");
          if (band.size() != 2) throw Error(ErrorCode::kConfigError, "band: need [lo, hi]");
          cfg.random.band = {band[0], band[1]};
        }
      } else if (key == "T") {
        cfg.sample_counts = json_list<std::size_t>(value, "T");
      } else if (key == "replications") {
        cfg.replications = value.get<std::size_t>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "variant") {
        cfg.variant = parse_ratio_variant(value.get<std::string>());
      } else if (key == "graph") {
        const std::string g = value.get<std::string>();
        if (g != "complete" && g != "star") {
          throw Error(ErrorCode::kConfigError, "graph must be \"complete\" or \"star\"");
        }
        cfg.star_graph = g == "star";
      } else if (key == "eta") {
        cfg.eta_grid = json_list<double>(value, "eta");
      } else if (key == "sweep") {
        const std::string s = value.get<std::string>();
        if (s != "both" && s != "first") {
          throw Error(ErrorCode::kConfigError, "sweep must be \"both\" or \"first\"");
        }
        cfg.sweep_mode = s == "both" ? SweepMode::kBothEqual : SweepMode::kFirstOnly;
      } else if (key == "eta_fixed") {
        cfg.eta_fixed = value.get<double>();
      } else {
        throw Error(ErrorCode::kConfigError, "config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("config: ") + e.what());
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg, Command c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); };
  if (cfg.replications < 1) fail("replications must be >= 1");
  if (cfg.sample_counts.empty()) fail("T list is empty");
  if (c == Command::kTable3) {
    if (cfg.random.dims.empty()) fail("random.dims is empty");
    for (std::size_t d : cfg.random.dims) {
      if (d < 2 || d > 8) fail("random.dims must lie in [2, 8]");
    }
    if (cfg.random.count < 1) fail("random.count must be >= 1");
    if (!(cfg.random.band.lo > 0.0 && cfg.random.band.lo < cfg.random.band.hi &&
          cfg.random.band.hi < 1.0)) {
      fail("random.band must satisfy 0 < lo < hi < 1");
    }
    for (std::size_t T : cfg.sample_counts) {
      if (T < 3) fail("T must be >= p + 2");
    }
    return;
  }
  if (cfg.models.empty()) fail("no models");
  for (const VarModel& m : cfg.models) {
    if (!m.stationary()) fail("model is not stationary");
    for (std::size_t T : cfg.sample_counts) {
      if (T < m.order() + 2 || T <= m.dim() * (m.order() + 1)) {
        fail("T = " + std::to_string(T) + " too small for the model");
      }
    }
  }
  if (c == Command::kTable1 || c == Command::kTable2) {
    for (const VarModel& m : cfg.models) {
      if (m.order() != 1) fail("tables 1 and 2 take VAR(d, 1) models");
      if (m.dim() < 2) fail("tables 1 and 2 need d >= 2");
    }
  }
  if (c == Command::kSweep) {
    if (cfg.eta_grid.empty()) fail("eta grid is empty");
    for (double e : cfg.eta_grid) {
      if (!(e > 0.0) || !std::isfinite(e)) fail("eta values must be positive");
    }
    if (cfg.sweep_mode == SweepMode::kFirstOnly && !(cfg.eta_fixed > 0.0)) {
      fail("eta_fixed must be positive");
    }
  }
}

std::string config_to_json(const ExperimentConfig& cfg, Command c) {
  json j;
  j["command"] = to_string(c);
  j["version"] = kVersion;
  j["seed"] = cfg.seed;
  j["replications"] = cfg.replications;
  j["T"] = cfg.sample_counts;
  if (c == Command::kTable3) {
    j["random"] = {{"dims", cfg.random.dims},
                   {"count", cfg.random.count},
                   {"band", {cfg.random.band.lo, cfg.random.band.hi}}};
  } else {
    json models = json::array();
    for (const VarModel& m : cfg.models) models.push_back(json::parse(model_to_json(m)));
    j["models"] = std::move(models);
  }
  if (c == Command::kTable1 || c == Command::kTable2) {
    j["variant"] = to_string(cfg.variant);
    j["graph"] = cfg.star_graph ? "star" : "complete";
  }
  if (c == Command::kSweep) {
    j["eta"] = cfg.eta_grid;
    j["sweep"] = cfg.sweep_mode == SweepMode::kBothEqual ? "both" : "first";
    j["eta_fixed"] = cfg.eta_fixed;
  }
  return j.dump();
}

EntryAccumulator::EntryAccumulator(std::size_t rows, std::size_t cols,
                                   bool keep_samples)
    : rows_(rows),
      cols_(cols),
      keep_samples_(keep_samples),
      sum_(rows, cols),
      sum_sq_err_(rows, cols),
      sum_err_(rows, cols),
      abs_errors_(keep_samples ? rows * cols : 0) {}

void EntryAccumulator::add(const Matrix& estimate, const Matrix& truth) {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const double x = estimate(i, j);
      const double e = x - truth(i, j);
      sum_(i, j) += x;
      sum_err_(i, j) += e;
      sum_sq_err_(i, j) += e * e;
      if (keep_samples_) abs_errors_[i * cols_ + j].push_back(std::abs(e));
    }
  }
  ++count_;
}

EntryStats EntryAccumulator::stats() const {
  EntryStats s{count_, Matrix(rows_, cols_, kNaN), Matrix(rows_, cols_, kNaN),
               Matrix(rows_, cols_, kNaN)};
  if (count_ == 0) return s;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      s.mean(i, j) = sum_(i, j) / n;
      s.mse(i, j) = sum_sq_err_(i, j) / n;
      const double bias = sum_err_(i, j) / n;
      s.variance(i, j) = std::max(0.0, s.mse(i, j) - bias * bias);
    }
  }
  return s;
}

Matrix EntryAccumulator::median_abs_error() const {
  Matrix out(rows_, cols_, kNaN);
  if (!keep_samples_ || count_ == 0) return out;
  for (std::size_t k = 0; k < rows_ * cols_; ++k) {
    std::vector<double> v = abs_errors_[k];
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double med = v[mid];
    if (v.size() % 2 == 0) {
      med = 0.5 * (med + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    out.data()[k] = med;
  }
  return out;
}

Matrix stack_coefficients(const std::vector<Matrix>& coeff) {
  const std::size_t d = coeff.at(0).rows();
  Matrix out(d, d * coeff.size());
  for (std::size_t s = 0; s < coeff.size(); ++s) out.set_block(0, s * d, coeff[s]);
  return out;
}

std::vector<Scheme2Cell> run_scheme2_study(const ExperimentConfig& cfg) {
  std::vector<Scheme2Cell> cells;
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
    const VarModel& model = cfg.models[mi];
    const std::size_t d = model.dim();
    const std::size_t p = model.order();
    const Truth truth = truth_of(model);
    const SensorGraph graph = graph_for(cfg, d);
    for (std::size_t T : cfg.sample_counts) {
      EntryAccumulator a_hat(d, d * p), a_tilde(d, d * p), ratio(d, d), mlse(d, d * p);
      Scheme2Cell cell;
      cell.model = mi;
      cell.T = T;
      cell.replications = cfg.replications;
      for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        const Matrix traj = simulate(model, T, derive_seed(cfg.seed, mi, T, rep));
        try {
          const Scheme2Result r =
              estimate_model_s2(sign_and_predominance(traj, graph), p, cfg.variant);
          a_hat.add(stack_coefficients(r.parameters.coeff), truth.a);
          a_tilde.add(stack_coefficients(r.unscaled.a_tilde), truth.a_tilde);
          ratio.add(r.ratios.r, truth.ratio);
        } catch (const Error&) {
          ++cell.failures;
        }
        try {
          mlse.add(stack_coefficients(mlse_continuous(traj, p).coeff), truth.a);
        } catch (const Error&) {
          ++cell.mlse_failures;
        }
      }
      cell.a_hat = a_hat.stats();
      cell.a_tilde = a_tilde.stats();
      cell.ratio = ratio.stats();
      cell.mlse = mlse.stats();
      cell.prediction = independence_prediction(truth, cell.a_tilde, cell.ratio);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<Table3Row> run_table3(const ExperimentConfig& cfg) {
  const std::vector<RatioVariant> variants = {
      RatioVariant::kSimple, RatioVariant::kOptimized, RatioVariant::kEfficient,
      RatioVariant::kLogLeastSquares};
  std::vector<Table3Row> rows;
  for (std::size_t d : cfg.random.dims) {
    for (std::size_t T : cfg.sample_counts) {
      Table3Row row;
      row.d = d;
      row.T = T;
      struct Sums {
        double all = 0.0, off = 0.0, first = 0.0, other = 0.0;
      };
      std::vector<Sums> sums(variants.size());
      Sums mlse_sums;
      auto accumulate = [d](Sums& s, const Matrix& est, const Matrix& truth) {
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            const double e = est(i, j) - truth(i, j);
            const double e2 = e * e;
            s.all += e2;
            if (i == j) continue;
            s.off += e2;
            (i == 0 || j == 0 ? s.first : s.other) += e2;
          }
        }
      };
      for (std::size_t m = 0; m < cfg.random.count; ++m) {
        const VarModel model = random_model(
            d, derive_seed(cfg.seed, kRandomModelStream + d, 0, m), cfg.random.band);
        const Matrix& truth = model.coeff(0);
        const Matrix traj =
            simulate(model, T, derive_seed(cfg.seed, kRandomTrajectoryStream + d, T, m));
        const BinaryRecord rec = sign_and_predominance(traj, SensorGraph::complete(d));
        std::vector<Matrix> estimates;
        Matrix mlse_est;
        try {
          for (RatioVariant v : variants) {
            estimates.push_back(estimate_model_s2(rec, 1, v).parameters.coeff[0]);
          }
          mlse_est = mlse_continuous(traj, 1).coeff[0];
        } catch (const Error&) {
          ++row.failures;
          continue;
        }
        for (std::size_t k = 0; k < variants.size(); ++k) {
          accumulate(sums[k], estimates[k], truth);
        }
        accumulate(mlse_sums, mlse_est, truth);
        ++row.models;
      }
      const double n = static_cast<double>(row.models);
      const double dd = static_cast<double>(d);
      auto mean = [&](double s, double entries) {
        return entries > 0.0 && n > 0.0 ? s / (n * entries) : kNaN;
      };
      for (std::size_t k = 0; k < variants.size(); ++k) {
        row.variants.push_back({variants[k], mean(sums[k].all, dd * dd),
                                mean(sums[k].off, dd * (dd - 1.0)),
                                mean(sums[k].first, 2.0 * (dd - 1.0)),
                                mean(sums[k].other, (dd - 1.0) * (dd - 2.0))});
      }
      row.mlse_all = mean(mlse_sums.all, dd * dd);
      row.mlse_offdiag = mean(mlse_sums.off, dd * (dd - 1.0));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepPoint> run_threshold_sweep(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
    const VarModel& model = cfg.models[mi];
    const std::size_t d = model.dim();
    const std::size_t p = model.order();
    const Truth truth = truth_of(model);
    for (std::size_t T : cfg.sample_counts) {
      for (double eta : cfg.eta_grid) {
        SweepPoint pt;
        pt.model = mi;
        pt.T = T;
        pt.eta = eta_point(cfg, d, eta);
        pt.replications = cfg.replications;
        pt.failure_bound =
            failure_lower_bound(*std::max_element(pt.eta.begin(), pt.eta.end()), T);
        std::vector<double> c(d);
        for (std::size_t i = 0; i < d; ++i) c[i] = pt.eta[i] * truth.sigmas[i];

        EntryAccumulator a_hat(d, d * p, true), a_tilde(d, d * p), ratio(d, d);
        for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
          // Same trajectories at every grid point: common random numbers.
          const Matrix traj = simulate(model, T, derive_seed(cfg.seed, mi, T, rep));
          try {
            const Scheme1Result r = estimate_model_s1(threshold_quantize(traj, c), p);
            if (r.failed()) {
              ++pt.failures;
              continue;
            }
            a_hat.add(stack_coefficients(r.model->coeff), truth.a);
            a_tilde.add(stack_coefficients(r.unscaled->a_tilde), truth.a_tilde);
            ratio.add(r.ratios->r, truth.ratio);
          } catch (const Error&) {
            ++pt.failures;
          }
        }
        pt.a_hat = a_hat.stats();
        pt.a_tilde = a_tilde.stats();
        pt.ratio = ratio.stats();
        pt.prediction = independence_prediction(truth, pt.a_tilde, pt.ratio);
        pt.median_abs_error = a_hat.median_abs_error();
        points.push_back(std::move(pt));
      }
    }
  }
  return points;
}

}  // namespace bitvar
