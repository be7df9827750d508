#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bitvar/matrix.hpp"
#include "bitvar/scheme2.hpp"
#include "bitvar/var_model.hpp"

namespace bitvar {

enum class Command { kTable1, kTable2, kTable3, kSweep };

const char* to_string(Command c) noexcept;
Command parse_command(std::string_view name);

enum class SweepMode {
  kBothEqual,  // every eta_i follows the grid
  kFirstOnly,  // eta_1 follows the grid, the others stay at eta_fixed
};

struct RandomModelSpec {
  std::vector<std::size_t> dims;
  std::size_t count = 200;
  SpectralBand band;
};

struct ExperimentConfig {
  std::vector<VarModel> models;
  RandomModelSpec random;
  std::vector<std::size_t> sample_counts;
  std::size_t replications = 200;
  std::uint64_t seed = 1;
  RatioVariant variant = RatioVariant::kSimple;
  bool star_graph = false;
  std::vector<double> eta_grid;
  SweepMode sweep_mode = SweepMode::kBothEqual;
  double eta_fixed = 0.5;
};

/// The three VAR(2, 1) benchmark models with Sigma_E = I.
std::vector<VarModel> benchmark_models();

/// Desk-scale defaults (200 replications / random models); `full` restores
/// 1000 (1001 for sweeps).
ExperimentConfig default_config(Command c, bool full = false);

/// Overrides `base` with the keys present in a JSON object:
///   models: [model JSON...]       random: {dims, count, band: [lo, hi]}
///   T: [..]  replications  seed  variant  graph: "complete" | "star"
///   eta: [..]  sweep: "both" | "first"  eta_fixed
/// Throws kConfigError.
ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base);

/// Throws kConfigError when the config cannot drive command `c`.
void validate_config(const ExperimentConfig& cfg, Command c);

/// Canonical JSON echo of a config.
std::string config_to_json(const ExperimentConfig& cfg, Command c);

/// Per-entry statistics over the successful replications. MSE is the mean of
/// (estimate - truth)^2; variance is taken around the sample mean (divisor n).
struct EntryStats {
  std::size_t count = 0;
  Matrix mean;
  Matrix mse;
  Matrix variance;
};

class EntryAccumulator {
 public:
  EntryAccumulator(std::size_t rows, std::size_t cols, bool keep_samples = false);
  void add(const Matrix& estimate, const Matrix& truth);
  std::size_t count() const noexcept { return count_; }
  EntryStats stats() const;
  /// Median of |estimate - truth| per entry; requires keep_samples.
  Matrix median_abs_error() const;

 private:
  std::size_t rows_, cols_;
  bool keep_samples_;
  std::size_t count_ = 0;
  Matrix sum_, sum_sq_err_, sum_err_;
  std::vector<std::vector<double>> abs_errors_;
};

/// (A_1 .. A_p) side by side, d x dp.
Matrix stack_coefficients(const std::vector<Matrix>& coeff);

/// Scheme 2 against the continuous-data estimator for one (model, T).
struct Scheme2Cell {
  std::size_t model = 0;
  std::size_t T = 0;
  std::size_t replications = 0;
  std::size_t failures = 0;       // scheme-2 replications that threw
  std::size_t mlse_failures = 0;
  EntryStats a_hat;       // stacked coefficients
  EntryStats a_tilde;     // unscaled coefficients
  EntryStats ratio;       // r_ij; diagonal entries are exact and reported null
  EntryStats mlse;
  /// Independence prediction for Var(a_hat) from the sample variances of
  /// a_tilde and r, the sample mean of r and the true a_tilde. NaN on the
  /// diagonal.
  Matrix prediction;
};

std::vector<Scheme2Cell> run_scheme2_study(const ExperimentConfig& cfg);

struct Table3Variant {
  RatioVariant variant;
  double mse_all = 0.0;
  double mse_offdiag = 0.0;
  double mse_offdiag_first = 0.0;  // off-diagonal entries in row or column 0
  double mse_offdiag_other = 0.0;
};

struct Table3Row {
  std::size_t d = 0;
  std::size_t T = 0;
  std::size_t models = 0;    // models used (no variant failed)
  std::size_t failures = 0;  // models dropped because some estimator threw
  std::vector<Table3Variant> variants;
  double mlse_all = 0.0;
  double mlse_offdiag = 0.0;
};

std::vector<Table3Row> run_table3(const ExperimentConfig& cfg);

struct SweepPoint {
  std::size_t model = 0;
  std::size_t T = 0;
  std::vector<double> eta;
  std::size_t replications = 0;
  std::size_t failures = 0;
  double failure_bound = 0.0;
  EntryStats a_hat;
  EntryStats a_tilde;
  EntryStats ratio;
  Matrix prediction;
  Matrix median_abs_error;
};

std::vector<SweepPoint> run_threshold_sweep(const ExperimentConfig& cfg);

}  // namespace bitvar
