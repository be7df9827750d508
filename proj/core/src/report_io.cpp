#include "bitvar/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include "bitvar/error.hpp"
#include "bitvar/version.hpp"
#include "json_util.hpp"

namespace bitvar {

using detail::json;

namespace {

constexpr const char* kMseDefinition =
    "entrywise mean over successful replications of (estimate - truth)^2; "
    "failed replications are excluded and counted under 'failures'";

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class RowSink {
 public:
  explicit RowSink(Report& r) : r_(r) {}

  void group(std::string section, std::string model, std::size_t T, std::string setting) {
    section_ = std::move(section);
    model_ = std::move(model);
    T_ = T;
    setting_ = std::move(setting);
  }

  void scalar(const std::string& stat, double v) {
    r_.rows.push_back({section_, model_, T_, setting_, stat, std::nullopt, std::nullopt, v});
  }

  void matrix(const std::string& stat, const Matrix& m, bool null_diagonal = false) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const bool diag = null_diagonal && i == j % m.rows();
        r_.rows.push_back({section_, model_, T_, setting_, stat, i, j,
                           diag ? std::nan("") : m(i, j)});
      }
    }
  }

 private:
  Report& r_;
  std::string section_, model_, setting_;
  std::size_t T_ = 0;
};

Report start(Command c, const ExperimentConfig& cfg) {
  Report r;
  r.command = c;
  r.config_json = config_to_json(cfg, c);
  return r;
}

void counts(RowSink& sink, const std::string& model, std::size_t T, std::size_t reps,
            std::size_t failures) {
  sink.group("counts", model, T, "");
  sink.scalar("replications", static_cast<double>(reps));
  sink.scalar("failures", static_cast<double>(failures));
}

std::string eta_label(const std::vector<double>& eta) {
  std::string s;
  for (std::size_t i = 0; i < eta.size(); ++i) s += (i ? ";" : "") + format_double(eta[i]);
  return s;
}

}  // namespace

Report table1_report(const ExperimentConfig& cfg, const std::vector<Scheme2Cell>& cells) {
  Report r = start(Command::kTable1, cfg);
  RowSink sink(r);
  for (const Scheme2Cell& c : cells) {
    const std::string model = std::to_string(c.model);
    counts(sink, model, c.T, c.replications, c.failures);
    sink.group("scheme2", model, c.T, to_string(cfg.variant));
    sink.matrix("mean", c.a_hat.mean);
    sink.matrix("mse", c.a_hat.mse);
    sink.group("mlse", model, c.T, "");
    sink.scalar("failures", static_cast<double>(c.mlse_failures));
    sink.matrix("mean", c.mlse.mean);
    sink.matrix("mse", c.mlse.mse);
  }
  return r;
}

Report table2_report(const ExperimentConfig& cfg, const std::vector<Scheme2Cell>& cells) {
  Report r = start(Command::kTable2, cfg);
  RowSink sink(r);
  const std::string variant = to_string(cfg.variant);
  for (const Scheme2Cell& c : cells) {
    const std::string model = std::to_string(c.model);
    counts(sink, model, c.T, c.replications, c.failures);
    sink.group("a_hat", model, c.T, variant);
    sink.matrix("mse", c.a_hat.mse);
    sink.matrix("variance", c.a_hat.variance);
    sink.group("a_tilde", model, c.T, variant);
    sink.matrix("mse", c.a_tilde.mse);
    sink.matrix("variance", c.a_tilde.variance);
    sink.group("ratio", model, c.T, variant);
    sink.matrix("mean", c.ratio.mean, true);
    sink.matrix("mse", c.ratio.mse, true);
    sink.matrix("variance", c.ratio.variance, true);
    sink.group("prediction", model, c.T, variant);
    sink.matrix("variance", c.prediction);
  }
  return r;
}

Report table3_report(const ExperimentConfig& cfg, const std::vector<Table3Row>& rows) {
  Report r = start(Command::kTable3, cfg);
  RowSink sink(r);
  for (const Table3Row& row : rows) {
    const std::string d = std::to_string(row.d);
    counts(sink, d, row.T, row.models + row.failures, row.failures);
    for (const Table3Variant& v : row.variants) {
      sink.group("scheme2", d, row.T, to_string(v.variant));
      sink.scalar("mse_all", v.mse_all);
      sink.scalar("mse_offdiag", v.mse_offdiag);
      sink.scalar("mse_offdiag_first", v.mse_offdiag_first);
      sink.scalar("mse_offdiag_other", v.mse_offdiag_other);
    }
    sink.group("mlse", d, row.T, "");
    sink.scalar("mse_all", row.mlse_all);
    sink.scalar("mse_offdiag", row.mlse_offdiag);
  }
  return r;
}

Report sweep_report(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points) {
  Report r = start(Command::kSweep, cfg);
  RowSink sink(r);
  for (const SweepPoint& p : points) {
    const std::string model = std::to_string(p.model);
    const std::string eta = eta_label(p.eta);
    sink.group("counts", model, p.T, eta);
    sink.scalar("replications", static_cast<double>(p.replications));
    sink.scalar("failures", static_cast<double>(p.failures));
    sink.scalar("failure_bound", p.failure_bound);
    sink.group("a_hat", model, p.T, eta);
    sink.matrix("mean", p.a_hat.mean);
    sink.matrix("mse", p.a_hat.mse);
    sink.matrix("variance", p.a_hat.variance);
    sink.matrix("median_abs_error", p.median_abs_error);
    sink.group("a_tilde", model, p.T, eta);
    sink.matrix("mse", p.a_tilde.mse);
    sink.matrix("variance", p.a_tilde.variance);
    sink.group("ratio", model, p.T, eta);
    sink.matrix("mse", p.ratio.mse, true);
    sink.matrix("variance", p.ratio.variance, true);
    sink.group("prediction", model, p.T, eta);
    sink.matrix("variance", p.prediction);
  }
  return r;
}

Report run_command(Command c, const ExperimentConfig& cfg) {
  validate_config(cfg, c);
  switch (c) {
    case Command::kTable1: return table1_report(cfg, run_scheme2_study(cfg));
    case Command::kTable2: return table2_report(cfg, run_scheme2_study(cfg));
    case Command::kTable3: return table3_report(cfg, run_table3(cfg));
    case Command::kSweep: return sweep_report(cfg, run_threshold_sweep(cfg));
  }
  throw Error(ErrorCode::kInvalidArgument, "run_command: unknown command");
}

std::string report_csv(const Report& r) {
  std::string out = "section,model,T,setting,statistic,i,j,value\n";
  for (const ReportRow& row : r.rows) {
    out += row.section + ',' + row.model + ',' + std::to_string(row.T) + ',' + row.setting +
           ',' + row.statistic + ',' + (row.i ? std::to_string(*row.i) : "") + ',' +
           (row.j ? std::to_string(*row.j) : "") + ',' + format_double(row.value) + '\n';
  }
  return out;
}

std::string report_json(const Report& r) {
  using Key = std::tuple<std::string, std::string, std::size_t, std::string>;
  json groups = json::array();
  std::map<Key, std::size_t> index;
  for (const ReportRow& row : r.rows) {
    const Key key{row.section, row.model, row.T, row.setting};
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      groups.push_back({{"section", row.section},
                        {"model", row.model},
                        {"T", row.T},
                        {"setting", row.setting},
                        {"values", json::object()}});
    }
    json& values = groups[it->second]["values"];
    const json v = std::isfinite(row.value) ? json(row.value) : json(nullptr);
    if (!row.i) {
      values[row.statistic] = v;
      continue;
    }
    json& m = values[row.statistic];
    if (m.is_null()) m = json::array();
    while (m.size() <= *row.i) m.push_back(json::array());
    json& line = m[*row.i];
    while (line.size() <= *row.j) line.push_back(nullptr);
    line[*row.j] = v;
  }
  const json config = json::parse(r.config_json);
  json out;
  out["command"] = to_string(r.command);
  out["version"] = kVersion;
  out["seed"] = config.at("seed");
  out["mse_definition"] = kMseDefinition;
  out["config"] = config;
  out["groups"] = std::move(groups);
  return out.dump(1) + '\n';
}

void write_report(const Report& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  const std::string stem = to_string(r.command);
  for (const auto& [ext, text] :
       {std::pair{".csv", report_csv(r)}, std::pair{".json", report_json(r)}}) {
    const std::filesystem::path path = dir / (stem + ext);
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
}

}  // namespace bitvar
