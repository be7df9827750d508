#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bitvar/experiments.hpp"

namespace bitvar {

/// One value of a report. Matrix statistics carry (i, j); scalars leave them
/// empty. NaN marks a value with no meaning (diagonal ratios, empty cells)
/// and is written as an empty CSV field / JSON null.
struct ReportRow {
  std::string section;
  std::string model;
  std::size_t T = 0;
  std::string setting;
  std::string statistic;
  std::optional<std::size_t> i, j;
  double value = 0.0;
};

struct Report {
  Command command = Command::kTable1;
  std::string config_json;
  std::vector<ReportRow> rows;
};

Report table1_report(const ExperimentConfig& cfg, const std::vector<Scheme2Cell>& cells);
Report table2_report(const ExperimentConfig& cfg, const std::vector<Scheme2Cell>& cells);
Report table3_report(const ExperimentConfig& cfg, const std::vector<Table3Row>& rows);
Report sweep_report(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points);

/// Validates, runs and tabulates one command.
Report run_command(Command c, const ExperimentConfig& cfg);

/// header: section,model,T,setting,statistic,i,j,value
std::string report_csv(const Report& r);
/// Rows grouped by (section, model, T, setting), with the config echo, the
/// code version and the MSE definition.
std::string report_json(const Report& r);

/// Writes <dir>/<command>.csv and <dir>/<command>.json. Throws kIoError.
void write_report(const Report& r, const std::filesystem::path& dir);

}  // namespace bitvar
