#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optomem/config.hpp"
#include "optomem/pipeline.hpp"

namespace optomem {

enum class SweepVariable { FilterFreq, LoPhase, Dq1, Dq2, Temperature, Reflectivity, Efficiency };

std::string to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string& s);

enum class GridSpacing { Linear, Log };

struct SweepSpec {
  ExperimentConfig base;
  SweepVariable variable = SweepVariable::FilterFreq;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  GridSpacing spacing = GridSpacing::Linear;
  // Requested output groups; empty means all.
  std::vector<std::string> outputs;

  void validate() const;
  std::vector<double> grid() const;
};

SweepSpec load_sweep_spec(const std::string& path);

enum class ExecPolicy { Serial, Parallel };

/// A result table: header + formatted cells (17 significant digits, empty for
/// unavailable physics columns on unstable rows).
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;  // RFC-4180
  int column_index(const std::string& name) const;
  /// Numeric view of one column; NaN for empty cells.
  std::vector<double> numeric(const std::string& name) const;
};

/// Evaluates the sweep grid. Rows are pure functions of their grid point, so
/// the parallel path is bitwise identical to the serial reference.
ResultTable run_sweep(const SweepSpec& spec, ExecPolicy policy = ExecPolicy::Parallel);

/// One fully evaluated grid point as a formatted row (shared by both paths).
std::vector<std::string> evaluate_sweep_row(const SweepSpec& spec, double value);

std::string format_cell(double v);

}  // namespace optomem
