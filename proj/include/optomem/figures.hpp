#pragma once

#include <string>
#include <vector>

#include "optomem/sweep.hpp"

namespace optomem {

inline constexpr const char* kCodeVersion = "0.1.0";

/// Known figure data products (CSV column subsets of the sweep row schema).
struct FigureDefinition {
  std::string id;
  Model model;
  SweepSpec spec;                    // grid + base config
  std::vector<std::string> columns;  // emitted columns (subset + derived)
};

std::vector<std::string> figure_ids();

FigureDefinition figure_definition(const std::string& id, const ExperimentConfig& cfg);

struct FigureOutput {
  std::string csv;
  std::string manifest_json;
};

/// Deterministic figure data: CSV (RFC-4180, 17 significant digits) plus a
/// JSON manifest recording every parameter, the covariance mode and the code
/// version. Identical configuration => byte-identical output.
FigureOutput reproduce_figure(const std::string& id, const ExperimentConfig& cfg,
                              ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace optomem
