#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "optomem/pipeline.hpp"
#include "optomem/sampling.hpp"

namespace optomem {

/// One point of the single-setting likelihood-equation solution manifold.
struct SolutionPoint {
  double dq1 = 0.0;
  std::vector<double> dq2_roots;  // all roots at this dq1 (may be empty)
};

struct SolutionCurve {
  std::vector<SolutionPoint> points;
  double rhs = 0.0;  // (2/N) sum k^2 - (1-eta)/(2 eta)
  bool any_root = false;
};

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
};

/// Single-setting maximum-likelihood solution set: for each dq1 on the grid,
/// root-find dq2 solving R^T sigma_out(dq1, dq2) R = rhs by sign-bracketing
/// and bisection over the search interval; multiple roots all reported.
SolutionCurve mle_solution_set(const HomodyneSample& sample, const SystemParams& p,
                               const DetectionSettings& base_detection, const GridSpec& dq1_grid,
                               std::optional<std::pair<double, double>> dq2_range = {});

struct MultiSettingEstimate {
  Eigen::Vector2d estimate = Eigen::Vector2d::Zero();       // (dq1, dq2), m
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();        // of log L at the optimum, 1/m^2
  Eigen::Matrix2d joint_cfim = Eigen::Matrix2d::Zero();     // sum_s N_s F_s at the estimate, 1/m^2
  bool hessian_negative_definite = false;
  double log_likelihood = 0.0;
  std::vector<double> setting_residuals;  // per-setting |T/N - E[T/N]| / E[T/N]
  int iterations = 0;
};

/// Joint maximum-likelihood point estimate from >= 2 settings with
/// non-parallel sensitivity vectors: coarse-grid start, then quasi-Newton
/// (BFGS with backtracking) on the joint log-likelihood; second-derivative
/// test via a finite-difference Hessian.
MultiSettingEstimate mle_multi_setting(const std::vector<HomodyneSample>& samples,
                                       const SystemParams& p,
                                       const DetectionSettings& base_detection,
                                       double search_halfwidth = 0.0);

}  // namespace optomem
