#include "optomem/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "optomem/constants.hpp"

namespace optomem {

namespace {

DetectionSettings detection_for(const DetectionSettings& base, const SampleSetting& s) {
  DetectionSettings det = base;
  det.lo_phase = s.theta;
  det.detector_efficiency = s.eta;
  det.filter_freq = s.filter_freq;
  det.detection_window = s.detection_window;
  det.mode = covariance_mode_from_string(s.covariance_mode);
  return det;
}

void check_digest(const SystemParams& p, const HomodyneSample& s) {
  if (s.setting.params_digest != params_digest(p))
    throw input_error("sample metadata was generated under a different configuration; "
                      "refusing to mix settings");
  if (s.setting.model != to_string(p.model))
    throw input_error("sample model '" + s.setting.model + "' does not match configuration");
}

// Measured quadrature variance S = R^T sigma_out R; NaN where unstable.
double measured_s(const SystemParams& p, const Disorder& d, const DetectionSettings& det) {
  try {
    const double var = homodyne_variance(p, d, det);
    const double eta = det.detector_efficiency;
    return (4.0 * eta * var - (1.0 - eta)) / (2.0 * eta);
  } catch (const physics_error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

SolutionCurve mle_solution_set(const HomodyneSample& sample, const SystemParams& p,
                               const DetectionSettings& base_detection, const GridSpec& grid,
                               std::optional<std::pair<double, double>> dq2_range) {
  if (sample.k.empty()) throw input_error("mle_solution_set: empty sample");
  if (grid.points < 2) throw config_error("mle_solution_set: grid needs at least 2 points");
  check_digest(p, sample);
  const DetectionSettings det = detection_for(base_detection, sample.setting);

  SolutionCurve curve;
  const double n = static_cast<double>(sample.k.size());
  const double eta = det.detector_efficiency;
  curve.rhs = 2.0 * sufficient_statistic(sample) / n - (1.0 - eta) / (2.0 * eta);

  const auto [lo, hi] = dq2_range.value_or(std::make_pair(grid.start, grid.stop));
  constexpr int kSubdiv = 128;

  for (int gi = 0; gi < grid.points; ++gi) {
    SolutionPoint pt;
    pt.dq1 = grid.start + (grid.stop - grid.start) * gi / (grid.points - 1);
    auto f = [&](double dq2) {
      return measured_s(p, {pt.dq1, dq2}, det) - curve.rhs;
    };
    double prev_x = lo, prev_f = f(lo);
    for (int si = 1; si <= kSubdiv; ++si) {
      const double x = lo + (hi - lo) * si / kSubdiv;
      const double fx = f(x);
      if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx <= 0.0 &&
          !(prev_f == 0.0 && fx == 0.0)) {
        double a = prev_x, b = x, fa = prev_f;
        for (int it = 0; it < 80; ++it) {
          const double m = (a + b) / 2.0;
          const double fm = f(m);
          if (!std::isfinite(fm)) break;
          if (fa * fm <= 0.0) {
            b = m;
          } else {
            a = m;
            fa = fm;
          }
        }
        pt.dq2_roots.push_back((a + b) / 2.0);
      }
      prev_x = x;
      prev_f = fx;
    }
    if (!pt.dq2_roots.empty()) curve.any_root = true;
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

MultiSettingEstimate mle_multi_setting(const std::vector<HomodyneSample>& samples,
                                       const SystemParams& p,
                                       const DetectionSettings& base_detection,
                                       double search_halfwidth) {
  if (samples.empty()) throw input_error("mle_multi_setting: no samples");
  std::map<std::pair<double, double>, int> distinct;
  for (const auto& s : samples) {
    check_digest(p, s);
    distinct[{s.setting.theta, s.setting.filter_freq}]++;
  }
  if (distinct.size() < 2)
    throw physics_error("mle_multi_setting: a single homodyne setting leaves the two disorders "
                        "under-identified (1-D solution manifold); provide >= 2 distinct settings");

  struct Setting {
    DetectionSettings det;
    double n = 0.0;
    double t = 0.0;
  };
  std::vector<Setting> st;
  for (const auto& s : samples) {
    Setting e;
    e.det = detection_for(base_detection, s.setting);
    e.n = static_cast<double>(s.k.size());
    e.t = sufficient_statistic(s);
    st.push_back(e);
  }

  // Identifiability: sensitivity vectors v_s = (R^T dsigma_i R)_i at the origin
  // must span both parameters.
  {
    std::vector<Eigen::Vector2d> vs;
    for (const auto& e : st) {
      const InfoPoint pt = evaluate_point(p, {0.0, 0.0}, e.det);
      Eigen::Vector2d r(std::cos(e.det.lo_phase), std::sin(e.det.lo_phase));
      const Eigen::Matrix2d d1 = pt.dsigma_out1.cast<double>();
      const Eigen::Matrix2d d2 = pt.dsigma_out2.cast<double>();
      vs.emplace_back(r.dot(d1 * r), r.dot(d2 * r));
    }
    double best_cross = 0.0;
    for (size_t a = 0; a < vs.size(); ++a)
      for (size_t b = a + 1; b < vs.size(); ++b) {
        const double cross = std::abs(vs[a].x() * vs[b].y() - vs[a].y() * vs[b].x());
        const double scale = vs[a].norm() * vs[b].norm();
        if (scale > 0.0) best_cross = std::max(best_cross, cross / scale);
      }
    if (best_cross < 1e-12)
      throw physics_error("mle_multi_setting: sensitivity vectors are parallel across settings; "
                          "the disorders are not jointly identifiable");
  }

  auto logl = [&](const Eigen::Vector2d& dq) {
    double val = 0.0;
    for (const auto& e : st) {
      const double v = homodyne_variance(p, {dq[0], dq[1]}, e.det);
      val += -0.5 * e.n * std::log(consts::two_pi * v) - e.t / (2.0 * v);
    }
    return val;
  };

  const double half = search_halfwidth > 0.0 ? search_halfwidth : 5e-8;

  // Coarse grid start.
  Eigen::Vector2d best(0.0, 0.0);
  double best_val = -std::numeric_limits<double>::infinity();
  constexpr int kCoarse = 17;
  for (int i = 0; i < kCoarse; ++i) {
    for (int j = 0; j < kCoarse; ++j) {
      Eigen::Vector2d x(-half + 2 * half * i / (kCoarse - 1),
                        -half + 2 * half * j / (kCoarse - 1));
      double v;
      try {
        v = logl(x);
      } catch (const physics_error&) {
        continue;
      }
      if (v > best_val) {
        best_val = v;
        best = x;
      }
    }
  }
  if (!std::isfinite(best_val))
    throw physics_error("mle_multi_setting: no stable point in the search box");

  // BFGS in coordinates scaled by the coarse grid cell.
  const double scale = half / (kCoarse - 1);
  auto f_scaled = [&](const Eigen::Vector2d& u) { return logl(best + scale * u); };
  auto grad = [&](const Eigen::Vector2d& u) {
    Eigen::Vector2d g;
    const double h = 1e-3;
    for (int i = 0; i < 2; ++i) {
      Eigen::Vector2d up = u, um = u;
      up[i] += h;
      um[i] -= h;
      g[i] = (f_scaled(up) - f_scaled(um)) / (2 * h);
    }
    return g;
  };

  Eigen::Vector2d u(0.0, 0.0);
  Eigen::Matrix2d binv = Eigen::Matrix2d::Identity();
  Eigen::Vector2d g = grad(u);
  double fu = f_scaled(u);
  int iters = 0;
  const double gtol = 1e-10 * std::max(1.0, std::abs(fu));
  for (; iters < 200 && g.norm() > gtol; ++iters) {
    Eigen::Vector2d dir = binv * g;  // ascent
    if (dir.dot(g) <= 0.0) {
      binv = Eigen::Matrix2d::Identity();
      dir = g;
    }
    double step = 1.0;
    Eigen::Vector2d un = u + step * dir;
    double fn = -std::numeric_limits<double>::infinity();
    for (int ls = 0; ls < 50; ++ls) {
      un = u + step * dir;
      try {
        fn = f_scaled(un);
      } catch (const physics_error&) {
        fn = -std::numeric_limits<double>::infinity();
      }
      if (fn > fu + 1e-4 * step * dir.dot(g)) break;
      step /= 2;
    }
    if (!(fn > fu)) break;
    const Eigen::Vector2d gn = grad(un);
    const Eigen::Vector2d sv = un - u;
    const Eigen::Vector2d yv = g - gn;  // ascent convention
    const double sy = sv.dot(yv);
    if (sy > 1e-14 * sv.norm() * yv.norm()) {
      const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
      binv = (eye - sv * yv.transpose() / sy) * binv * (eye - yv * sv.transpose() / sy) +
             sv * sv.transpose() / sy;
    }
    u = un;
    g = gn;
    fu = fn;
  }
  if (g.norm() > 1e3 * gtol && iters == 200)
    throw physics_error("mle_multi_setting: quasi-Newton failed to converge (|grad| = " +
                        std::to_string(g.norm()) + " after 200 iterations)");

  MultiSettingEstimate out;
  out.estimate = best + scale * u;
  out.log_likelihood = fu;
  out.iterations = iters;

  // FD Hessian of log L at the optimum (per metre^2).
  const double hh = scale * 0.05;
  auto ll = [&](double a, double b) { return logl({a, b}); };
  const double f0 = ll(out.estimate[0], out.estimate[1]);
  Eigen::Matrix2d hess;
  hess(0, 0) = (ll(out.estimate[0] + hh, out.estimate[1]) - 2 * f0 +
                ll(out.estimate[0] - hh, out.estimate[1])) / (hh * hh);
  hess(1, 1) = (ll(out.estimate[0], out.estimate[1] + hh) - 2 * f0 +
                ll(out.estimate[0], out.estimate[1] - hh)) / (hh * hh);
  hess(0, 1) = hess(1, 0) =
      (ll(out.estimate[0] + hh, out.estimate[1] + hh) - ll(out.estimate[0] + hh, out.estimate[1] - hh) -
       ll(out.estimate[0] - hh, out.estimate[1] + hh) + ll(out.estimate[0] - hh, out.estimate[1] - hh)) /
      (4 * hh * hh);
  out.hessian = hess;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess);
  const double tol = 1e-6 * es.eigenvalues().cwiseAbs().maxCoeff();
  out.hessian_negative_definite = es.eigenvalues().maxCoeff() <= tol;

  for (const auto& e : st) {
    const InfoPoint pt = evaluate_point(p, {out.estimate[0], out.estimate[1]}, e.det);
    out.joint_cfim += e.n * pt.info.f;
    const double v = homodyne_variance(p, {out.estimate[0], out.estimate[1]}, e.det);
    out.setting_residuals.push_back(std::abs(e.t / e.n - v) / v);
  }
  return out;
}

}  // namespace optomem
