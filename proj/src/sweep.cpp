#include "optomem/sweep.hpp"

#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace optomem {

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::FilterFreq: return "filter_freq";
    case SweepVariable::LoPhase: return "lo_phase";
    case SweepVariable::Dq1: return "dq1";
    case SweepVariable::Dq2: return "dq2";
    case SweepVariable::Temperature: return "temperature";
    case SweepVariable::Reflectivity: return "reflectivity";
    case SweepVariable::Efficiency: return "detector_efficiency";
  }
  return "?";
}

SweepVariable sweep_variable_from_string(const std::string& s) {
  if (s == "filter_freq" || s == "omega_l") return SweepVariable::FilterFreq;
  if (s == "lo_phase" || s == "theta") return SweepVariable::LoPhase;
  if (s == "dq1") return SweepVariable::Dq1;
  if (s == "dq2") return SweepVariable::Dq2;
  if (s == "temperature") return SweepVariable::Temperature;
  if (s == "reflectivity") return SweepVariable::Reflectivity;
  if (s == "detector_efficiency" || s == "eta") return SweepVariable::Efficiency;
  throw config_error("unknown sweep variable '" + s + "'");
}

void SweepSpec::validate() const {
  if (points < 2) throw config_error("sweep: points must be >= 2");
  if (spacing == GridSpacing::Log && (start <= 0.0 || stop <= 0.0))
    throw config_error("sweep: log spacing requires positive bounds");
  switch (variable) {
    case SweepVariable::Efficiency:
      if (start <= 0.0 || stop > 1.0) throw config_error("sweep: eta must lie in (0,1]");
      break;
    case SweepVariable::Temperature:
      if (start <= 0.0) throw config_error("sweep: temperature must be positive");
      break;
    case SweepVariable::Reflectivity:
      if (start < 0.0 || stop >= 1.0) throw config_error("sweep: reflectivity must lie in [0,1)");
      break;
    case SweepVariable::Dq1:
    case SweepVariable::Dq2: {
      const double bound = base.params.max_disorder_fraction * base.params.cavity_length;
      if (std::abs(start) >= bound || std::abs(stop) >= bound)
        throw config_error("sweep: disorder range exceeds validity bound");
      break;
    }
    default:
      break;
  }
}

std::vector<double> SweepSpec::grid() const {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    g[i] = spacing == GridSpacing::Linear
               ? start + (stop - start) * t
               : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * t);
  }
  return g;
}

SweepSpec load_sweep_spec(const std::string& path) {
  IniFile ini = IniFile::parse_file(path);
  // Split off the [sweep] section, the rest is an experiment configuration.
  std::string cfg_text;
  // Rebuild experiment config from the same file via the typed loader: the
  // loader rejects unknown keys, so strip sweep.* first.
  IniFile cfg_only = ini;  // copy; experiment_config_from_ini checks known keys
  // Cheap approach: re-parse the file, dropping [sweep] lines.
  {
    std::string text;
    {
      FILE* f = std::fopen(path.c_str(), "rb");
      if (!f) throw config_error("cannot open sweep spec '" + path + "'");
      char buf[4096];
      size_t n;
      while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, n);
      std::fclose(f);
    }
    std::string filtered;
    bool in_sweep = false;
    size_t pos = 0;
    while (pos <= text.size()) {
      const size_t nl = text.find('\n', pos);
      const std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
      std::string t = line;
      const size_t h = t.find_first_not_of(" \t");
      if (h != std::string::npos && t[h] == '[') {
        in_sweep = t.find("[sweep]") != std::string::npos;
      }
      if (!in_sweep) filtered += line + "\n";
      if (nl == std::string::npos) break;
      pos = nl + 1;
    }
    cfg_only = IniFile::parse_string(filtered, path);
  }

  SweepSpec spec;
  spec.base = experiment_config_from_ini(cfg_only);
  spec.variable = sweep_variable_from_string(ini.get_string("sweep.variable"));
  spec.start = ini.get_double("sweep.start");
  spec.stop = ini.get_double("sweep.stop");
  spec.points = static_cast<int>(ini.get_integer("sweep.points"));
  const std::string spacing = ini.get_string_or("sweep.spacing", "linear");
  if (spacing == "linear") {
    spec.spacing = GridSpacing::Linear;
  } else if (spacing == "log") {
    spec.spacing = GridSpacing::Log;
  } else {
    throw config_error("sweep.spacing must be 'linear' or 'log'");
  }
  spec.validate();
  return spec;
}

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

const std::vector<std::string>& row_columns() {
  static const std::vector<std::string> cols = {
      "value",        "stable",       "h11",          "h12",          "h22",
      "f11",          "f12",          "f22",          "d",            "qvar1_pinv",
      "qvar2_pinv",   "qcov12_pinv",  "cvar1_pinv",   "cvar2_pinv",   "qvar1_single",
      "qvar2_single", "cvar1_single", "cvar2_single", "rank_h",       "rank_f",
      "nbar",         "omega_c",      "lyap_residual", "sympl_min_eig", "hf_min_eig_rel",
      "covariance_mode"};
  return cols;
}

}  // namespace

std::vector<std::string> evaluate_sweep_row(const SweepSpec& spec, double value) {
  SystemParams p = spec.base.params;
  Disorder d = spec.base.disorder;
  DetectionSettings det = spec.base.detection;
  switch (spec.variable) {
    case SweepVariable::FilterFreq: det.filter_freq = value; break;
    case SweepVariable::LoPhase: det.lo_phase = value; break;
    case SweepVariable::Dq1: d.dq1 = value; break;
    case SweepVariable::Dq2: d.dq2 = value; break;
    case SweepVariable::Temperature: p.temperature = value; break;
    case SweepVariable::Reflectivity:
      // Geometry (rest phases, derived frequencies) stays frozen at the base
      // calibration: the sweep probes the same device with different membrane
      // coatings, so the coupling map is re-evaluated at the same rest points.
      p.reflectivity = value;
      break;
    case SweepVariable::Efficiency: det.detector_efficiency = value; break;
  }

  std::vector<std::string> row(row_columns().size());
  row[0] = format_cell(value);
  row[25] = to_string(det.mode);

  try {
    const InfoPoint pt = evaluate_point(p, d, det);
    const CovarianceHealth health = validate_covariance(p, pt.base);
    if (health.lyapunov_residual > 1e-8)
      throw numerics_error("sweep: Lyapunov residual " +
                           std::to_string(health.lyapunov_residual) + " at grid value " +
                           format_cell(value));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(pt.info.h - pt.info.f);
    const double hnorm = pt.info.h.cwiseAbs().maxCoeff();
    const double hf_rel = hnorm > 0.0 ? es.eigenvalues().minCoeff() / hnorm : 0.0;

    row[1] = "1";
    row[2] = format_cell(pt.info.h(0, 0));
    row[3] = format_cell(pt.info.h(0, 1));
    row[4] = format_cell(pt.info.h(1, 1));
    row[5] = format_cell(pt.info.f(0, 0));
    row[6] = format_cell(pt.info.f(0, 1));
    row[7] = format_cell(pt.info.f(1, 1));
    row[8] = format_cell(pt.info.d);
    row[9] = format_cell(pt.info.h_pinv(0, 0));
    row[10] = format_cell(pt.info.h_pinv(1, 1));
    row[11] = format_cell(pt.info.h_pinv(0, 1));
    row[12] = format_cell(pt.info.f_pinv(0, 0));
    row[13] = format_cell(pt.info.f_pinv(1, 1));
    row[14] = format_cell(pt.info.h_single[0]);
    row[15] = format_cell(pt.info.h_single[1]);
    row[16] = format_cell(pt.info.f_single[0]);
    row[17] = format_cell(pt.info.f_single[1]);
    row[18] = std::to_string(pt.info.rank_h);
    row[19] = std::to_string(pt.info.rank_f);
    row[20] = format_cell(pt.base.nbar);
    row[21] = format_cell(pt.base.omega_c_eff);
    row[22] = format_cell(health.lyapunov_residual);
    row[23] = format_cell(health.min_symplectic_eig);
    row[24] = format_cell(hf_rel);
  } catch (const physics_error&) {
    // Unstable or unsolvable grid point: flagged row, physics columns empty.
    row[1] = "0";
  }
  return row;
}

ResultTable run_sweep(const SweepSpec& spec, ExecPolicy policy) {
  spec.validate();
  const std::vector<double> grid = spec.grid();
  ResultTable table;
  table.columns = row_columns();
  table.rows.resize(grid.size());

  if (policy == ExecPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < static_cast<long>(grid.size()); ++i)
      table.rows[i] = evaluate_sweep_row(spec, grid[i]);
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i)
      table.rows[i] = evaluate_sweep_row(spec, grid[i]);
  }
  return table;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += csv_quote(columns[i]);
  }
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_quote(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

int ResultTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw numerics_error("ResultTable: no column '" + name + "'");
}

std::vector<double> ResultTable::numeric(const std::string& name) const {
  const int idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (row[idx].empty()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      out.push_back(std::strtod(row[idx].c_str(), nullptr));
    }
  }
  return out;
}

}  // namespace optomem
