#include "optomem/figures.hpp"

#include <json.hpp>

#include "optomem/constants.hpp"

namespace optomem {

std::vector<std::string> figure_ids() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4a",
          "fig4b", "fig5a", "fig5b", "fig6a", "fig6b"};
}

namespace {

void require_model(const std::string& id, const ExperimentConfig& cfg, Model m) {
  if (cfg.params.model != m)
    throw config_error("figure " + id + " requires the " + to_string(m) +
                       " model; configuration is " + to_string(cfg.params.model));
}

SweepSpec base_spec(const ExperimentConfig& cfg) {
  SweepSpec s;
  s.base = cfg;
  return s;
}

}  // namespace

FigureDefinition figure_definition(const std::string& id, const ExperimentConfig& cfg) {
  FigureDefinition def;
  def.id = id;
  def.spec = base_spec(cfg);
  const double wm = cfg.params.mech_freq;

  const std::vector<std::string> bound_cols = {
      "value",        "stable",       "qvar1_pinv",   "qvar2_pinv",   "cvar1_pinv",
      "cvar2_pinv",   "qvar1_single", "qvar2_single", "cvar1_single", "cvar2_single",
      "rank_h",       "rank_f",       "covariance_mode"};

  if (id == "fig2a" || id == "fig2b" || id == "fig3a" || id == "fig3b") {
    def.model = (id == "fig2a" || id == "fig3a") ? Model::CC : Model::TR;
    require_model(id, cfg, def.model);
    def.spec.variable = SweepVariable::FilterFreq;
    def.spec.start = -2.0 * wm;
    def.spec.stop = 2.0 * wm;
    def.spec.points = 201;
    def.columns = (id[3] == '2')
                      ? bound_cols
                      : std::vector<std::string>{"value", "stable", "d", "hf_min_eig_rel",
                                                 "covariance_mode"};
  } else if (id == "fig4a" || id == "fig4b") {
    def.model = Model::TR;
    require_model(id, cfg, def.model);
    def.spec.variable = SweepVariable::Dq1;
    def.spec.start = 0.0;
    def.spec.stop = 2e-6;
    // Figure-resolution grid (~16 points per lambda/2 period over 2 um).
    def.spec.points = 61;
    def.columns = (id == "fig4a")
                      ? std::vector<std::string>{"value", "stable", "d", "covariance_mode"}
                      : std::vector<std::string>{"value", "stable", "omega_c", "natural_freq"};
  } else if (id == "fig5a" || id == "fig5b") {
    def.model = (id == "fig5a") ? Model::CC : Model::TR;
    require_model(id, cfg, def.model);
    def.spec.variable = SweepVariable::Temperature;
    def.spec.start = 1.0;
    def.spec.stop = 1000.0;
    def.spec.points = 60;
    def.spec.spacing = GridSpacing::Log;
    def.columns = {"value",      "stable",       "qvar1_pinv",  "qvar2_pinv",
                   "qcov12_pinv", "qvar1_single", "qvar2_single", "d",
                   "covariance_mode"};
  } else if (id == "fig6a" || id == "fig6b") {
    def.model = Model::TR;
    require_model(id, cfg, def.model);
    def.spec.variable = SweepVariable::Reflectivity;
    // Log-spaced in r itself between the experimental value and the
    // high-reflectivity crossover; unstable points are emitted flagged.
    def.spec.start = cfg.params.reflectivity;
    def.spec.stop = 0.9999;
    def.spec.points = 60;
    def.spec.spacing = GridSpacing::Log;
    def.columns = (id == "fig6a")
                      ? std::vector<std::string>{"value", "stable", "qvar1_pinv", "qvar2_pinv",
                                                 "qvar1_single", "qvar2_single", "nbar",
                                                 "covariance_mode"}
                      : std::vector<std::string>{"value", "stable", "nbar"};
  } else {
    throw config_error("unknown figure id '" + id + "'");
  }
  def.spec.validate();
  return def;
}

FigureOutput reproduce_figure(const std::string& id, const ExperimentConfig& cfg,
                              ExecPolicy policy) {
  const FigureDefinition def = figure_definition(id, cfg);
  ResultTable table = run_sweep(def.spec, policy);

  // Project onto the figure's columns; derived columns handled here.
  ResultTable out;
  out.columns = def.columns;
  const double natural = static_cast<double>(cfg.params.mode_index) * consts::pi *
                         consts::c_light / cfg.params.cavity_length;
  for (const auto& row : table.rows) {
    std::vector<std::string> r;
    for (const auto& col : def.columns) {
      if (col == "natural_freq") {
        r.push_back(format_cell(natural));
      } else {
        r.push_back(row[table.column_index(col)]);
      }
    }
    out.rows.push_back(std::move(r));
  }

  // Abscissa label: rename "value" to the swept variable for self-description.
  out.columns[0] = to_string(def.spec.variable);

  nlohmann::ordered_json man;
  man["figure"] = id;
  man["code_version"] = kCodeVersion;
  man["model"] = to_string(cfg.params.model);
  man["swept_variable"] = to_string(def.spec.variable);
  man["grid"] = {{"start", def.spec.start},
                 {"stop", def.spec.stop},
                 {"points", def.spec.points},
                 {"spacing", def.spec.spacing == GridSpacing::Linear ? "linear" : "log"}};
  const SystemParams& p = cfg.params;
  man["system"] = {
      {"model", to_string(p.model)},       {"cavity_length", p.cavity_length},
      {"membrane_mass", p.membrane_mass},  {"mech_freq", p.mech_freq},
      {"mech_damping", p.mech_damping},    {"kappa", p.kappa},
      {"kappa1", p.kappa1},                {"kappa2", p.kappa2},
      {"kappa3", p.kappa3},                {"coupling", p.coupling},
      {"hopping", p.hopping},              {"reflectivity", p.reflectivity},
      {"temperature", p.temperature},      {"laser_power", p.laser_power},
      {"mode_index", p.mode_index},        {"detuning", p.detuning},
      {"cavity_freq", p.cavity_freq},      {"laser_freq", p.laser_freq},
      {"rest_phase_sum", p.rest_phase_sum},{"rest_phase_cc", p.rest_phase_cc}};
  man["detection"] = {{"detection_window", cfg.detection.detection_window},
                      {"filter_freq", cfg.detection.filter_freq},
                      {"detector_efficiency", cfg.detection.detector_efficiency},
                      {"lo_phase", cfg.detection.lo_phase},
                      {"covariance_mode", to_string(cfg.detection.mode)}};
  man["disorder"] = {{"dq1", cfg.disorder.dq1}, {"dq2", cfg.disorder.dq2}};

  FigureOutput fo;
  fo.csv = out.to_csv();
  fo.manifest_json = man.dump(2) + "\n";
  return fo;
}

}  // namespace optomem
