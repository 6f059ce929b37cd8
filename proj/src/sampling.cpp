#include "optomem/sampling.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "optomem/constants.hpp"
#include "optomem/errors.hpp"
#include "optomem/rng.hpp"

namespace optomem {

double HomodyneLaw::pdf(double k) const {
  const double r = precision();
  return std::sqrt(r / consts::two_pi) * std::exp(-r * k * k / 2.0);
}

HomodyneLaw homodyne_pdf(double quadrature_variance, double eta) {
  if (eta <= 0.0 || eta > 1.0) throw config_error("homodyne_pdf: eta must lie in (0,1]");
  if (quadrature_variance <= 0.0)
    throw physics_error("homodyne_pdf: non-positive quadrature variance");
  HomodyneLaw law;
  law.variance = (1.0 - eta + 2.0 * eta * quadrature_variance) / (4.0 * eta);
  return law;
}

HomodyneSample sample_homodyne(const HomodyneLaw& law, std::size_t n, uint64_t seed,
                               uint64_t stream) {
  if (n < 1) throw input_error("sample_homodyne: need at least one outcome");
  HomodyneSample s;
  s.seed = seed;
  s.stream = stream;
  s.k.resize(n);
  const GaussianStream g(seed, stream);
  const double sd = std::sqrt(law.variance);
  for (std::size_t i = 0; i < n; ++i) s.k[i] = sd * g.normal(i);
  return s;
}

double sufficient_statistic(const std::vector<double>& k) {
  if (k.empty()) throw input_error("sufficient_statistic: empty sample");
  double t = 0.0;
  for (double v : k) t += v * v;
  return t;
}

double sufficient_statistic(const HomodyneSample& sample) {
  return sufficient_statistic(sample.k);
}

std::string params_digest(const SystemParams& p) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s|L=%.17g|m=%.17g|wm=%.17g|g=%.17g|k=%.17g|k2=%.17g|J=%.17g|r=%.17g|T=%.17g|"
                "P=%.17g|n=%lld|det=%.17g",
                to_string(p.model).c_str(), p.cavity_length, p.membrane_mass, p.mech_freq,
                p.coupling, p.kappa, p.kappa2, p.hopping, p.reflectivity, p.temperature,
                p.laser_power, p.mode_index, p.detuning);
  return buf;
}

void write_sample_files(const std::string& csv_path, const HomodyneSample& sample) {
  std::ofstream csv(csv_path);
  if (!csv) throw input_error("cannot write sample file '" + csv_path + "'");
  csv << "k\n";
  char buf[64];
  for (double v : sample.k) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    csv << buf;
  }
  csv.close();

  nlohmann::ordered_json meta;
  meta["model"] = sample.setting.model;
  meta["theta"] = sample.setting.theta;
  meta["eta"] = sample.setting.eta;
  meta["filter_freq"] = sample.setting.filter_freq;
  meta["detection_window"] = sample.setting.detection_window;
  meta["covariance_mode"] = sample.setting.covariance_mode;
  meta["dq1_true"] = sample.setting.dq1_true;
  meta["dq2_true"] = sample.setting.dq2_true;
  meta["params_digest"] = sample.setting.params_digest;
  meta["seed"] = sample.seed;
  meta["stream"] = sample.stream;
  meta["n"] = sample.k.size();
  std::ofstream js(csv_path + ".json");
  if (!js) throw input_error("cannot write sample sidecar '" + csv_path + ".json'");
  js << meta.dump(2) << "\n";
}

HomodyneSample read_sample_files(const std::string& csv_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw input_error("cannot open sample file '" + csv_path + "'");
  std::string line;
  if (!std::getline(csv, line) || line != "k")
    throw input_error("sample file '" + csv_path + "': expected header 'k'");
  HomodyneSample s;
  int lineno = 1;
  while (std::getline(csv, line)) {
    ++lineno;
    if (line.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str())
      throw input_error("sample file '" + csv_path + "': bad value at line " +
                        std::to_string(lineno));
    s.k.push_back(v);
  }
  if (s.k.empty()) throw input_error("sample file '" + csv_path + "' contains no outcomes");

  std::ifstream js(csv_path + ".json");
  if (!js) throw input_error("missing sample sidecar '" + csv_path + ".json'");
  nlohmann::json meta;
  try {
    js >> meta;
  } catch (const std::exception& e) {
    throw input_error("sample sidecar '" + csv_path + ".json': " + std::string(e.what()));
  }
  try {
    s.setting.model = meta.at("model").get<std::string>();
    s.setting.theta = meta.at("theta").get<double>();
    s.setting.eta = meta.at("eta").get<double>();
    s.setting.filter_freq = meta.at("filter_freq").get<double>();
    s.setting.detection_window = meta.at("detection_window").get<double>();
    s.setting.covariance_mode = meta.at("covariance_mode").get<std::string>();
    s.setting.dq1_true = meta.at("dq1_true").get<double>();
    s.setting.dq2_true = meta.at("dq2_true").get<double>();
    s.setting.params_digest = meta.at("params_digest").get<std::string>();
    s.seed = meta.at("seed").get<uint64_t>();
    s.stream = meta.at("stream").get<uint64_t>();
  } catch (const std::exception& e) {
    throw input_error("sample sidecar '" + csv_path + ".json' missing field: " +
                      std::string(e.what()));
  }
  return s;
}

}  // namespace optomem
