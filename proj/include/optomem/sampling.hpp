#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optomem/params.hpp"

namespace optomem {

/// The Gaussian law of a single BHD outcome: zero mean, variance 1/r with
/// r = 4 eta / (1 - eta + 2 eta R^T sigma R).
struct HomodyneLaw {
  double variance = 0.0;  // 1/r
  double precision() const { return 1.0 / variance; }
  double pdf(double k) const;
};

/// Builds the law from the measured quadrature variance R^T sigma_out R.
HomodyneLaw homodyne_pdf(double quadrature_variance, double eta);

/// Measurement settings identifying a sample (what must match at estimation).
struct SampleSetting {
  std::string model;       // "TR" or "CC"
  double theta = 0.0;
  double eta = 1.0;
  double filter_freq = 0.0;
  double detection_window = 0.0;
  std::string covariance_mode = "verbatim";
  double dq1_true = 0.0, dq2_true = 0.0;
  std::string params_digest;  // detects mixing of incompatible configurations
};

struct HomodyneSample {
  std::vector<double> k;
  SampleSetting setting;
  uint64_t seed = 0;
  uint64_t stream = 0;
};

/// N i.i.d. outcomes of the law; deterministic in (seed, stream).
HomodyneSample sample_homodyne(const HomodyneLaw& law, std::size_t n, uint64_t seed,
                               uint64_t stream = 0);

/// Sufficient statistic T(k) = sum k_i^2 (its two components coincide).
double sufficient_statistic(const HomodyneSample& sample);
double sufficient_statistic(const std::vector<double>& k);

/// Digest of the physical parameters, used to refuse mixing samples generated
/// under different configurations.
std::string params_digest(const SystemParams& p);

/// Sample file I/O: CSV with a single "k" column plus a JSON sidecar
/// (metadata + seed) at path + ".json".
void write_sample_files(const std::string& csv_path, const HomodyneSample& sample);
HomodyneSample read_sample_files(const std::string& csv_path);

}  // namespace optomem
