// Benchmark: OpenMP-parallel sweep kernel against the serial reference.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "optomem/figures.hpp"
#include "optomem/profiles_builtin.hpp"
#include "optomem/sweep.hpp"

using namespace optomem;

namespace {

double time_sweep(const SweepSpec& spec, ExecPolicy policy, ResultTable* out) {
  const auto t0 = std::chrono::steady_clock::now();
  *out = run_sweep(spec, policy);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void bench(const char* label, const SweepSpec& spec) {
  ResultTable serial, parallel;
  const double ts = time_sweep(spec, ExecPolicy::Serial, &serial);
  const double tp = time_sweep(spec, ExecPolicy::Parallel, &parallel);
  const bool identical = serial.to_csv() == parallel.to_csv();
  std::printf("%-28s points=%4d  serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n",
              label, spec.points, ts, tp, ts / tp,
              identical ? "rows identical" : "ROWS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel path degrades to serial\n");
#endif

  ExperimentConfig tr = builtin_tr_profile();
  ExperimentConfig cc = builtin_cc_profile();

  SweepSpec s1;
  s1.base = tr;
  s1.variable = SweepVariable::FilterFreq;
  s1.start = -2.0 * tr.params.mech_freq;
  s1.stop = 2.0 * tr.params.mech_freq;
  s1.points = 201;
  bench("TR filter-frequency sweep", s1);

  SweepSpec s2;
  s2.base = cc;
  s2.variable = SweepVariable::FilterFreq;
  s2.start = -2.0 * cc.params.mech_freq;
  s2.stop = 2.0 * cc.params.mech_freq;
  s2.points = 201;
  bench("CC filter-frequency sweep", s2);

  SweepSpec s3;
  s3.base = tr;
  s3.variable = SweepVariable::Dq1;
  s3.start = 0.0;
  s3.stop = 2e-6;
  s3.points = 61;
  bench("TR disorder sweep", s3);
  return 0;
}
