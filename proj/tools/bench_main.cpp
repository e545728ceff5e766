// Times the OpenMP kernels against their serial reference implementations
// and verifies both paths produce identical results.  Speedups track the
// core count; on a single-core box expect ~1.0x throughout.

#include <omp.h>

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "coskit/bootstrap.hpp"
#include "coskit/dgp.hpp"
#include "coskit/rng.hpp"
#include "coskit/study_runner.hpp"

namespace {

template <typename Fn>
double seconds(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void report(const std::string& kernel, double serial, double parallel,
            bool identical) {
  std::cout << std::left << std::setw(12) << kernel << std::right
            << std::fixed << std::setprecision(3) << std::setw(9) << serial
            << "s" << std::setw(9) << parallel << "s" << std::setprecision(2)
            << std::setw(8) << (serial / parallel) << "x   "
            << (identical ? "identical" : "MISMATCH") << "\n";
}

bool same_bootstrap(const coskit::BootstrapResult& a,
                    const coskit::BootstrapResult& b) {
  return a.replicates == b.replicates && a.se == b.se &&
         a.discarded == b.discarded && a.rank_flagged == b.rank_flagged &&
         a.wald_ci_95 == b.wald_ci_95 && a.percentile_ci_95 == b.percentile_ci_95;
}

bool same_scenario(const coskit::ScenarioResult& a,
                   const coskit::ScenarioResult& b) {
  if (a.mean != b.mean || a.sd != b.sd || a.avg_se != b.avg_se ||
      a.cp != b.cp || a.failures != b.failures ||
      a.reps.size() != b.reps.size())
    return false;
  for (std::size_t i = 0; i < a.reps.size(); ++i)
    if (a.reps[i].estimate != b.reps[i].estimate ||
        a.reps[i].se != b.reps[i].se || a.reps[i].covered != b.reps[i].covered)
      return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coskit kernel benchmark: serial reference vs OpenMP"};
  int threads = 0;
  std::uint64_t seed = 20240814;
  app.add_option("--threads", threads, "OpenMP threads (0 = default)");
  app.add_option("--seed", seed, "benchmark seed");
  CLI11_PARSE(app, argc, argv);

  if (threads > 0) omp_set_num_threads(threads);
  std::cout << "threads: " << omp_get_max_threads() << "\n\n";
  std::cout << std::left << std::setw(12) << "kernel" << std::right
            << std::setw(10) << "serial" << std::setw(10) << "parallel"
            << std::setw(9) << "speedup" << "   check\n";

  {  // unit-cluster pairing: n softmax draws over m clusters
    const coskit::SimulationConfig config{coskit::TargetTrial::Trial1, 100,
                                          400000, seed};
    const coskit::Baseline base = coskit::gen_baseline(config);
    std::vector<int> serial_j, parallel_j;
    auto rng_s = coskit::engine_for(seed, 1001);
    auto rng_p = coskit::engine_for(seed, 1001);
    const double t_serial = seconds([&] {
      serial_j = coskit::assign_units_serial(base.x1, base.x2, base.w, nullptr,
                                             config.trial, rng_s);
    });
    const double t_parallel = seconds([&] {
      parallel_j = coskit::assign_units(base.x1, base.x2, base.w, nullptr,
                                        config.trial, rng_p);
    });
    report("pairing", t_serial, t_parallel, serial_j == parallel_j);
  }

  {  // block bootstrap: B independent resample-refit replicates
    const coskit::SimulatedDataset sim =
        coskit::simulate({coskit::TargetTrial::Trial2a, 50, 4000, seed});
    const coskit::AggregateSpec agg;
    const coskit::ModelSpec model{coskit::AdjustmentSet::WHX, false};
    coskit::BootstrapResult serial_b, parallel_b;
    const double t_serial = seconds([&] {
      serial_b =
          coskit::block_bootstrap_serial(sim.data, agg, model, 300, seed);
    });
    const double t_parallel = seconds([&] {
      parallel_b = coskit::block_bootstrap(sim.data, agg, model, 300, seed);
    });
    report("bootstrap", t_serial, t_parallel,
           same_bootstrap(serial_b, parallel_b));
  }

  {  // Monte Carlo scenario: independent simulate+estimate repetitions
    const coskit::Scenario scenario{coskit::TargetTrial::Trial2a, 50, 2000,
                                    coskit::AdjustmentSet::WH, 40, 60, seed};
    coskit::ScenarioResult serial_r, parallel_r;
    const double t_serial =
        seconds([&] { serial_r = coskit::run_scenario_serial(scenario); });
    const double t_parallel =
        seconds([&] { parallel_r = coskit::run_scenario(scenario); });
    report("scenario", t_serial, t_parallel, same_scenario(serial_r, parallel_r));
  }

  return 0;
}
