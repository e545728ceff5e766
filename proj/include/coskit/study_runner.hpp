#ifndef COSKIT_STUDY_RUNNER_HPP
#define COSKIT_STUDY_RUNNER_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "coskit/dgp.hpp"
#include "coskit/estimators.hpp"

namespace coskit {

// One Monte Carlo cell: a DGP, a size, an adjustment set, and the
// repetition/bootstrap budget.
struct Scenario {
  TargetTrial trial = TargetTrial::Trial1;
  int m = 50;
  int n = 4000;
  AdjustmentSet adjustment = AdjustmentSet::W;
  int repetitions = 1000;
  int bootstrap_b = 300;
  std::uint64_t master_seed = 0;
};

struct RepRecord {
  int rep = 0;
  double estimate = 0.0;
  double se = 0.0;
  bool covered = false;  // 95% Wald CI contains the true effect 0.16
  bool failed = false;
};

struct ScenarioResult {
  Scenario scenario;
  double mean = 0.0;    // of estimates over successful reps
  double sd = 0.0;      // sample SD; 0 by convention when <2 successes
  double avg_se = 0.0;  // mean bootstrap SE
  double cp = 0.0;      // coverage fraction among successful reps
  int failures = 0;
  std::vector<RepRecord> reps;  // by repetition index, failed ones included
};

inline constexpr double kTrueEffect = 0.16;

// Per-repetition seed: the master seed mixed with trial, m, n and the
// repetition index -- but not the adjustment set, so the three adjustment
// scenarios of one cell regenerate identical datasets and bootstrap draws
// and differ only in the model.
std::uint64_t repetition_seed(std::uint64_t master_seed, TargetTrial trial,
                              int m, int n, int rep);

// Runs R repetitions of simulate -> g-formula -> block bootstrap and
// summarizes Mean/SD/avg SE/CP against 0.16.  A repetition that raises is
// recorded as failed and excluded from the summaries.  Repetitions run
// OpenMP-parallel on independent substreams and are collected by index, so
// the result is thread-count independent.
ScenarioResult run_scenario(const Scenario& scenario);

// Serial reference for run_scenario; must produce identical output.
ScenarioResult run_scenario_serial(const Scenario& scenario);

// The full 3 trials x 3 sizes x 3 adjustment sets grid, in report order:
// trial, then size (50/4000, 100/4000, 50/8000), then adjustment.
std::vector<Scenario> table1_grid(std::uint64_t master_seed, int repetitions,
                                  int bootstrap_b);

std::vector<ScenarioResult> run_table1(std::uint64_t master_seed,
                                       int repetitions, int bootstrap_b);

// results.csv: `trial,m,n,adjust,mean,sd,avg_se,cp,failures`, one row per
// scenario.  `header_comments` lines are emitted first, each prefixed `# `.
void write_results_csv(const std::vector<ScenarioResult>& results,
                       std::ostream& out,
                       const std::vector<std::string>& header_comments = {});

}  // namespace coskit

#endif  // COSKIT_STUDY_RUNNER_HPP
