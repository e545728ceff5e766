#include "coskit/study_runner.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "coskit/bootstrap.hpp"
#include "coskit/errors.hpp"
#include "coskit/format.hpp"
#include "coskit/rng.hpp"

namespace coskit {
namespace {

constexpr std::uint64_t kSaltBoot = 21;

std::uint64_t trial_salt(TargetTrial trial) {
  switch (trial) {
    case TargetTrial::Trial1:
      return 1;
    case TargetTrial::Trial2a:
      return 2;
    case TargetTrial::Trial2b:
      return 3;
  }
  return 0;
}

RepRecord run_one_rep(const Scenario& scenario, int rep) {
  RepRecord rec;
  rec.rep = rep;
  try {
    const std::uint64_t rep_seed = repetition_seed(
        scenario.master_seed, scenario.trial, scenario.m, scenario.n, rep);
    const SimulatedDataset sim =
        simulate({scenario.trial, scenario.m, scenario.n, rep_seed});
    const AggregateSpec agg_spec;
    const ModelSpec model{scenario.adjustment, false};
    const BootstrapResult boot =
        block_bootstrap(sim.data, agg_spec, model, scenario.bootstrap_b,
                        mix_seed(rep_seed, kSaltBoot));
    rec.estimate = boot.estimate;
    rec.se = boot.se;
    rec.covered = boot.wald_ci_95.first <= kTrueEffect &&
                  kTrueEffect <= boot.wald_ci_95.second;
  } catch (const Error&) {
    rec.failed = true;  // excluded from summaries, surfaced via `failures`
  }
  return rec;
}

ScenarioResult summarize(const Scenario& scenario,
                         std::vector<RepRecord> reps) {
  ScenarioResult out;
  out.scenario = scenario;
  out.reps = std::move(reps);

  int ok = 0, covered = 0;
  double sum = 0.0, sum_se = 0.0;
  for (const auto& rec : out.reps) {
    if (rec.failed) {
      ++out.failures;
      continue;
    }
    ++ok;
    sum += rec.estimate;
    sum_se += rec.se;
    covered += rec.covered ? 1 : 0;
  }

  if (ok == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.mean = out.sd = out.avg_se = out.cp = nan;
    return out;
  }
  out.mean = sum / ok;
  out.avg_se = sum_se / ok;
  out.cp = static_cast<double>(covered) / ok;
  if (ok > 1) {
    double ss = 0.0;
    for (const auto& rec : out.reps)
      if (!rec.failed) ss += (rec.estimate - out.mean) * (rec.estimate - out.mean);
    out.sd = std::sqrt(ss / (ok - 1));
  }  // else sd stays 0 by convention (single successful repetition)
  return out;
}

void check_scenario(const Scenario& scenario) {
  if (scenario.repetitions < 1)
    throw Error(ErrorCode::UsageError, "scenario needs at least 1 repetition");
  if (scenario.bootstrap_b < 2)
    throw Error(ErrorCode::UsageError, "scenario needs bootstrap B >= 2");
}

}  // namespace

std::uint64_t repetition_seed(std::uint64_t master_seed, TargetTrial trial,
                              int m, int n, int rep) {
  std::uint64_t s = mix_seed(master_seed, trial_salt(trial));
  s = mix_seed(s, static_cast<std::uint64_t>(m));
  s = mix_seed(s, static_cast<std::uint64_t>(n));
  return mix_seed(s, static_cast<std::uint64_t>(rep));
}

ScenarioResult run_scenario(const Scenario& scenario) {
  check_scenario(scenario);
  std::vector<RepRecord> reps(scenario.repetitions);
#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < scenario.repetitions; ++rep)
    reps[rep] = run_one_rep(scenario, rep);
  return summarize(scenario, std::move(reps));
}

ScenarioResult run_scenario_serial(const Scenario& scenario) {
  check_scenario(scenario);
  std::vector<RepRecord> reps(scenario.repetitions);
  for (int rep = 0; rep < scenario.repetitions; ++rep)
    reps[rep] = run_one_rep(scenario, rep);
  return summarize(scenario, std::move(reps));
}

std::vector<Scenario> table1_grid(std::uint64_t master_seed, int repetitions,
                                  int bootstrap_b) {
  static constexpr TargetTrial trials[] = {
      TargetTrial::Trial1, TargetTrial::Trial2a, TargetTrial::Trial2b};
  static constexpr std::pair<int, int> sizes[] = {
      {50, 4000}, {100, 4000}, {50, 8000}};
  static constexpr AdjustmentSet adjustments[] = {
      AdjustmentSet::W, AdjustmentSet::WH, AdjustmentSet::WHX};

  std::vector<Scenario> grid;
  grid.reserve(27);
  for (TargetTrial trial : trials)
    for (auto [m, n] : sizes)
      for (AdjustmentSet adjustment : adjustments)
        grid.push_back({trial, m, n, adjustment, repetitions, bootstrap_b,
                        master_seed});
  return grid;
}

std::vector<ScenarioResult> run_table1(std::uint64_t master_seed,
                                       int repetitions, int bootstrap_b) {
  std::vector<ScenarioResult> results;
  results.reserve(27);
  for (const Scenario& scenario :
       table1_grid(master_seed, repetitions, bootstrap_b))
    results.push_back(run_scenario(scenario));
  return results;
}

void write_results_csv(const std::vector<ScenarioResult>& results,
                       std::ostream& out,
                       const std::vector<std::string>& header_comments) {
  for (const auto& line : header_comments) out << "# " << line << "\n";
  out << "trial,m,n,adjust,mean,sd,avg_se,cp,failures\n";
  for (const auto& r : results) {
    out << trial_name(r.scenario.trial) << ',' << r.scenario.m << ','
        << r.scenario.n << ',' << adjustment_name(r.scenario.adjustment) << ','
        << format_double(r.mean) << ',' << format_double(r.sd) << ','
        << format_double(r.avg_se) << ',' << format_double(r.cp) << ','
        << r.failures << "\n";
  }
}

}  // namespace coskit
