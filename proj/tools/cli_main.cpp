// coskit command line: simulate clustered populations, estimate effects via
// the g-formula with a cluster bootstrap, report covariate balance, and
// rerun the full simulation study grid.

#include <omp.h>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coskit/bootstrap.hpp"
#include "coskit/csv_io.hpp"
#include "coskit/dgp.hpp"
#include "coskit/diagnostics.hpp"
#include "coskit/errors.hpp"
#include "coskit/format.hpp"
#include "coskit/rng.hpp"
#include "coskit/study_runner.hpp"
#include "json.hpp"

namespace {

using coskit::Error;
using coskit::ErrorCode;
using json = nlohmann::json;

// Salt for the bootstrap seed the estimate subcommand derives from --seed.
constexpr std::uint64_t kSaltEstimateBoot = 31;

enum class OutputFormat { Csv, PrettyTable, JsonLines };

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "pretty-table") return OutputFormat::PrettyTable;
  if (text == "json-lines") return OutputFormat::JsonLines;
  throw Error(ErrorCode::UsageError,
              "unknown format '" + text +
                  "' (expected csv, pretty-table or json-lines)");
}

coskit::TargetTrial parse_trial(const std::string& text) {
  if (text == "1") return coskit::TargetTrial::Trial1;
  if (text == "2a") return coskit::TargetTrial::Trial2a;
  if (text == "2b") return coskit::TargetTrial::Trial2b;
  throw Error(ErrorCode::UsageError,
              "unknown trial '" + text + "' (expected 1, 2a or 2b)");
}

coskit::AdjustmentSet parse_adjust(const std::string& text) {
  const auto set = coskit::parse_adjustment(text);
  if (!set)
    throw Error(ErrorCode::UsageError,
                "unknown adjustment set '" + text + "' (expected w, wh or whx)");
  return *set;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> load_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoFailure,
                "cannot open config file '" + path.string() + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::UsageError,
                  path.string() + ":" + std::to_string(lineno) +
                      ": expected `key = value`");
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw Error(ErrorCode::UsageError,
                  path.string() + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw Error(ErrorCode::UsageError,
                  path.string() + ":" + std::to_string(lineno) +
                      ": duplicate key '" + key + "'");
  }
  return kv;
}

std::uint64_t config_u64(const std::string& key, const std::string& value) {
  std::uint64_t out{};
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw Error(ErrorCode::UsageError,
                "config key '" + key + "': '" + value + "' is not an integer");
  return out;
}

int config_int(const std::string& key, const std::string& value) {
  int out{};
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw Error(ErrorCode::UsageError,
                "config key '" + key + "': '" + value + "' is not an integer");
  return out;
}

bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw Error(ErrorCode::UsageError,
              "config key '" + key + "': '" + value + "' is not a boolean");
}

// Fills options from a config file, underneath the command line: a key
// applies only when its flag was not given.  Unknown keys are typos and
// rejected.
class ConfigSource {
 public:
  ConfigSource(const CLI::App& cmd, const std::string& path) : cmd_(cmd) {
    if (!path.empty()) kv_ = load_config_file(path);
  }

  template <typename Fn>
  void key(const std::string& name, const std::string& flag, Fn&& apply) {
    const auto it = kv_.find(name);
    known_.insert(name);
    if (it == kv_.end()) return;
    if (cmd_.count(flag) == 0) apply(it->second);
  }

  void finish() const {
    for (const auto& [k, v] : kv_)
      if (!known_.contains(k))
        throw Error(ErrorCode::UsageError, "unknown config key '" + k + "'");
  }

 private:
  const CLI::App& cmd_;
  std::map<std::string, std::string> kv_;
  std::set<std::string> known_;
};

int resolve_threads(int requested) {
  if (requested > 0) omp_set_num_threads(requested);
  return omp_get_max_threads();
}

std::uint64_t resolve_seed(bool given, std::uint64_t value) {
  if (given) return value;
  std::random_device rd;
  const std::uint64_t drawn =
      (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cout << "seed = " << drawn << " (drawn; pass --seed " << drawn
            << " to reproduce this run)\n";
  return drawn;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::IoFailure,
                "cannot open '" + path.string() + "' for writing");
  return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string trial;
  int m = 50;
  int n = 4000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string units = "units.csv";
  std::string clusters = "clusters.csv";
  std::string truth = "truth.csv";
  std::string config;
};

int run_simulate(const CLI::App& cmd, SimulateArgs& args) {
  ConfigSource cfg(cmd, args.config);
  cfg.key("trial", "--trial", [&](const std::string& v) { args.trial = v; });
  cfg.key("m", "--m", [&](const std::string& v) { args.m = config_int("m", v); });
  cfg.key("n", "--n", [&](const std::string& v) { args.n = config_int("n", v); });
  bool seed_given = cmd.count("--seed") > 0;
  cfg.key("seed", "--seed", [&](const std::string& v) {
    args.seed = config_u64("seed", v);
    seed_given = true;
  });
  cfg.key("threads", "--threads",
          [&](const std::string& v) { args.threads = config_int("threads", v); });
  cfg.key("units", "--units", [&](const std::string& v) { args.units = v; });
  cfg.key("clusters", "--clusters",
          [&](const std::string& v) { args.clusters = v; });
  cfg.key("truth", "--truth", [&](const std::string& v) { args.truth = v; });
  cfg.finish();
  if (args.trial.empty())
    throw Error(ErrorCode::UsageError, "--trial is required (1, 2a or 2b)");

  const coskit::TargetTrial trial = parse_trial(args.trial);
  const int threads = resolve_threads(args.threads);
  const std::uint64_t seed = resolve_seed(seed_given, args.seed);

  const coskit::SimulatedDataset sim =
      coskit::simulate({trial, args.m, args.n, seed});

  const std::vector<std::string> echo = {
      "coskit simulate",
      "trial = " + args.trial,
      "m = " + std::to_string(args.m),
      "n = " + std::to_string(args.n),
      "seed = " + std::to_string(seed),
      "threads = " + std::to_string(threads),
      "units = " + args.units,
      "clusters = " + args.clusters,
      "truth = " + args.truth,
  };
  coskit::save_csv_pair(sim.data, args.units, args.clusters, echo);

  std::vector<coskit::TruthRecord> truth(sim.data.n_units());
  for (int i = 0; i < sim.data.n_units(); ++i)
    truth[i] = {sim.data.unit_ids()[i], sim.y1[i], sim.y0[i], sim.ite[i]};
  coskit::save_truth(truth, args.truth, echo);

  std::cout << "simulated trial " << args.trial << ": " << args.m
            << " clusters (" << sim.data.treated_cluster_count()
            << " treated), " << args.n << " units\n"
            << "  mean unit-level effect = "
            << coskit::format_double(sim.ite.mean()) << "\n"
            << "  wrote " << args.units << ", " << args.clusters << ", "
            << args.truth << "\n";
  return 0;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string units;
  std::string clusters;
  std::string adjust;
  bool quadratic = false;
  std::string aggregates;
  int bootstrap = 1000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  std::string format = "csv";
  std::string config;
};

void write_estimate_csv(std::ostream& os, const coskit::BootstrapResult& boot,
                        const std::vector<std::string>& echo) {
  using coskit::format_double;
  for (const auto& line : echo) os << "# " << line << "\n";
  os << "estimate,se,ci_wald_lo,ci_wald_hi,ci_percentile_lo,ci_percentile_hi,"
        "replicates,discarded,rank_flagged\n";
  os << format_double(boot.estimate) << ',' << format_double(boot.se) << ','
     << format_double(boot.wald_ci_95.first) << ','
     << format_double(boot.wald_ci_95.second) << ','
     << format_double(boot.percentile_ci_95.first) << ','
     << format_double(boot.percentile_ci_95.second) << ','
     << boot.replicates.size() << ',' << boot.discarded << ','
     << boot.rank_flagged << "\n";
}

void write_estimate_jsonl(std::ostream& os,
                          const coskit::BootstrapResult& boot) {
  json j;
  j["estimate"] = boot.estimate;
  j["se"] = boot.se;
  j["ci_wald"] = {boot.wald_ci_95.first, boot.wald_ci_95.second};
  j["ci_percentile"] = {boot.percentile_ci_95.first,
                        boot.percentile_ci_95.second};
  j["replicates"] = boot.replicates.size();
  j["discarded"] = boot.discarded;
  j["rank_flagged"] = boot.rank_flagged;
  os << j.dump() << "\n";
}

void print_estimate_summary(std::ostream& os, const coskit::ClusteredDataset& data,
                            const coskit::BootstrapResult& boot,
                            const std::string& adjust, bool quadratic) {
  using coskit::format_double;
  os << "g-formula estimate (adjust = " << adjust << ", quadratic = "
     << (quadratic ? "on" : "off") << ")\n"
     << "  clusters        " << data.n_clusters() << " ("
     << data.treated_cluster_count() << " treated / "
     << data.control_cluster_count() << " control), units " << data.n_units()
     << "\n"
     << "  estimate        " << format_double(boot.estimate) << "\n"
     << "  se              " << format_double(boot.se) << "\n"
     << "  ci_wald         [" << format_double(boot.wald_ci_95.first) << ", "
     << format_double(boot.wald_ci_95.second) << "]\n"
     << "  ci_percentile   [" << format_double(boot.percentile_ci_95.first)
     << ", " << format_double(boot.percentile_ci_95.second) << "]\n"
     << "  replicates      " << boot.replicates.size() << " (discarded "
     << boot.discarded << ", rank-flagged " << boot.rank_flagged << ")\n";
}

int run_estimate(const CLI::App& cmd, EstimateArgs& args) {
  ConfigSource cfg(cmd, args.config);
  cfg.key("units", "--units", [&](const std::string& v) { args.units = v; });
  cfg.key("clusters", "--clusters",
          [&](const std::string& v) { args.clusters = v; });
  cfg.key("adjust", "--adjust", [&](const std::string& v) { args.adjust = v; });
  cfg.key("quadratic", "--quadratic", [&](const std::string& v) {
    args.quadratic = config_bool("quadratic", v);
  });
  cfg.key("aggregates", "--aggregates",
          [&](const std::string& v) { args.aggregates = v; });
  cfg.key("bootstrap", "--bootstrap", [&](const std::string& v) {
    args.bootstrap = config_int("bootstrap", v);
  });
  bool seed_given = cmd.count("--seed") > 0;
  cfg.key("seed", "--seed", [&](const std::string& v) {
    args.seed = config_u64("seed", v);
    seed_given = true;
  });
  cfg.key("threads", "--threads",
          [&](const std::string& v) { args.threads = config_int("threads", v); });
  cfg.key("out", "--out", [&](const std::string& v) { args.out = v; });
  cfg.key("format", "--format", [&](const std::string& v) { args.format = v; });
  cfg.finish();
  if (args.units.empty() || args.clusters.empty())
    throw Error(ErrorCode::UsageError, "--units and --clusters are required");
  if (args.adjust.empty())
    throw Error(ErrorCode::UsageError, "--adjust is required (w, wh or whx)");

  const coskit::AdjustmentSet adjustment = parse_adjust(args.adjust);
  const OutputFormat format = parse_format(args.format);
  const int threads = resolve_threads(args.threads);
  const std::uint64_t seed = resolve_seed(seed_given, args.seed);
  const std::uint64_t boot_seed = coskit::mix_seed(seed, kSaltEstimateBoot);

  const coskit::ClusteredDataset data =
      coskit::load_csv_pair(args.units, args.clusters);
  const coskit::AggregateSpec agg_spec =
      args.aggregates.empty() ? coskit::AggregateSpec{}
                              : coskit::parse_aggregate_spec(args.aggregates);
  const coskit::ModelSpec model{adjustment, args.quadratic};

  const coskit::BootstrapResult boot = coskit::block_bootstrap(
      data, agg_spec, model, args.bootstrap, boot_seed);

  print_estimate_summary(std::cout, data, boot, args.adjust, args.quadratic);

  if (!args.out.empty()) {
    const std::vector<std::string> echo = {
        "coskit estimate",
        "units = " + args.units,
        "clusters = " + args.clusters,
        "adjust = " + args.adjust,
        "quadratic = " + std::string(args.quadratic ? "true" : "false"),
        "aggregates = " + agg_spec.describe(data.unit_schema()),
        "bootstrap = " + std::to_string(args.bootstrap),
        "seed = " + std::to_string(seed),
        "bootstrap_seed = " + std::to_string(boot_seed),
        "threads = " + std::to_string(threads),
    };
    auto os = open_output(args.out);
    switch (format) {
      case OutputFormat::Csv:
        write_estimate_csv(os, boot, echo);
        break;
      case OutputFormat::JsonLines:
        write_estimate_jsonl(os, boot);
        break;
      case OutputFormat::PrettyTable:
        for (const auto& line : echo) os << "# " << line << "\n";
        print_estimate_summary(os, data, boot, args.adjust, args.quadratic);
        break;
    }
    std::cout << "  wrote " << args.out << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- balance

struct BalanceArgs {
  std::string units;
  std::string clusters;
  std::string aggregates;
  std::string out;
  std::string format = "csv";
  std::string config;
};

void write_balance_csv(std::ostream& os,
                       const std::vector<coskit::BalanceRow>& rows,
                       const std::vector<std::string>& echo) {
  using coskit::format_double;
  for (const auto& line : echo) os << "# " << line << "\n";
  os << "covariate,level,mean_t,mean_c,std_diff\n";
  for (const auto& row : rows) {
    os << row.covariate << ',' << coskit::balance_level_name(row.level) << ','
       << format_double(row.mean_t) << ',' << format_double(row.mean_c) << ','
       << (row.undefined ? "NA" : format_double(row.std_diff)) << "\n";
  }
}

void write_balance_jsonl(std::ostream& os,
                         const std::vector<coskit::BalanceRow>& rows) {
  for (const auto& row : rows) {
    json j;
    j["covariate"] = row.covariate;
    j["level"] = coskit::balance_level_name(row.level);
    j["mean_t"] = row.mean_t;
    j["mean_c"] = row.mean_c;
    if (row.undefined)
      j["std_diff"] = nullptr;
    else
      j["std_diff"] = row.std_diff;
    os << j.dump() << "\n";
  }
}

void write_balance_pretty(std::ostream& os,
                          const std::vector<coskit::BalanceRow>& rows) {
  std::size_t width = 9;
  for (const auto& row : rows) width = std::max(width, row.covariate.size());
  os << std::left << std::setw(static_cast<int>(width + 2)) << "covariate"
     << std::setw(9) << "level" << std::right << std::setw(9) << "mean_t"
     << std::setw(9) << "mean_c" << std::setw(10) << "std_diff" << "\n";
  for (const auto& row : rows) {
    os << std::left << std::setw(static_cast<int>(width + 2)) << row.covariate
       << std::setw(9) << coskit::balance_level_name(row.level) << std::right
       << std::fixed << std::setprecision(3) << std::setw(9) << row.mean_t
       << std::setw(9) << row.mean_c;
    if (row.undefined)
      os << std::setw(10) << "NA";
    else
      os << std::setw(10) << row.std_diff;
    os << "\n";
    os.unsetf(std::ios::fixed);
  }
}

int run_balance(const CLI::App& cmd, BalanceArgs& args) {
  ConfigSource cfg(cmd, args.config);
  cfg.key("units", "--units", [&](const std::string& v) { args.units = v; });
  cfg.key("clusters", "--clusters",
          [&](const std::string& v) { args.clusters = v; });
  cfg.key("aggregates", "--aggregates",
          [&](const std::string& v) { args.aggregates = v; });
  cfg.key("out", "--out", [&](const std::string& v) { args.out = v; });
  cfg.key("format", "--format", [&](const std::string& v) { args.format = v; });
  cfg.finish();
  if (args.units.empty() || args.clusters.empty())
    throw Error(ErrorCode::UsageError, "--units and --clusters are required");

  const OutputFormat format = parse_format(args.format);
  const coskit::ClusteredDataset data =
      coskit::load_csv_pair(args.units, args.clusters);
  const coskit::AggregateSpec agg_spec =
      args.aggregates.empty() ? coskit::AggregateSpec{}
                              : coskit::parse_aggregate_spec(args.aggregates);
  const coskit::AggregateTable table = coskit::compute_aggregates(data, agg_spec);
  const std::vector<coskit::BalanceRow> rows =
      coskit::balance_table(data, &table);

  const std::vector<std::string> echo = {
      "coskit balance",
      "units = " + args.units,
      "clusters = " + args.clusters,
      "aggregates = " + agg_spec.describe(data.unit_schema()),
  };

  const auto emit = [&](std::ostream& os) {
    switch (format) {
      case OutputFormat::Csv:
        write_balance_csv(os, rows, echo);
        break;
      case OutputFormat::JsonLines:
        write_balance_jsonl(os, rows);
        break;
      case OutputFormat::PrettyTable:
        write_balance_pretty(os, rows);
        break;
    }
  };
  if (args.out.empty()) {
    emit(std::cout);
  } else {
    auto os = open_output(args.out);
    emit(os);
    std::cout << "wrote " << args.out << " (" << rows.size() << " rows)\n";
  }
  return 0;
}

// --------------------------------------------------------- replicate-table1

struct ReplicateArgs {
  int reps = 1000;
  int boot = 300;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "results.csv";
  std::string config;
};

void print_results_pretty(std::ostream& os,
                          const std::vector<coskit::ScenarioResult>& results) {
  os << std::left << std::setw(7) << "trial" << std::right << std::setw(5)
     << "m" << std::setw(7) << "n" << "  " << std::left << std::setw(8)
     << "adjust" << std::right << std::setw(7) << "mean" << std::setw(7)
     << "sd" << std::setw(8) << "avg_se" << std::setw(7) << "cp"
     << std::setw(6) << "fail" << "\n";
  for (const auto& r : results) {
    os << std::left << std::setw(7) << coskit::trial_name(r.scenario.trial)
       << std::right << std::setw(5) << r.scenario.m << std::setw(7)
       << r.scenario.n << "  " << std::left << std::setw(8)
       << coskit::adjustment_name(r.scenario.adjustment) << std::right
       << std::fixed << std::setprecision(3) << std::setw(7) << r.mean
       << std::setw(7) << r.sd << std::setw(8) << r.avg_se << std::setw(7)
       << r.cp << std::setw(6) << r.failures << "\n";
    os.unsetf(std::ios::fixed);
  }
}

int run_replicate(const CLI::App& cmd, ReplicateArgs& args) {
  ConfigSource cfg(cmd, args.config);
  cfg.key("reps", "--reps",
          [&](const std::string& v) { args.reps = config_int("reps", v); });
  cfg.key("boot", "--boot",
          [&](const std::string& v) { args.boot = config_int("boot", v); });
  bool seed_given = cmd.count("--seed") > 0;
  cfg.key("seed", "--seed", [&](const std::string& v) {
    args.seed = config_u64("seed", v);
    seed_given = true;
  });
  cfg.key("threads", "--threads",
          [&](const std::string& v) { args.threads = config_int("threads", v); });
  cfg.key("out", "--out", [&](const std::string& v) { args.out = v; });
  cfg.finish();

  const int threads = resolve_threads(args.threads);
  const std::uint64_t seed = resolve_seed(seed_given, args.seed);

  const std::vector<coskit::Scenario> grid =
      coskit::table1_grid(seed, args.reps, args.boot);
  std::vector<coskit::ScenarioResult> results;
  results.reserve(grid.size());
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    results.push_back(coskit::run_scenario(grid[k]));
    const auto& r = results.back();
    const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    std::cerr << "[" << (k + 1) << "/" << grid.size() << "] trial "
              << coskit::trial_name(r.scenario.trial) << " m=" << r.scenario.m
              << " n=" << r.scenario.n << " "
              << coskit::adjustment_name(r.scenario.adjustment)
              << ": mean=" << coskit::format_double(r.mean)
              << " cp=" << coskit::format_double(r.cp) << " (" << elapsed
              << "s elapsed)\n";
  }

  const std::vector<std::string> echo = {
      "coskit replicate-table1",
      "reps = " + std::to_string(args.reps),
      "boot = " + std::to_string(args.boot),
      "seed = " + std::to_string(seed),
      "rep_seed = mix(seed, trial, m, n, rep); shared across adjustment sets",
      "threads = " + std::to_string(threads),
      "out = " + args.out,
  };
  auto os = open_output(args.out);
  coskit::write_results_csv(results, os, echo);

  print_results_pretty(std::cout, results);
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clustered observational study toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "generate a synthetic population under a target trial");
  sim->add_option("--trial", sim_args.trial, "target trial: 1, 2a or 2b");
  sim->add_option("--m", sim_args.m, "cluster count")->capture_default_str();
  sim->add_option("--n", sim_args.n, "unit count")->capture_default_str();
  sim->add_option("--seed", sim_args.seed, "master seed (drawn if omitted)");
  sim->add_option("--threads", sim_args.threads, "OpenMP threads (0 = default)");
  sim->add_option("--units", sim_args.units, "output unit CSV")->capture_default_str();
  sim->add_option("--clusters", sim_args.clusters, "output cluster CSV")->capture_default_str();
  sim->add_option("--truth", sim_args.truth, "output potential-outcome CSV")->capture_default_str();
  sim->add_option("--config", sim_args.config, "config file (key = value)");

  EstimateArgs est_args;
  CLI::App* est = app.add_subcommand(
      "estimate", "g-formula effect estimate with cluster bootstrap");
  est->add_option("--units", est_args.units, "unit CSV");
  est->add_option("--clusters", est_args.clusters, "cluster CSV");
  est->add_option("--adjust", est_args.adjust, "adjustment set: w, wh or whx");
  est->add_flag("--quadratic", est_args.quadratic,
                "add squared terms for continuous regressors");
  est->add_option("--aggregates", est_args.aggregates,
                  "aggregate spec, e.g. { x1 = [\"q25\",\"q50\",\"q75\"] }");
  est->add_option("--bootstrap", est_args.bootstrap, "bootstrap replicates")->capture_default_str();
  est->add_option("--seed", est_args.seed, "master seed (drawn if omitted)");
  est->add_option("--threads", est_args.threads, "OpenMP threads (0 = default)");
  est->add_option("--out", est_args.out, "output file (stdout summary always)");
  est->add_option("--format", est_args.format,
                  "output format: csv, pretty-table or json-lines")->capture_default_str();
  est->add_option("--config", est_args.config, "config file (key = value)");

  BalanceArgs bal_args;
  CLI::App* bal = app.add_subcommand(
      "balance", "covariate balance table (standardized differences)");
  bal->add_option("--units", bal_args.units, "unit CSV");
  bal->add_option("--clusters", bal_args.clusters, "cluster CSV");
  bal->add_option("--aggregates", bal_args.aggregates, "aggregate spec");
  bal->add_option("--out", bal_args.out, "output file (default stdout)");
  bal->add_option("--format", bal_args.format,
                  "output format: csv, pretty-table or json-lines")->capture_default_str();
  bal->add_option("--config", bal_args.config, "config file (key = value)");

  ReplicateArgs rep_args;
  CLI::App* rep = app.add_subcommand(
      "replicate-table1", "rerun the full simulation study grid");
  rep->add_option("--reps", rep_args.reps, "Monte Carlo repetitions")->capture_default_str();
  rep->add_option("--boot", rep_args.boot, "bootstrap replicates")->capture_default_str();
  rep->add_option("--seed", rep_args.seed, "master seed (drawn if omitted)");
  rep->add_option("--threads", rep_args.threads, "OpenMP threads (0 = default)");
  rep->add_option("--out", rep_args.out, "output CSV")->capture_default_str();
  rep->add_option("--config", rep_args.config, "config file (key = value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return run_simulate(*sim, sim_args);
    if (est->parsed()) return run_estimate(*est, est_args);
    if (bal->parsed()) return run_balance(*bal, bal_args);
    if (rep->parsed()) return run_replicate(*rep, rep_args);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(coskit::ErrorCategory::Internal);
  }
}
