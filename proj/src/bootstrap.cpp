#include "coskit/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "coskit/errors.hpp"
#include "coskit/quantile.hpp"
#include "coskit/rng.hpp"

namespace coskit {
namespace {

constexpr std::uint64_t kSaltDraw = 11;

// Uniform index by modulo; the bias is at most m/2^64 and the draw sequence
// is fully pinned by the mt19937_64 stream (no distribution involved).
int bounded_index(std::mt19937_64& rng, int m) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(m));
}

bool one_armed_draw(const ClusteredDataset& dataset,
                    const std::vector<int>& indices) {
  int treated = 0;
  for (int j : indices) treated += dataset.treatment()[j];
  return treated == 0 || treated == static_cast<int>(indices.size());
}

struct ReplicateOutcome {
  double estimate = 0.0;
  bool rank_deficient = false;
};

ReplicateOutcome evaluate_replicate(const ClusteredDataset& dataset,
                                    const std::vector<int>& indices,
                                    const AggregateSpec& agg_spec,
                                    const ModelSpec& model_spec) {
  const ClusteredDataset replicate = materialize_resample(dataset, indices);
  const AggregateTable aggregates = compute_aggregates(replicate, agg_spec);
  const GFormulaResult fit = g_formula(replicate, &aggregates, model_spec);
  return {fit.estimate, fit.rank_deficient()};
}

// Draws resamples until B of them are two-armed.  Replicate randomness is
// per-attempt (seed mixed with the attempt counter), so the plan does not
// depend on how replicates are later evaluated.
struct BootstrapPlan {
  std::vector<std::vector<int>> draws;
  int discarded = 0;
};

BootstrapPlan plan_bootstrap(const ClusteredDataset& dataset, int B,
                             std::uint64_t seed, long max_attempts) {
  if (B < 2)
    throw Error(ErrorCode::UsageError,
                "bootstrap needs B >= 2, got " + std::to_string(B));
  if (max_attempts <= 0) max_attempts = 10L * B;

  BootstrapPlan plan;
  plan.draws.reserve(B);
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<int> indices =
        resample_indices(dataset.n_clusters(), mix_seed(seed, attempt));
    if (one_armed_draw(dataset, indices)) {
      ++plan.discarded;
      continue;
    }
    plan.draws.push_back(std::move(indices));
    if (static_cast<int>(plan.draws.size()) == B) return plan;
  }
  throw Error(ErrorCode::TooManyDegenerateReplicates,
              std::to_string(plan.discarded) + " of " +
                  std::to_string(max_attempts) +
                  " bootstrap draws were one-armed; the design cannot "
                  "support a cluster bootstrap");
}

BootstrapResult summarize(const ClusteredDataset& dataset,
                          const AggregateSpec& agg_spec,
                          const ModelSpec& model_spec, int B,
                          const BootstrapPlan& plan,
                          std::vector<ReplicateOutcome> outcomes) {
  BootstrapResult out;
  out.requested = B;
  out.discarded = plan.discarded;

  const AggregateTable aggregates = compute_aggregates(dataset, agg_spec);
  out.full = g_formula(dataset, &aggregates, model_spec);
  out.estimate = out.full.estimate;

  out.replicates.reserve(outcomes.size());
  for (const auto& rep : outcomes) {
    out.replicates.push_back(rep.estimate);
    if (rep.rank_deficient) ++out.rank_flagged;
  }

  double mean = 0.0;
  for (double t : out.replicates) mean += t;
  mean /= static_cast<double>(out.replicates.size());
  double ss = 0.0;
  for (double t : out.replicates) ss += (t - mean) * (t - mean);
  out.se = std::sqrt(ss / static_cast<double>(out.replicates.size() - 1));

  out.wald_ci_95 = {out.estimate - 1.96 * out.se,
                    out.estimate + 1.96 * out.se};
  std::vector<double> sorted = out.replicates;
  std::sort(sorted.begin(), sorted.end());
  out.percentile_ci_95 = {quantile_sorted(sorted, 0.025),
                          quantile_sorted(sorted, 0.975)};
  return out;
}

}  // namespace

std::vector<int> resample_indices(int n_clusters, std::uint64_t seed) {
  auto rng = engine_for(seed, kSaltDraw);
  std::vector<int> indices(n_clusters);
  for (int& idx : indices) idx = bounded_index(rng, n_clusters);
  return indices;
}

ClusteredDataset materialize_resample(const ClusteredDataset& dataset,
                                      const std::vector<int>& indices) {
  const int m = static_cast<int>(indices.size());
  int n = 0;
  for (int j : indices)
    n += static_cast<int>(dataset.cluster_members()[j].size());

  std::vector<std::string> unit_ids;
  unit_ids.reserve(n);
  std::vector<int> unit_cluster;
  unit_cluster.reserve(n);
  Eigen::VectorXd y(n);
  Eigen::MatrixXd x(n, dataset.unit_covariates().cols());
  std::vector<std::string> cluster_ids(m);
  std::vector<int> treatment(m);
  Eigen::MatrixXd w(m, dataset.cluster_covariates().cols());

  int row = 0;
  for (int k = 0; k < m; ++k) {
    const int j = indices[k];
    const std::string prefix = "b" + std::to_string(k + 1) + ".";
    cluster_ids[k] = prefix + dataset.cluster_ids()[j];
    treatment[k] = dataset.treatment()[j];
    w.row(k) = dataset.cluster_covariates().row(j);
    for (int i : dataset.cluster_members()[j]) {
      unit_ids.push_back(prefix + dataset.unit_ids()[i]);
      unit_cluster.push_back(k);
      y[row] = dataset.outcomes()[i];
      x.row(row) = dataset.unit_covariates().row(i);
      ++row;
    }
  }

  return ClusteredDataset::from_columns(
      std::move(unit_ids), std::move(unit_cluster), std::move(y), std::move(x),
      dataset.unit_schema(), std::move(cluster_ids), std::move(treatment),
      std::move(w), dataset.cluster_schema());
}

ClusteredDataset resample_clusters(const ClusteredDataset& dataset,
                                   std::uint64_t seed) {
  return materialize_resample(dataset,
                              resample_indices(dataset.n_clusters(), seed));
}

BootstrapResult block_bootstrap(const ClusteredDataset& dataset,
                                const AggregateSpec& agg_spec,
                                const ModelSpec& model_spec, int B,
                                std::uint64_t seed, long max_attempts) {
  const BootstrapPlan plan = plan_bootstrap(dataset, B, seed, max_attempts);
  std::vector<ReplicateOutcome> outcomes(plan.draws.size());
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < static_cast<int>(plan.draws.size()); ++r)
    outcomes[r] =
        evaluate_replicate(dataset, plan.draws[r], agg_spec, model_spec);
  return summarize(dataset, agg_spec, model_spec, B, plan,
                   std::move(outcomes));
}

BootstrapResult block_bootstrap_serial(const ClusteredDataset& dataset,
                                       const AggregateSpec& agg_spec,
                                       const ModelSpec& model_spec, int B,
                                       std::uint64_t seed, long max_attempts) {
  const BootstrapPlan plan = plan_bootstrap(dataset, B, seed, max_attempts);
  std::vector<ReplicateOutcome> outcomes(plan.draws.size());
  for (int r = 0; r < static_cast<int>(plan.draws.size()); ++r)
    outcomes[r] =
        evaluate_replicate(dataset, plan.draws[r], agg_spec, model_spec);
  return summarize(dataset, agg_spec, model_spec, B, plan,
                   std::move(outcomes));
}

}  // namespace coskit
