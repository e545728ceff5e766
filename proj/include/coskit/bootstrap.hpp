#ifndef COSKIT_BOOTSTRAP_HPP
#define COSKIT_BOOTSTRAP_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "coskit/aggregates.hpp"
#include "coskit/data_model.hpp"
#include "coskit/estimators.hpp"

namespace coskit {

struct BootstrapResult {
  std::vector<double> replicates;  // successful replicate estimates, draw order
  int requested = 0;               // B
  int discarded = 0;               // one-armed draws skipped and redrawn
  int rank_flagged = 0;            // replicates with a rank-deficient arm fit
  GFormulaResult full;             // full-data fit the intervals center on
  double estimate = 0.0;           // == full.estimate
  double se = 0.0;                 // sample SD of replicates
  std::pair<double, double> wald_ci_95;
  std::pair<double, double> percentile_ci_95;
};

// Cluster indices of one block-bootstrap draw: m draws with replacement,
// uniform over clusters, deterministic in `seed`.
std::vector<int> resample_indices(int n_clusters, std::uint64_t seed);

// Materializes the draw `indices` as a dataset.  Each drawn cluster brings
// all its units; the k-th draw is renamed with a `b<k>.` prefix (cluster and
// unit ids alike) so repeated draws of one cluster stay distinct clusters.
ClusteredDataset materialize_resample(const ClusteredDataset& dataset,
                                      const std::vector<int>& indices);

ClusteredDataset resample_clusters(const ClusteredDataset& dataset,
                                   std::uint64_t seed);

// Block bootstrap of the g-formula estimator: B replicate estimates on
// cluster resamples, each with aggregates recomputed on the replicate.
// One-armed draws are discarded and redrawn; more than `max_attempts` total
// draws (default 10*B) raises TooManyDegenerateReplicates.  se is the
// sample SD of the replicates; the Wald interval is estimate +- 1.96*se,
// the percentile interval the interpolated 2.5th/97.5th replicate
// percentiles.  Replicates are planned serially from per-attempt seeds and
// evaluated OpenMP-parallel, so the result is thread-count independent.
BootstrapResult block_bootstrap(const ClusteredDataset& dataset,
                                const AggregateSpec& agg_spec,
                                const ModelSpec& model_spec, int B,
                                std::uint64_t seed, long max_attempts = 0);

// Serial reference for block_bootstrap; must produce identical output.
BootstrapResult block_bootstrap_serial(const ClusteredDataset& dataset,
                                       const AggregateSpec& agg_spec,
                                       const ModelSpec& model_spec, int B,
                                       std::uint64_t seed,
                                       long max_attempts = 0);

}  // namespace coskit

#endif  // COSKIT_BOOTSTRAP_HPP
