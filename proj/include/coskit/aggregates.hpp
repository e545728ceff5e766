#ifndef COSKIT_AGGREGATES_HPP
#define COSKIT_AGGREGATES_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coskit/data_model.hpp"

namespace coskit {

// One aggregate column for one unit covariate: its within-cluster mean, or a
// within-cluster quantile at `level`.
struct AggregateItem {
  enum class Kind { Mean, Quantile };
  Kind kind = Kind::Mean;
  double level = 0.0;  // quantile level, in (0,1)

  static AggregateItem mean() { return {Kind::Mean, 0.0}; }
  static AggregateItem quantile(double level) { return {Kind::Quantile, level}; }

  bool operator==(const AggregateItem&) const = default;
};

// Which aggregates to compute per unit covariate.  Without an override, a
// continuous covariate gets quantiles at `default_quantile_levels` and a
// binary covariate gets its mean.  Quantiles use linear interpolation
// between order statistics (see quantile.hpp); levels must be strictly
// inside (0,1), sorted and distinct.
struct AggregateSpec {
  std::vector<double> default_quantile_levels{0.25, 0.50, 0.75};
  std::map<std::string, std::vector<AggregateItem>> overrides;

  std::vector<AggregateItem> rules_for(const CovariateDef& covariate) const;
  void validate() const;  // throws BadQuantileLevel

  // Canonical config-file rendering, e.g.
  //   { x1 = ["q25","q50","q75"], x2 = ["mean"] }
  std::string describe(const std::vector<CovariateDef>& unit_schema) const;
};

// Parses the config-file form of an aggregate spec:
//   { x1 = ["q25","q50","q75"], x2 = ["mean"] }
// Each entry becomes a per-covariate override; "qNN" is the NN-th
// percentile, "mean" the mean.  Throws UsageError on malformed input and
// BadQuantileLevel on out-of-range levels.
AggregateSpec parse_aggregate_spec(std::string_view text);

// Cluster-level aggregate values, one row per cluster in dataset cluster
// order.  Column names look like `x1_q25` or `x2_mean`.
class AggregateTable {
 public:
  AggregateTable(std::vector<std::string> names, Eigen::MatrixXd values,
                 std::vector<std::string> cluster_ids)
      : names_(std::move(names)),
        values_(std::move(values)),
        cluster_ids_(std::move(cluster_ids)) {}

  const std::vector<std::string>& names() const { return names_; }
  // m x q
  const Eigen::MatrixXd& values() const { return values_; }
  const std::vector<std::string>& cluster_ids() const { return cluster_ids_; }
  int n_aggregates() const { return static_cast<int>(names_.size()); }

 private:
  std::vector<std::string> names_;
  Eigen::MatrixXd values_;
  std::vector<std::string> cluster_ids_;
};

// Computes the aggregates of every unit covariate within each cluster.
// Values are deterministic functions of the per-cluster value multisets, so
// they are invariant to unit order and include every unit of the cluster.
AggregateTable compute_aggregates(const ClusteredDataset& dataset,
                                  const AggregateSpec& spec);

// Expands a cluster-level table to unit-level design columns: row i is the
// table row of unit i's cluster.  Throws MissingClusterRow when the table
// does not cover the dataset's clusters.
Eigen::MatrixXd attach_aggregates(const ClusteredDataset& dataset,
                                  const AggregateTable& table);

}  // namespace coskit

#endif  // COSKIT_AGGREGATES_HPP
