#ifndef COSKIT_DATA_MODEL_HPP
#define COSKIT_DATA_MODEL_HPP

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace coskit {

enum class CovariateKind { Continuous, Binary };

struct CovariateDef {
  std::string name;
  CovariateKind kind;

  bool operator==(const CovariateDef&) const = default;
};

// Row-oriented input records.  Covariates are ordered (name, value) pairs;
// the key set must be identical across all units (resp. clusters) of a
// dataset.
struct Unit {
  std::string unit_id;
  std::string cluster_id;
  double outcome = 0.0;
  std::vector<std::pair<std::string, double>> covariates;
};

struct Cluster {
  std::string cluster_id;
  int treatment = 0;  // 0/1
  std::vector<std::pair<std::string, double>> covariates;
};

// Validated, immutable join of units and clusters.  Stored column-oriented:
// unit i belongs to cluster unit_cluster()[i], an index into the cluster
// arrays.  Safe to share across concurrent readers.
class ClusteredDataset {
 public:
  // Column-wise constructor used by the simulator and the bootstrap, where
  // the join is already indexed.  Validates index ranges, id uniqueness and
  // non-emptiness of every cluster.
  static ClusteredDataset from_columns(std::vector<std::string> unit_ids,
                                       std::vector<int> unit_cluster,
                                       Eigen::VectorXd outcomes,
                                       Eigen::MatrixXd unit_covariates,
                                       std::vector<CovariateDef> unit_schema,
                                       std::vector<std::string> cluster_ids,
                                       std::vector<int> treatment,
                                       Eigen::MatrixXd cluster_covariates,
                                       std::vector<CovariateDef> cluster_schema);

  int n_units() const { return static_cast<int>(unit_ids_.size()); }
  int n_clusters() const { return static_cast<int>(cluster_ids_.size()); }

  const std::vector<std::string>& unit_ids() const { return unit_ids_; }
  const std::vector<int>& unit_cluster() const { return unit_cluster_; }
  const Eigen::VectorXd& outcomes() const { return outcomes_; }
  // n x p_x; column j described by unit_schema()[j]
  const Eigen::MatrixXd& unit_covariates() const { return unit_covariates_; }
  const std::vector<CovariateDef>& unit_schema() const { return unit_schema_; }

  const std::vector<std::string>& cluster_ids() const { return cluster_ids_; }
  const std::vector<int>& treatment() const { return treatment_; }
  // m x p_w; column j described by cluster_schema()[j]
  const Eigen::MatrixXd& cluster_covariates() const { return cluster_covariates_; }
  const std::vector<CovariateDef>& cluster_schema() const { return cluster_schema_; }

  // Unit indices grouped by cluster, in unit order within each cluster.
  const std::vector<std::vector<int>>& cluster_members() const { return members_; }

  int treated_cluster_count() const { return treated_clusters_; }
  int control_cluster_count() const { return n_clusters() - treated_clusters_; }
  // Warning flag: fewer than one treated or one control cluster.  The
  // dataset is still usable for inspection; estimation rejects it.
  bool one_armed() const { return treated_clusters_ == 0 || treated_clusters_ == n_clusters(); }

 private:
  ClusteredDataset() = default;

  std::vector<std::string> unit_ids_;
  std::vector<int> unit_cluster_;
  Eigen::VectorXd outcomes_;
  Eigen::MatrixXd unit_covariates_;
  std::vector<CovariateDef> unit_schema_;

  std::vector<std::string> cluster_ids_;
  std::vector<int> treatment_;
  Eigen::MatrixXd cluster_covariates_;
  std::vector<CovariateDef> cluster_schema_;

  std::vector<std::vector<int>> members_;
  int treated_clusters_ = 0;
};

// Builds a dataset from row records.  Resolves cluster references, checks
// covariate key sets for consistency, and infers covariate kinds: a
// covariate is Binary iff every observed value is exactly 0 or 1.
ClusteredDataset build_dataset(std::span<const Unit> units,
                               std::span<const Cluster> clusters);

struct ArmPartition {
  std::vector<int> treated;  // unit indices whose cluster is treated
  std::vector<int> control;
};

ArmPartition arm_partition(const ClusteredDataset& dataset);

}  // namespace coskit

#endif  // COSKIT_DATA_MODEL_HPP
