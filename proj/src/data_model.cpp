#include "coskit/data_model.hpp"

#include <unordered_map>
#include <unordered_set>

#include "coskit/errors.hpp"

namespace coskit {

namespace {

bool is_zero_or_one(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

ClusteredDataset ClusteredDataset::from_columns(
    std::vector<std::string> unit_ids, std::vector<int> unit_cluster,
    Eigen::VectorXd outcomes, Eigen::MatrixXd unit_covariates,
    std::vector<CovariateDef> unit_schema, std::vector<std::string> cluster_ids,
    std::vector<int> treatment, Eigen::MatrixXd cluster_covariates,
    std::vector<CovariateDef> cluster_schema) {
  const auto n = static_cast<Eigen::Index>(unit_ids.size());
  const auto m = static_cast<Eigen::Index>(cluster_ids.size());
  if (n == 0) throw Error(ErrorCode::EmptyCluster, "dataset has no units");
  if (m == 0) throw Error(ErrorCode::EmptyCluster, "dataset has no clusters");
  if (static_cast<Eigen::Index>(unit_cluster.size()) != n ||
      outcomes.size() != n || unit_covariates.rows() != n ||
      unit_covariates.cols() != static_cast<Eigen::Index>(unit_schema.size()) ||
      static_cast<Eigen::Index>(treatment.size()) != m ||
      cluster_covariates.rows() != m ||
      cluster_covariates.cols() != static_cast<Eigen::Index>(cluster_schema.size())) {
    throw Error(ErrorCode::Internal, "from_columns: inconsistent array sizes");
  }

  {
    std::unordered_set<std::string> seen;
    seen.reserve(cluster_ids.size());
    for (const auto& id : cluster_ids) {
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::DuplicateClusterId,
                    "duplicate cluster id '" + id + "'");
      }
    }
  }

  ClusteredDataset ds;
  ds.members_.assign(cluster_ids.size(), {});
  for (std::size_t i = 0; i < unit_cluster.size(); ++i) {
    const int c = unit_cluster[i];
    if (c < 0 || c >= static_cast<int>(cluster_ids.size())) {
      throw Error(ErrorCode::DanglingClusterRef,
                  "unit '" + unit_ids[i] + "' references cluster index " +
                      std::to_string(c) + " out of range");
    }
    ds.members_[c].push_back(static_cast<int>(i));
  }
  for (std::size_t j = 0; j < ds.members_.size(); ++j) {
    if (ds.members_[j].empty()) {
      throw Error(ErrorCode::EmptyCluster,
                  "cluster '" + cluster_ids[j] + "' has no units");
    }
  }

  int treated = 0;
  for (int a : treatment) {
    if (a != 0 && a != 1) {
      throw Error(ErrorCode::BadNumericField,
                  "treatment must be 0 or 1, got " + std::to_string(a));
    }
    treated += a;
  }

  ds.unit_ids_ = std::move(unit_ids);
  ds.unit_cluster_ = std::move(unit_cluster);
  ds.outcomes_ = std::move(outcomes);
  ds.unit_covariates_ = std::move(unit_covariates);
  ds.unit_schema_ = std::move(unit_schema);
  ds.cluster_ids_ = std::move(cluster_ids);
  ds.treatment_ = std::move(treatment);
  ds.cluster_covariates_ = std::move(cluster_covariates);
  ds.cluster_schema_ = std::move(cluster_schema);
  ds.treated_clusters_ = treated;
  return ds;
}

ClusteredDataset build_dataset(std::span<const Unit> units,
                               std::span<const Cluster> clusters) {
  if (units.empty()) throw Error(ErrorCode::EmptyCluster, "no units given");
  if (clusters.empty()) throw Error(ErrorCode::EmptyCluster, "no clusters given");

  std::unordered_map<std::string, int> cluster_index;
  cluster_index.reserve(clusters.size());
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    if (!cluster_index.emplace(clusters[j].cluster_id, static_cast<int>(j)).second) {
      throw Error(ErrorCode::DuplicateClusterId,
                  "duplicate cluster id '" + clusters[j].cluster_id + "'");
    }
  }

  // Schemas come from the first record; every other record must carry the
  // same names in the same order.
  auto names_of = [](const auto& rec) {
    std::vector<std::string> names;
    names.reserve(rec.covariates.size());
    for (const auto& [name, value] : rec.covariates) names.push_back(name);
    return names;
  };
  const std::vector<std::string> unit_names = names_of(units[0]);
  const std::vector<std::string> cluster_names = names_of(clusters[0]);

  const auto n = static_cast<Eigen::Index>(units.size());
  const auto m = static_cast<Eigen::Index>(clusters.size());
  Eigen::VectorXd y(n);
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(unit_names.size()));
  Eigen::MatrixXd w(m, static_cast<Eigen::Index>(cluster_names.size()));
  std::vector<std::string> unit_ids(units.size());
  std::vector<int> unit_cluster(units.size());
  std::vector<std::string> cluster_ids(clusters.size());
  std::vector<int> treatment(clusters.size());

  for (Eigen::Index i = 0; i < n; ++i) {
    const Unit& u = units[i];
    const auto it = cluster_index.find(u.cluster_id);
    if (it == cluster_index.end()) {
      throw Error(ErrorCode::DanglingClusterRef,
                  "unit '" + u.unit_id + "' references unknown cluster '" +
                      u.cluster_id + "'");
    }
    if (u.covariates.size() != unit_names.size()) {
      throw Error(ErrorCode::InconsistentSchema,
                  "unit '" + u.unit_id + "' has " +
                      std::to_string(u.covariates.size()) +
                      " covariates, expected " + std::to_string(unit_names.size()));
    }
    for (std::size_t k = 0; k < unit_names.size(); ++k) {
      if (u.covariates[k].first != unit_names[k]) {
        throw Error(ErrorCode::InconsistentSchema,
                    "unit '" + u.unit_id + "' covariate '" +
                        u.covariates[k].first + "' does not match schema '" +
                        unit_names[k] + "'");
      }
      x(i, static_cast<Eigen::Index>(k)) = u.covariates[k].second;
    }
    unit_ids[i] = u.unit_id;
    unit_cluster[i] = it->second;
    y(i) = u.outcome;
  }

  for (Eigen::Index j = 0; j < m; ++j) {
    const Cluster& c = clusters[j];
    if (c.covariates.size() != cluster_names.size()) {
      throw Error(ErrorCode::InconsistentSchema,
                  "cluster '" + c.cluster_id + "' has " +
                      std::to_string(c.covariates.size()) +
                      " covariates, expected " + std::to_string(cluster_names.size()));
    }
    for (std::size_t k = 0; k < cluster_names.size(); ++k) {
      if (c.covariates[k].first != cluster_names[k]) {
        throw Error(ErrorCode::InconsistentSchema,
                    "cluster '" + c.cluster_id + "' covariate '" +
                        c.covariates[k].first + "' does not match schema '" +
                        cluster_names[k] + "'");
      }
      w(j, static_cast<Eigen::Index>(k)) = c.covariates[k].second;
    }
    cluster_ids[j] = c.cluster_id;
    treatment[j] = c.treatment;
  }

  auto infer_schema = [](const std::vector<std::string>& names,
                         const Eigen::MatrixXd& values) {
    std::vector<CovariateDef> schema;
    schema.reserve(names.size());
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto col = values.col(static_cast<Eigen::Index>(k));
      bool binary = true;
      for (Eigen::Index r = 0; r < col.size() && binary; ++r) {
        binary = is_zero_or_one(col(r));
      }
      schema.push_back({names[k], binary ? CovariateKind::Binary
                                         : CovariateKind::Continuous});
    }
    return schema;
  };

  return ClusteredDataset::from_columns(
      std::move(unit_ids), std::move(unit_cluster), std::move(y), x,
      infer_schema(unit_names, x), std::move(cluster_ids), std::move(treatment),
      w, infer_schema(cluster_names, w));
}

ArmPartition arm_partition(const ClusteredDataset& dataset) {
  ArmPartition part;
  const auto& cluster = dataset.unit_cluster();
  const auto& a = dataset.treatment();
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    if (a[cluster[i]] == 1) {
      part.treated.push_back(static_cast<int>(i));
    } else {
      part.control.push_back(static_cast<int>(i));
    }
  }
  return part;
}

}  // namespace coskit
