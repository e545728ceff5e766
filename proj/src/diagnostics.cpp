#include "coskit/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "coskit/errors.hpp"

namespace coskit {
namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // n-1 denominator; zero for a single observation
};

Moments moments(std::span<const double> values) {
  Moments m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.var = ss / static_cast<double>(values.size() - 1);
  }
  return m;
}

// Core of the statistic; NaN when the pooled SD vanishes.
BalanceRow make_row(std::string name, BalanceLevel level,
                    std::span<const double> treated,
                    std::span<const double> control) {
  const Moments t = moments(treated);
  const Moments c = moments(control);
  BalanceRow row{std::move(name), level, t.mean, c.mean, 0.0, false};
  const double pooled = std::sqrt((t.var + c.var) / 2.0);
  if (pooled == 0.0) {
    row.std_diff = std::numeric_limits<double>::quiet_NaN();
    row.undefined = true;
  } else {
    row.std_diff = (t.mean - c.mean) / pooled;
  }
  return row;
}

std::vector<double> gather(const Eigen::MatrixXd& values, int col,
                           const std::vector<int>& rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(values(r, col));
  return out;
}

}  // namespace

const char* balance_level_name(BalanceLevel level) {
  return level == BalanceLevel::Unit ? "unit" : "cluster";
}

double standardized_difference(std::span<const double> treated,
                               std::span<const double> control) {
  if (treated.empty() || control.empty())
    throw Error(ErrorCode::OneArmEmpty,
                std::string(treated.empty() ? "treated" : "control") +
                    " sample is empty");
  const BalanceRow row = make_row("", BalanceLevel::Unit, treated, control);
  if (row.undefined)
    throw Error(ErrorCode::ZeroPooledSD,
                "both arms are constant; standardized difference undefined");
  return row.std_diff;
}

std::vector<BalanceRow> balance_table(const ClusteredDataset& dataset,
                                      const AggregateTable* aggregates) {
  if (dataset.one_armed())
    throw Error(ErrorCode::OneArmEmpty,
                "balance needs at least one cluster in each arm");

  const ArmPartition units = arm_partition(dataset);
  std::vector<int> treated_clusters, control_clusters;
  for (int j = 0; j < dataset.n_clusters(); ++j)
    (dataset.treatment()[j] == 1 ? treated_clusters : control_clusters)
        .push_back(j);

  std::vector<BalanceRow> rows;
  for (std::size_t k = 0; k < dataset.unit_schema().size(); ++k)
    rows.push_back(make_row(
        dataset.unit_schema()[k].name, BalanceLevel::Unit,
        gather(dataset.unit_covariates(), static_cast<int>(k), units.treated),
        gather(dataset.unit_covariates(), static_cast<int>(k), units.control)));
  for (std::size_t k = 0; k < dataset.cluster_schema().size(); ++k)
    rows.push_back(make_row(
        dataset.cluster_schema()[k].name, BalanceLevel::Cluster,
        gather(dataset.cluster_covariates(), static_cast<int>(k),
               treated_clusters),
        gather(dataset.cluster_covariates(), static_cast<int>(k),
               control_clusters)));
  if (aggregates != nullptr)
    for (int k = 0; k < aggregates->n_aggregates(); ++k)
      rows.push_back(
          make_row(aggregates->names()[k], BalanceLevel::Cluster,
                   gather(aggregates->values(), k, treated_clusters),
                   gather(aggregates->values(), k, control_clusters)));
  return rows;
}

}  // namespace coskit
