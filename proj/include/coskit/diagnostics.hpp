#ifndef COSKIT_DIAGNOSTICS_HPP
#define COSKIT_DIAGNOSTICS_HPP

#include <span>
#include <string>
#include <vector>

#include "coskit/aggregates.hpp"
#include "coskit/data_model.hpp"

namespace coskit {

enum class BalanceLevel { Unit, Cluster };

const char* balance_level_name(BalanceLevel level);  // "unit", "cluster"

struct BalanceRow {
  std::string covariate;
  BalanceLevel level = BalanceLevel::Unit;
  double mean_t = 0.0;
  double mean_c = 0.0;
  // NaN (with `undefined` set) when the pooled SD is zero; a zero here
  // would fake perfect balance.
  double std_diff = 0.0;
  bool undefined = false;
};

// (mean_t - mean_c) / sqrt((var_t + var_c)/2) with n-1 sample variances,
// the arms' variances averaged unweighted.  A single observation counts as
// variance zero.  Throws OneArmEmpty on an empty sample and ZeroPooledSD
// when both arms are constant.
double standardized_difference(std::span<const double> treated,
                               std::span<const double> control);

// One row per covariate: unit covariates over units (grouped by their
// cluster's arm), then cluster covariates over clusters, then aggregate
// columns over clusters when a table is supplied.  Rows with zero pooled SD
// come back flagged undefined instead of raising.
std::vector<BalanceRow> balance_table(const ClusteredDataset& dataset,
                                      const AggregateTable* aggregates);

}  // namespace coskit

#endif  // COSKIT_DIAGNOSTICS_HPP
