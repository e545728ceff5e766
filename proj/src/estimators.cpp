#include "coskit/estimators.hpp"

#include <utility>

#include "coskit/errors.hpp"

namespace coskit {
namespace {

bool uses_aggregates(AdjustmentSet set) { return set != AdjustmentSet::W; }
bool uses_unit_covariates(AdjustmentSet set) { return set == AdjustmentSet::WHX; }

std::vector<int> selected_units(const ClusteredDataset& dataset, ArmFilter arm) {
  std::vector<int> rows;
  rows.reserve(dataset.n_units());
  for (int i = 0; i < dataset.n_units(); ++i) {
    const int a = dataset.treatment()[dataset.unit_cluster()[i]];
    if (arm == ArmFilter::All || (arm == ArmFilter::Treated && a == 1) ||
        (arm == ArmFilter::Control && a == 0))
      rows.push_back(i);
  }
  return rows;
}

}  // namespace

const char* adjustment_name(AdjustmentSet set) {
  switch (set) {
    case AdjustmentSet::W:
      return "w";
    case AdjustmentSet::WH:
      return "wh";
    case AdjustmentSet::WHX:
      return "whx";
  }
  return "?";
}

std::optional<AdjustmentSet> parse_adjustment(std::string_view text) {
  if (text == "w") return AdjustmentSet::W;
  if (text == "wh") return AdjustmentSet::WH;
  if (text == "whx") return AdjustmentSet::WHX;
  return std::nullopt;
}

DesignMatrix build_design(const ClusteredDataset& dataset,
                          const AggregateTable* aggregates,
                          const ModelSpec& spec, ArmFilter arm) {
  if (uses_aggregates(spec.adjustment) && aggregates == nullptr)
    throw Error(ErrorCode::MissingAggregates,
                std::string("adjustment set '") +
                    adjustment_name(spec.adjustment) +
                    "' needs a cluster aggregate table");

  // Base regressors in fixed order: cluster covariates, aggregates, unit
  // covariates.  `continuous` drives the optional squared copies; aggregate
  // columns are summaries of within-cluster distributions and always count
  // as continuous.
  struct Column {
    std::string name;
    bool continuous;
  };
  std::vector<Column> base;
  for (const auto& def : dataset.cluster_schema())
    base.push_back({def.name, def.kind == CovariateKind::Continuous});
  if (uses_aggregates(spec.adjustment))
    for (const auto& name : aggregates->names()) base.push_back({name, true});
  if (uses_unit_covariates(spec.adjustment))
    for (const auto& def : dataset.unit_schema())
      base.push_back({def.name, def.kind == CovariateKind::Continuous});

  const std::vector<int> rows = selected_units(dataset, arm);
  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(base.size());

  // Gather the raw base columns for the selected rows.
  Eigen::MatrixXd raw(n, p);
  {
    int c = 0;
    for (int k = 0; k < dataset.cluster_covariates().cols(); ++k, ++c)
      for (int r = 0; r < n; ++r)
        raw(r, c) =
            dataset.cluster_covariates()(dataset.unit_cluster()[rows[r]], k);
    if (uses_aggregates(spec.adjustment)) {
      const Eigen::MatrixXd expanded = attach_aggregates(dataset, *aggregates);
      for (int k = 0; k < expanded.cols(); ++k, ++c)
        for (int r = 0; r < n; ++r) raw(r, c) = expanded(rows[r], k);
    }
    if (uses_unit_covariates(spec.adjustment))
      for (int k = 0; k < dataset.unit_covariates().cols(); ++k, ++c)
        for (int r = 0; r < n; ++r) raw(r, c) = dataset.unit_covariates()(rows[r], k);
  }

  std::vector<int> squared;  // base column indices getting a squared copy
  if (spec.quadratic_continuous)
    for (int c = 0; c < p; ++c)
      if (base[c].continuous) squared.push_back(c);

  DesignMatrix out;
  out.names.reserve(1 + p + squared.size());
  out.names.push_back("(intercept)");
  for (const auto& col : base) out.names.push_back(col.name);
  for (int c : squared) out.names.push_back(base[c].name + "_sq");

  out.x.resize(n, static_cast<int>(out.names.size()));
  out.x.col(0).setOnes();
  out.x.middleCols(1, p) = raw;
  for (int s = 0; s < static_cast<int>(squared.size()); ++s)
    out.x.col(1 + p + s) = raw.col(squared[s]).array().square();

  out.y.resize(n);
  for (int r = 0; r < n; ++r) out.y[r] = dataset.outcomes()[rows[r]];
  return out;
}

LeastSquaresFit least_squares(const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& y) {
  if (x.rows() == 0)
    throw Error(ErrorCode::NoRows, "least squares on an empty system");

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-8);
  cod.compute(x);

  LeastSquaresFit fit;
  fit.coefficients = cod.solve(y);  // minimum-norm when rank deficient
  fit.rank = static_cast<int>(cod.rank());
  fit.rank_deficient = fit.rank < x.cols();
  fit.n_rows = static_cast<int>(x.rows());
  return fit;
}

GFormulaResult g_formula(const ClusteredDataset& dataset,
                         const AggregateTable* aggregates,
                         const ModelSpec& spec) {
  if (dataset.one_armed())
    throw Error(ErrorCode::OneArmEmpty,
                dataset.treated_cluster_count() == 0
                    ? "no treated clusters; cannot fit the treated-arm model"
                    : "no control clusters; cannot fit the control-arm model");

  const DesignMatrix treated_rows =
      build_design(dataset, aggregates, spec, ArmFilter::Treated);
  const DesignMatrix control_rows =
      build_design(dataset, aggregates, spec, ArmFilter::Control);
  const LeastSquaresFit fit1 = least_squares(treated_rows.x, treated_rows.y);
  const LeastSquaresFit fit0 = least_squares(control_rows.x, control_rows.y);

  // Standardize: both fitted surfaces evaluated on the full population.
  const DesignMatrix everyone =
      build_design(dataset, aggregates, spec, ArmFilter::All);
  const double mean1 = (everyone.x * fit1.coefficients).mean();
  const double mean0 = (everyone.x * fit0.coefficients).mean();

  GFormulaResult out;
  out.estimate = mean1 - mean0;
  out.treated = {1, treated_rows.names, fit1.coefficients, fit1.rank_deficient,
                 fit1.n_rows};
  out.control = {0, control_rows.names, fit0.coefficients, fit0.rank_deficient,
                 fit0.n_rows};
  return out;
}

}  // namespace coskit
