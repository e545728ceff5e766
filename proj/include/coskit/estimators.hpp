#ifndef COSKIT_ESTIMATORS_HPP
#define COSKIT_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coskit/aggregates.hpp"
#include "coskit/data_model.hpp"

namespace coskit {

// Nested regressor sets: cluster covariates only; plus cluster aggregates
// of unit covariates; plus the unit covariates themselves.
enum class AdjustmentSet { W, WH, WHX };

const char* adjustment_name(AdjustmentSet set);  // "w", "wh", "whx"
std::optional<AdjustmentSet> parse_adjustment(std::string_view text);

struct ModelSpec {
  AdjustmentSet adjustment = AdjustmentSet::WHX;
  // Adds a squared copy of every continuous regressor (aggregate columns
  // count as continuous).  The intercept is always included.
  bool quadratic_continuous = false;
};

enum class ArmFilter { All, Treated, Control };

// A fully materialized regression problem: row per selected unit, named
// columns with "(intercept)" first, then cluster covariates, aggregates,
// unit covariates, and finally any squared terms (named `<regressor>_sq`).
struct DesignMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd x;  // rows x names.size()
  Eigen::VectorXd y;
};

// Materializes the regressors the spec asks for.  W columns are copied from
// each unit's cluster, aggregate columns expanded via attach_aggregates,
// X columns taken from the unit itself.  `aggregates` may be null only when
// the adjustment set does not use them.
DesignMatrix build_design(const ClusteredDataset& dataset,
                          const AggregateTable* aggregates,
                          const ModelSpec& spec, ArmFilter arm);

struct LeastSquaresFit {
  Eigen::VectorXd coefficients;
  int rank = 0;
  // Numerical rank < column count.  The fit is still usable: the solver
  // returns the minimum-norm solution, and callers surface the flag.
  bool rank_deficient = false;
  int n_rows = 0;
};

// Minimizes ||x*beta - y||^2 via a rank-revealing orthogonal decomposition
// (pivot threshold 1e-8 relative to the largest pivot).  Throws NoRows on
// an empty system.
LeastSquaresFit least_squares(const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& y);

struct FittedArmModel {
  int arm = 0;  // 0 control, 1 treated
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  bool rank_deficient = false;
  int n_rows = 0;
};

struct GFormulaResult {
  double estimate = 0.0;
  FittedArmModel treated;
  FittedArmModel control;

  bool rank_deficient() const {
    return treated.rank_deficient || control.rank_deficient;
  }
};

// Parametric g-formula by standardization: fits the outcome model
// separately on treated-arm and control-arm units, predicts *all* n units
// under each fit, and returns mean(pred_treated) - mean(pred_control).
// Throws OneArmEmpty when either arm has no clusters.
GFormulaResult g_formula(const ClusteredDataset& dataset,
                         const AggregateTable* aggregates,
                         const ModelSpec& spec);

}  // namespace coskit

#endif  // COSKIT_ESTIMATORS_HPP
