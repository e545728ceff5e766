#include "coskit/dgp.hpp"

#include <cmath>
#include <string>

#include "coskit/errors.hpp"
#include "coskit/rng.hpp"

namespace coskit {
namespace {

// Stage salts: every stage draws from its own substream of the config seed,
// so a draw count change in one stage cannot shift another stage's stream.
constexpr std::uint64_t kSaltBaseline = 1;
constexpr std::uint64_t kSaltTreatment = 2;
constexpr std::uint64_t kSaltPairing = 3;
constexpr std::uint64_t kSaltOutcome = 4;

double draw_uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void check_config(const SimulationConfig& config) {
  if (config.m < 2)
    throw Error(ErrorCode::UsageError, "need at least 2 clusters, got " +
                                           std::to_string(config.m));
  if (config.n < config.m)
    throw Error(ErrorCode::UsageError,
                "need at least one unit per cluster: n=" +
                    std::to_string(config.n) + " < m=" + std::to_string(config.m));
}

// The treatment stage of trial 1 and the outcome stage of every trial
// consume the four default aggregates of the realized pairing, in this
// fixed column order.
void check_default_aggregates(const AggregateTable& table, const char* stage) {
  static const std::vector<std::string> expected = {"x1_q25", "x1_q50",
                                                    "x1_q75", "x2_mean"};
  if (table.names() != expected)
    throw Error(ErrorCode::StageOrderViolation,
                std::string(stage) +
                    " needs the default aggregate table (x1_q25, x1_q50, "
                    "x1_q75, x2_mean)");
}

// Inverse-CDF draw over the softmax of scale*b_j.  `buf` holds the
// unnormalized masses; subtracting the max before exponentiating keeps the
// masses finite for any scale.
int sample_cluster(double scale, const Eigen::VectorXd& b, double u,
                   std::vector<double>& buf) {
  const int m = static_cast<int>(b.size());
  double top = scale * b[0];
  for (int j = 1; j < m; ++j) top = std::max(top, scale * b[j]);
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    buf[j] = std::exp(scale * b[j] - top);
    total += buf[j];
  }
  const double target = u * total;
  double cum = 0.0;
  for (int j = 0; j < m; ++j) {
    cum += buf[j];
    if (cum >= target) return j;
  }
  return m - 1;  // guards against accumulated rounding; u < 1 so cum ends at total
}

}  // namespace

const char* trial_name(TargetTrial trial) {
  switch (trial) {
    case TargetTrial::Trial1:
      return "1";
    case TargetTrial::Trial2a:
      return "2a";
    case TargetTrial::Trial2b:
      return "2b";
  }
  return "?";
}

Baseline gen_baseline(const SimulationConfig& config) {
  check_config(config);
  auto rng = engine_for(config.seed, kSaltBaseline);
  std::normal_distribution<double> normal(0.0, 1.0);

  Baseline out;
  out.w.resize(config.m);
  for (int j = 0; j < config.m; ++j) out.w[j] = normal(rng);
  out.x1.resize(config.n);
  for (int i = 0; i < config.n; ++i) out.x1[i] = normal(rng);
  out.x2.resize(config.n);
  for (int i = 0; i < config.n; ++i)
    out.x2[i] = draw_uniform(rng) < 0.4 ? 1.0 : 0.0;
  return out;
}

Eigen::VectorXd pairing_scores(const Eigen::VectorXd& w,
                               const std::vector<int>* treatment,
                               TargetTrial trial) {
  const bool wants_treatment = trial == TargetTrial::Trial2b;
  if (wants_treatment && treatment == nullptr)
    throw Error(ErrorCode::StageOrderViolation,
                "trial 2b pairs after treatment; treatment vector missing");
  if (!wants_treatment && treatment != nullptr)
    throw Error(ErrorCode::StageOrderViolation,
                "trial " + std::string(trial_name(trial)) +
                    " pairs blinded to treatment; treatment vector present");
  if (wants_treatment && static_cast<int>(treatment->size()) != w.size())
    throw Error(ErrorCode::Internal, "treatment/cluster size mismatch");

  Eigen::VectorXd b = 0.2 * w;
  if (wants_treatment)
    for (int j = 0; j < w.size(); ++j) b[j] += 0.2 * (*treatment)[j];
  return b;
}

Eigen::VectorXd pairing_probabilities(double x1, double x2,
                                      const Eigen::VectorXd& cluster_scores) {
  const double scale = 1.0 + x1 + x2;
  Eigen::VectorXd p = (scale * cluster_scores).array() -
                      (scale * cluster_scores).maxCoeff();
  p = p.array().exp();
  return p / p.sum();
}

std::vector<int> assign_units(const Eigen::VectorXd& x1,
                              const Eigen::VectorXd& x2,
                              const Eigen::VectorXd& w,
                              const std::vector<int>* treatment,
                              TargetTrial trial, std::mt19937_64& rng) {
  const Eigen::VectorXd b = pairing_scores(w, treatment, trial);
  const int n = static_cast<int>(x1.size());

  // All randomness up front, in unit order; the loop below is then pure.
  std::vector<double> uniforms(n);
  for (int i = 0; i < n; ++i) uniforms[i] = draw_uniform(rng);

  std::vector<int> pairing(n);
#pragma omp parallel
  {
    std::vector<double> buf(b.size());
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i)
      pairing[i] = sample_cluster(1.0 + x1[i] + x2[i], b, uniforms[i], buf);
  }
  return pairing;
}

std::vector<int> assign_units_serial(const Eigen::VectorXd& x1,
                                     const Eigen::VectorXd& x2,
                                     const Eigen::VectorXd& w,
                                     const std::vector<int>* treatment,
                                     TargetTrial trial, std::mt19937_64& rng) {
  const Eigen::VectorXd b = pairing_scores(w, treatment, trial);
  const int n = static_cast<int>(x1.size());

  std::vector<double> uniforms(n);
  for (int i = 0; i < n; ++i) uniforms[i] = draw_uniform(rng);

  std::vector<int> pairing(n);
  std::vector<double> buf(b.size());
  for (int i = 0; i < n; ++i)
    pairing[i] = sample_cluster(1.0 + x1[i] + x2[i], b, uniforms[i], buf);
  return pairing;
}

double treatment_probability(double w, const double* aggregate_row,
                             TargetTrial trial) {
  double z = 0.2 * w;
  if (trial == TargetTrial::Trial1) {
    if (aggregate_row == nullptr)
      throw Error(ErrorCode::StageOrderViolation,
                  "trial 1 treats after pairing; aggregate row missing");
    z += 0.2 * (aggregate_row[0] + aggregate_row[1] + aggregate_row[2]) +
         0.2 * (aggregate_row[3] - 0.4);
  } else if (aggregate_row != nullptr) {
    throw Error(ErrorCode::StageOrderViolation,
                "trial " + std::string(trial_name(trial)) +
                    " treats before pairing; aggregate row present");
  }
  return 1.0 / (1.0 + std::exp(-z));
}

std::vector<int> assign_treatment(const Eigen::VectorXd& w,
                                  const AggregateTable* aggregates,
                                  TargetTrial trial, std::mt19937_64& rng) {
  if (trial == TargetTrial::Trial1) {
    if (aggregates == nullptr)
      throw Error(ErrorCode::StageOrderViolation,
                  "trial 1 treats after pairing; aggregate table missing");
    check_default_aggregates(*aggregates, "trial 1 treatment");
    if (aggregates->values().rows() != w.size())
      throw Error(ErrorCode::Internal, "aggregate/cluster size mismatch");
  } else if (aggregates != nullptr) {
    throw Error(ErrorCode::StageOrderViolation,
                "trial " + std::string(trial_name(trial)) +
                    " treats before pairing; aggregate table present");
  }

  const int m = static_cast<int>(w.size());
  std::vector<int> a(m);
  for (int j = 0; j < m; ++j) {
    const double* row = nullptr;
    Eigen::RowVector4d h;
    if (aggregates != nullptr) {
      h = aggregates->values().row(j);
      row = h.data();
    }
    a[j] = draw_uniform(rng) < treatment_probability(w[j], row, trial) ? 1 : 0;
  }
  return a;
}

Outcomes gen_outcomes(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                      const Eigen::VectorXd& w, const std::vector<int>& pairing,
                      const std::vector<int>& treatment,
                      const AggregateTable& aggregates, std::mt19937_64& rng) {
  check_default_aggregates(aggregates, "outcome stage");
  const int n = static_cast<int>(x1.size());
  const int m = static_cast<int>(w.size());
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::VectorXd e(m);
  for (int j = 0; j < m; ++j) e[j] = normal(rng);
  Eigen::VectorXd eps(n);
  for (int i = 0; i < n; ++i) eps[i] = normal(rng);

  const Eigen::VectorXd hsum = aggregates.values().rowwise().sum();

  Outcomes out;
  out.y.resize(n);
  out.y1.resize(n);
  out.y0.resize(n);
  out.ite.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = pairing[i];
    const double base =
        x1[i] + x2[i] + 0.5 * (w[j] + hsum[j]) + 0.1 * e[j] + eps[i];
    const double effect = 0.4 * (x1[i] + x2[i]);
    out.y0[i] = base;
    out.y1[i] = base + effect;
    out.ite[i] = effect;
    out.y[i] = treatment[j] == 1 ? out.y1[i] : out.y0[i];
  }
  return out;
}

SimulatedDataset simulate(const SimulationConfig& config) {
  check_config(config);
  const Baseline base = gen_baseline(config);
  auto pairing_rng = engine_for(config.seed, kSaltPairing);
  auto treatment_rng = engine_for(config.seed, kSaltTreatment);
  auto outcome_rng = engine_for(config.seed, kSaltOutcome);

  // Stage order is what separates the trials: where treatment enters.
  std::vector<int> pairing;
  std::vector<int> a;
  if (config.trial == TargetTrial::Trial1) {
    pairing = assign_units(base.x1, base.x2, base.w, nullptr, config.trial,
                           pairing_rng);
  } else {
    a = assign_treatment(base.w, nullptr, config.trial, treatment_rng);
    const std::vector<int>* seen =
        config.trial == TargetTrial::Trial2b ? &a : nullptr;
    pairing =
        assign_units(base.x1, base.x2, base.w, seen, config.trial, pairing_rng);
  }

  // Aggregates need a dataset; build a provisional one with outcomes and
  // (for trial 1) treatment still zero.
  std::vector<std::string> unit_ids(config.n);
  for (int i = 0; i < config.n; ++i) unit_ids[i] = "u" + std::to_string(i + 1);
  std::vector<std::string> cluster_ids(config.m);
  for (int j = 0; j < config.m; ++j)
    cluster_ids[j] = "c" + std::to_string(j + 1);

  Eigen::MatrixXd x(config.n, 2);
  x.col(0) = base.x1;
  x.col(1) = base.x2;
  const std::vector<CovariateDef> unit_schema = {
      {"x1", CovariateKind::Continuous}, {"x2", CovariateKind::Binary}};
  const std::vector<CovariateDef> cluster_schema = {
      {"w", CovariateKind::Continuous}};

  auto make_dataset = [&](const Eigen::VectorXd& y, const std::vector<int>& at) {
    return ClusteredDataset::from_columns(unit_ids, pairing, y, x, unit_schema,
                                          cluster_ids, at, base.w,
                                          cluster_schema);
  };

  const AggregateSpec spec;  // defaults: x1 quantiles, x2 mean
  const AggregateTable aggregates = compute_aggregates(
      make_dataset(Eigen::VectorXd::Zero(config.n),
                   a.empty() ? std::vector<int>(config.m, 0) : a),
      spec);

  if (config.trial == TargetTrial::Trial1)
    a = assign_treatment(base.w, &aggregates, config.trial, treatment_rng);

  const Outcomes outcomes = gen_outcomes(base.x1, base.x2, base.w, pairing, a,
                                         aggregates, outcome_rng);

  SimulatedDataset out{make_dataset(outcomes.y, a), outcomes.y1, outcomes.y0,
                       outcomes.ite};
  return out;
}

}  // namespace coskit
