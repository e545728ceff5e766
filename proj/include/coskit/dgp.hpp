#ifndef COSKIT_DGP_HPP
#define COSKIT_DGP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "coskit/aggregates.hpp"
#include "coskit/data_model.hpp"

namespace coskit {

// The three ways cluster treatment and unit-cluster pairing can be ordered.
// Trial1: units pair first, clusters are then treated with knowledge of the
// realized cluster compositions.  Trial2a: clusters are treated first and
// units pair blinded to treatment.  Trial2b: clusters are treated first and
// units pair with knowledge of treatment (differential selection).
enum class TargetTrial { Trial1, Trial2a, Trial2b };

const char* trial_name(TargetTrial trial);  // "1", "2a", "2b"

struct SimulationConfig {
  TargetTrial trial = TargetTrial::Trial1;
  int m = 50;    // clusters
  int n = 4000;  // units
  std::uint64_t seed = 0;
};

// A generated population plus its ground truth.  The observed outcome of
// every unit equals the potential outcome of its cluster's realized arm;
// both arms share the pairing, aggregates and noise draws, and ite holds
// the effect term 0.4*(x1+x2) itself rather than the difference y1-y0, so
// it is exact and free of subtraction rounding.
struct SimulatedDataset {
  ClusteredDataset data;
  Eigen::VectorXd y1;   // potential outcome, all clusters treated
  Eigen::VectorXd y0;   // potential outcome, all clusters control
  Eigen::VectorXd ite;  // unit-level effect 0.4*(x1+x2)
};

struct Baseline {
  Eigen::VectorXd w;   // m, N(0,1)
  Eigen::VectorXd x1;  // n, N(0,1)
  Eigen::VectorXd x2;  // n, Bernoulli(0.4), values 0/1
};

// Baseline covariates, drawn from a substream of config.seed so the result
// depends only on the config.
Baseline gen_baseline(const SimulationConfig& config);

// Per-cluster pairing score b_j: 0.2*w_j for trials 1 and 2a,
// 0.2*w_j + 0.2*a_j for trial 2b.  `treatment` must be null for trials
// 1/2a and present for 2b; anything else is a StageOrderViolation.
Eigen::VectorXd pairing_scores(const Eigen::VectorXd& w,
                               const std::vector<int>* treatment,
                               TargetTrial trial);

// Multinomial pairing probabilities for one unit: softmax over clusters of
// (1 + x1 + x2) * b_j.  Rows sum to 1.
Eigen::VectorXd pairing_probabilities(double x1, double x2,
                                      const Eigen::VectorXd& cluster_scores);

// Samples every unit's cluster independently by inverse CDF over its
// pairing probabilities.  Uniform draws are taken from `rng` in unit order
// before any assignment is computed, so the result is identical whether the
// per-unit softmax loop runs serially or OpenMP-parallel.
std::vector<int> assign_units(const Eigen::VectorXd& x1,
                              const Eigen::VectorXd& x2,
                              const Eigen::VectorXd& w,
                              const std::vector<int>* treatment,
                              TargetTrial trial, std::mt19937_64& rng);

// Serial reference for assign_units; must produce identical output.
std::vector<int> assign_units_serial(const Eigen::VectorXd& x1,
                                     const Eigen::VectorXd& x2,
                                     const Eigen::VectorXd& w,
                                     const std::vector<int>* treatment,
                                     TargetTrial trial, std::mt19937_64& rng);

// P(A_j = 1) for one cluster.  Trial1 conditions on the four default
// aggregates of the realized pairing (x1 quantiles at 25/50/75 and the x2
// mean): logit p = 0.2*w + 0.2*(h1+h2+h3) + 0.2*(h4-0.4).  Trials 2a/2b
// use logit p = 0.2*w and must not see aggregates.
double treatment_probability(double w, const double* aggregate_row,
                             TargetTrial trial);

// Independent Bernoulli treatment per cluster.  `aggregates` must be
// present for Trial1 (computed from the realized pairing) and null for
// trials 2a/2b; anything else is a StageOrderViolation.
std::vector<int> assign_treatment(const Eigen::VectorXd& w,
                                  const AggregateTable* aggregates,
                                  TargetTrial trial, std::mt19937_64& rng);

struct Outcomes {
  Eigen::VectorXd y;    // observed
  Eigen::VectorXd y1;   // treated-arm potential outcome
  Eigen::VectorXd y0;   // control-arm potential outcome
  Eigen::VectorXd ite;  // 0.4*(x1+x2), stored directly
};

// Outcome model, identical for every trial:
//   y_i(a) = x1 + x2 + 0.4*a*(x1+x2)
//          + 0.5*(w_J + h_J1 + h_J2 + h_J3 + h_J4) + 0.1*e_J + eps_i
// with e_j, eps_i ~ N(0,1).  Both arms share e, eps and the aggregates;
// only the a term differs.
Outcomes gen_outcomes(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                      const Eigen::VectorXd& w, const std::vector<int>& pairing,
                      const std::vector<int>& treatment,
                      const AggregateTable& aggregates, std::mt19937_64& rng);

// Full generation in the trial's stage order:
//   Trial1:  baseline -> pairing -> aggregates -> treatment -> outcomes
//   Trial2a: baseline -> treatment -> pairing -> aggregates -> outcomes
//   Trial2b: baseline -> treatment -> pairing(A) -> aggregates -> outcomes
// Each stage draws from its own substream of config.seed, so an identical
// config yields a bit-identical dataset.
SimulatedDataset simulate(const SimulationConfig& config);

}  // namespace coskit

#endif  // COSKIT_DGP_HPP
