#ifndef COSKIT_TESTS_SUPPORT_HPP
#define COSKIT_TESTS_SUPPORT_HPP

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "coskit/data_model.hpp"
#include "coskit/errors.hpp"

namespace test_support {

// Runs `fn`, which must throw a coskit::Error, and hands back its code.
template <typename Fn>
coskit::ErrorCode thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const coskit::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a coskit::Error, nothing was thrown");
}

// Random two-armed dataset: cluster 0 treated and cluster 1 control are
// forced so estimation preconditions hold; remaining treatments are coin
// flips.  Unit-cluster pairing is uniform but every cluster keeps at least
// one unit.
inline coskit::ClusteredDataset random_dataset(std::mt19937_64& rng, int m,
                                               int n, int p_x, int p_w) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::string> unit_ids(n), cluster_ids(m);
  std::vector<int> unit_cluster(n), treatment(m);
  Eigen::VectorXd y(n);
  Eigen::MatrixXd x(n, p_x), w(m, p_w);

  for (int j = 0; j < m; ++j) {
    cluster_ids[j] = "c" + std::to_string(j + 1);
    treatment[j] = j == 0 ? 1 : (j == 1 ? 0 : static_cast<int>(rng() % 2));
    for (int k = 0; k < p_w; ++k) w(j, k) = normal(rng);
  }
  for (int i = 0; i < n; ++i) {
    unit_ids[i] = "u" + std::to_string(i + 1);
    unit_cluster[i] = i < m ? i : static_cast<int>(rng() % m);
    y[i] = normal(rng);
    for (int k = 0; k < p_x; ++k) x(i, k) = normal(rng);
  }

  std::vector<coskit::CovariateDef> unit_schema, cluster_schema;
  for (int k = 0; k < p_x; ++k)
    unit_schema.push_back(
        {"x" + std::to_string(k + 1), coskit::CovariateKind::Continuous});
  for (int k = 0; k < p_w; ++k)
    cluster_schema.push_back(
        {"w" + std::to_string(k + 1), coskit::CovariateKind::Continuous});

  return coskit::ClusteredDataset::from_columns(
      unit_ids, unit_cluster, y, x, unit_schema, cluster_ids, treatment, w,
      cluster_schema);
}

}  // namespace test_support

#endif  // COSKIT_TESTS_SUPPORT_HPP
