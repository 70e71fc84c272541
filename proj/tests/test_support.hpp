#ifndef IFACE_TESTS_TEST_SUPPORT_HPP_
#define IFACE_TESTS_TEST_SUPPORT_HPP_

#include <optional>
#include <random>
#include <vector>

#include "iface/model.hpp"
#include "iface/sensor_set.hpp"
#include "iface/uii.hpp"

namespace iface::testsupport {

// Random sparse integer instances used across the oracle-equivalence and
// property suites.
inline model::Instance random_instance(std::mt19937_64& rng, int max_n,
                                       int max_pool) {
  std::uniform_int_distribution<int> n_dist(2, max_n);
  std::uniform_int_distribution<int> entry(-2, 2);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const int n = n_dist(rng);
  const int m = std::uniform_int_distribution<int>(1, 2)(rng);
  const int pool_size = std::uniform_int_distribution<int>(2, max_pool)(rng);

  model::Instance inst;
  inst.system.a.setZero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (coin(rng) < 0.4) inst.system.a(i, j) = entry(rng);
  inst.system.b.setZero(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (coin(rng) < 0.6) inst.system.b(i, j) = entry(rng);

  std::vector<Eigen::RowVectorXd> rows;
  for (int s = 0; s < pool_size; ++s) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    while (row.isZero(0.0)) {
      for (int j = 0; j < n; ++j) row(j) = coin(rng) < 0.5 ? entry(rng) : 0;
    }
    rows.push_back(std::move(row));
  }
  inst.pool = model::SensorPool(std::move(rows));

  SensorSet task_ids = SensorSet::single(
      std::uniform_int_distribution<int>(0, pool_size - 1)(rng));
  if (coin(rng) < 0.5) {
    task_ids.set(std::uniform_int_distribution<int>(0, pool_size - 1)(rng));
  }
  inst.task = model::make_task(inst.pool, task_ids);
  inst.trust.k_trust = 1;
  return inst;
}

// Direct feasibility test of the selection problem's two constraints.
inline bool feasible(const uii::GammaOracle& oracle, const model::Task& task,
                     const SensorSet& s, int k) {
  return oracle.gamma(s) == oracle.gamma_union_task(s, task) &&
         oracle.gamma(s) >= k;
}

// Exhaustive minimum cardinality over the full power set; the reference the
// solvers are judged against. Returns the smallest feasible set under the
// (cardinality, mask) order.
inline std::optional<SensorSet> brute_force_optimum(
    const uii::GammaOracle& oracle, const model::Task& task, int k) {
  std::optional<SensorSet> best;
  const std::uint64_t limit = std::uint64_t{1}
                              << oracle.pool_size();
  for (std::uint64_t code = 0; code < limit; ++code) {
    const SensorSet s = SensorSet::from_decimal_code(code);
    if (!feasible(oracle, task, s, k)) continue;
    if (!best || s.cardinality() < best->cardinality() ||
        (s.cardinality() == best->cardinality() && s < *best)) {
      best = s;
    }
  }
  return best;
}

}  // namespace iface::testsupport

#endif  // IFACE_TESTS_TEST_SUPPORT_HPP_
