#ifndef IFACE_UII_HPP_
#define IFACE_UII_HPP_

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <limits>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "iface/model.hpp"
#include "iface/sensor_set.hpp"
#include "iface/subspace.hpp"

namespace iface::uii {

/// Krylov rows of one sensor: s, sA, ..., sA^(gamma-1), where gamma is the
/// relative degree of the single-output system (s, A, B).
struct ObservabilityBlock {
  int sensor_id = 0;
  int gamma_degree = 0;
  Eigen::MatrixXd rows;  // gamma_degree x n, raw Krylov rows
};

/// Smallest k >= 1 with s A^(k-1) B != 0 under the relative tolerance;
/// n when no k <= n qualifies (saturated Krylov chain).
int relative_degree(const model::LtiSystem& sys, const model::Sensor& s,
                    subspace::RankTolerance tol = {});

ObservabilityBlock sensor_block(const model::LtiSystem& sys,
                                const model::Sensor& s,
                                subspace::RankTolerance tol = {});

/// Memoized evaluator of the information index Γ over subsets of the pool.
/// Concurrent queries are safe; cache updates are atomic per key.
class GammaOracle {
 public:
  static constexpr std::size_t kUnboundedCache =
      std::numeric_limits<std::size_t>::max();

  GammaOracle(const model::LtiSystem& sys, const model::SensorPool& pool,
              subspace::RankTolerance tol = {},
              std::size_t cache_cap = kUnboundedCache);

  /// Γ(set) = rank of the stacked blocks of the selected sensors; Γ(∅) = 0.
  int gamma(const SensorSet& set) const;

  /// Γ(set ∪ task sensors), through the same cache.
  int gamma_union_task(const SensorSet& set, const model::Task& task) const;

  int gamma_full() const { return gamma(pool_->all()); }

  int pool_size() const { return pool_->size(); }
  int state_dim() const { return sys_->n(); }
  const model::LtiSystem& system() const { return *sys_; }
  const model::SensorPool& pool() const { return *pool_; }
  subspace::RankTolerance tolerance() const { return tol_; }

  const ObservabilityBlock& block(int sensor_id) const;
  /// Unit-normalized copy of a block's rows (same row space, well scaled).
  const Eigen::MatrixXd& normalized_block(int sensor_id) const;

  /// Queries answered (including cache hits) and fresh rank computations.
  std::uint64_t query_count() const { return queries_.load(); }
  std::uint64_t compute_count() const { return computes_.load(); }
  std::size_t cache_size() const;

 private:
  const model::LtiSystem* sys_;
  const model::SensorPool* pool_;
  subspace::RankTolerance tol_;
  std::size_t cache_cap_;
  std::vector<ObservabilityBlock> blocks_;
  std::vector<Eigen::MatrixXd> normalized_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<SensorSet, int, SensorSetHash> cache_;
  mutable std::atomic<std::uint64_t> queries_{0};
  mutable std::atomic<std::uint64_t> computes_{0};
};

/// Similarity transform splitting the state into user-observable coordinates
/// and the complement delegated to the automation.
struct ObservableDecomposition {
  Eigen::MatrixXd t_s;             // Γ(S) x n, orthonormal rows
  Eigen::MatrixXd t_s_complement;  // (n - Γ(S)) x n, orthonormal rows
  Eigen::MatrixXd p_s;             // n x n, [t_s; t_s_complement]
};

ObservableDecomposition observable_decomposition(const GammaOracle& oracle,
                                                 const SensorSet& set);

}  // namespace iface::uii

#endif  // IFACE_UII_HPP_
