#include "iface/uii.hpp"

#include <mutex>
#include <string>

#include "iface/errors.hpp"

namespace iface::uii {

int relative_degree(const model::LtiSystem& sys, const model::Sensor& s,
                    subspace::RankTolerance tol) {
  const int n = sys.n();
  const double b_scale = sys.b.size() > 0 ? sys.b.cwiseAbs().maxCoeff() : 0.0;
  // Rows are renormalized every power step so the zero test stays relative
  // even when A is badly scaled.
  Eigen::RowVectorXd row = s.row;
  const double nrm0 = row.norm();
  if (nrm0 == 0.0) return n;
  row /= nrm0;
  for (int k = 1; k <= n; ++k) {
    if (b_scale > 0.0) {
      const double v = (row * sys.b).cwiseAbs().maxCoeff();
      if (v > tol.relative_threshold * b_scale) return k;
    }
    row = row * sys.a;
    const double nrm = row.norm();
    if (nrm == 0.0) return n;
    row /= nrm;
  }
  return n;
}

ObservabilityBlock sensor_block(const model::LtiSystem& sys,
                                const model::Sensor& s,
                                subspace::RankTolerance tol) {
  ObservabilityBlock block;
  block.sensor_id = s.id;
  block.gamma_degree = relative_degree(sys, s, tol);
  block.rows.resize(block.gamma_degree, sys.n());
  block.rows.row(0) = s.row;
  for (int k = 1; k < block.gamma_degree; ++k) {
    block.rows.row(k) = block.rows.row(k - 1) * sys.a;
  }
  return block;
}

GammaOracle::GammaOracle(const model::LtiSystem& sys,
                         const model::SensorPool& pool,
                         subspace::RankTolerance tol, std::size_t cache_cap)
    : sys_(&sys), pool_(&pool), tol_(tol), cache_cap_(cache_cap) {
  blocks_.reserve(static_cast<std::size_t>(pool.size()));
  normalized_.reserve(static_cast<std::size_t>(pool.size()));
  for (const model::Sensor& s : pool.sensors()) {
    blocks_.push_back(sensor_block(sys, s, tol));
    Eigen::MatrixXd norm_rows = blocks_.back().rows;
    for (Eigen::Index r = 0; r < norm_rows.rows(); ++r) {
      const double nrm = norm_rows.row(r).norm();
      if (nrm > 0.0) norm_rows.row(r) /= nrm;
    }
    normalized_.push_back(std::move(norm_rows));
  }
}

const ObservabilityBlock& GammaOracle::block(int sensor_id) const {
  pool_->sensor(sensor_id);  // range check
  return blocks_[static_cast<std::size_t>(sensor_id)];
}

const Eigen::MatrixXd& GammaOracle::normalized_block(int sensor_id) const {
  pool_->sensor(sensor_id);
  return normalized_[static_cast<std::size_t>(sensor_id)];
}

int GammaOracle::gamma(const SensorSet& set) const {
  queries_.fetch_add(1, std::memory_order_relaxed);
  if (!set.subset_of(pool_->all())) {
    throw InputError("sensor set has ids outside the pool");
  }
  if (set.empty()) return 0;
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(set);
    if (it != cache_.end()) return it->second;
  }
  computes_.fetch_add(1, std::memory_order_relaxed);
  std::vector<Eigen::MatrixXd> parts;
  parts.reserve(static_cast<std::size_t>(set.cardinality()));
  for (int id : set.ids()) {
    parts.push_back(normalized_[static_cast<std::size_t>(id)]);
  }
  const int value = subspace::stacked_row_space_dim(parts, tol_);
  {
    std::unique_lock lock(mutex_);
    if (cache_.size() < cache_cap_) cache_.emplace(set, value);
  }
  return value;
}

int GammaOracle::gamma_union_task(const SensorSet& set,
                                  const model::Task& task) const {
  return gamma(set | task.s_task);
}

std::size_t GammaOracle::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

ObservableDecomposition observable_decomposition(const GammaOracle& oracle,
                                                 const SensorSet& set) {
  if (set.empty()) {
    throw InputError("observable_decomposition requires a nonempty set");
  }
  std::vector<Eigen::MatrixXd> parts;
  for (int id : set.ids()) parts.push_back(oracle.normalized_block(id));
  const Eigen::MatrixXd stacked = subspace::stack(parts);
  const int n = oracle.state_dim();

  // Column-pivoted QR of the transpose: the leading rank columns of Q span
  // the row space, the trailing ones its orthogonal complement.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked.transpose());
  qr.setThreshold(oracle.tolerance().relative_threshold *
                  static_cast<double>(std::max(stacked.rows(), stacked.cols())));
  const int rank = static_cast<int>(qr.rank());
  const Eigen::MatrixXd q = qr.householderQ();

  ObservableDecomposition dec;
  dec.t_s = q.leftCols(rank).transpose();
  dec.t_s_complement = q.rightCols(n - rank).transpose();
  dec.p_s.resize(n, n);
  dec.p_s.topRows(rank) = dec.t_s;
  dec.p_s.bottomRows(n - rank) = dec.t_s_complement;
  return dec;
}

}  // namespace iface::uii
