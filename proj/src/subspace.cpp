#include "iface/subspace.hpp"

#include <algorithm>
#include <string>

#include "iface/errors.hpp"

namespace iface::subspace {

namespace {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m,
                    const char* who) {
  if (!m.allFinite()) {
    throw InputError(std::string(who) + ": matrix has non-finite entries");
  }
}

void require_same_cols(Eigen::Index a, Eigen::Index b, const char* who) {
  if (a != b) {
    throw InputError(std::string(who) + ": column counts differ (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

int numeric_rank(const Eigen::Ref<const Eigen::MatrixXd>& m,
                 RankTolerance tol) {
  if (tol.relative_threshold <= 0.0 || tol.relative_threshold >= 1.0) {
    throw InputError("numeric_rank: relative_threshold must lie in (0, 1)");
  }
  if (m.rows() == 0 || m.cols() == 0) return 0;
  require_finite(m, "numeric_rank");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(tol.relative_threshold *
                  static_cast<double>(std::max(m.rows(), m.cols())));
  return static_cast<int>(qr.rank());
}

Eigen::MatrixXd stack(const std::vector<Eigen::MatrixXd>& blocks) {
  if (blocks.empty()) return Eigen::MatrixXd(0, 0);
  const Eigen::Index cols = blocks.front().cols();
  Eigen::Index rows = 0;
  for (const auto& b : blocks) {
    require_same_cols(b.cols(), cols, "stack");
    rows += b.rows();
  }
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

int stacked_row_space_dim(const std::vector<Eigen::MatrixXd>& blocks,
                          RankTolerance tol) {
  if (blocks.empty()) return 0;
  return numeric_rank(stack(blocks), tol);
}

int intersection_dim(const Eigen::Ref<const Eigen::MatrixXd>& m1,
                     const Eigen::Ref<const Eigen::MatrixXd>& m2,
                     RankTolerance tol) {
  require_same_cols(m1.cols(), m2.cols(), "intersection_dim");
  const int r1 = numeric_rank(m1, tol);
  const int r2 = numeric_rank(m2, tol);
  const int rs = stacked_row_space_dim({m1, m2}, tol);
  return std::max(0, r1 + r2 - rs);
}

bool row_space_contains(const Eigen::Ref<const Eigen::MatrixXd>& container,
                        const Eigen::Ref<const Eigen::MatrixXd>& candidate,
                        RankTolerance tol) {
  require_same_cols(container.cols(), candidate.cols(), "row_space_contains");
  const int rc = numeric_rank(container, tol);
  const int rs = stacked_row_space_dim({container, candidate}, tol);
  return rs == rc;
}

}  // namespace iface::subspace
