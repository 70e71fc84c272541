#ifndef IFACE_SUBSPACE_HPP_
#define IFACE_SUBSPACE_HPP_

#include <Eigen/Dense>
#include <vector>

namespace iface::subspace {

/// Relative rank threshold: a pivot counts while its magnitude exceeds
/// relative_threshold * max(rows, cols) * |largest pivot|.
struct RankTolerance {
  double relative_threshold = 1e-9;
};

/// Numerical rank via column-pivoted Householder QR.
/// Rank of an empty or all-zero matrix is 0.
int numeric_rank(const Eigen::Ref<const Eigen::MatrixXd>& m,
                 RankTolerance tol = {});

/// Vertically concatenates blocks (all sharing a column count).
Eigen::MatrixXd stack(const std::vector<Eigen::MatrixXd>& blocks);

/// Dimension of the sum of the blocks' row spaces: rank of their vertical
/// stack. An empty list has dimension 0.
int stacked_row_space_dim(const std::vector<Eigen::MatrixXd>& blocks,
                          RankTolerance tol = {});

/// Dimension of the intersection of two row spaces, through the modular
/// identity rank(m1) + rank(m2) - rank([m1; m2]). Never computes an explicit
/// intersection basis, so no second tolerance is involved.
int intersection_dim(const Eigen::Ref<const Eigen::MatrixXd>& m1,
                     const Eigen::Ref<const Eigen::MatrixXd>& m2,
                     RankTolerance tol = {});

/// True iff every row of candidate lies in the row space of container,
/// i.e. rank([container; candidate]) == rank(container).
bool row_space_contains(const Eigen::Ref<const Eigen::MatrixXd>& container,
                        const Eigen::Ref<const Eigen::MatrixXd>& candidate,
                        RankTolerance tol = {});

}  // namespace iface::subspace

#endif  // IFACE_SUBSPACE_HPP_
