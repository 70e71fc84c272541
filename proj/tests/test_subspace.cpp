#include "iface/subspace.hpp"

#include <gtest/gtest.h>

#include <random>

#include "iface/errors.hpp"

namespace {

using iface::subspace::intersection_dim;
using iface::subspace::numeric_rank;
using iface::subspace::row_space_contains;
using iface::subspace::stack;
using iface::subspace::stacked_row_space_dim;

Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r.size()),
                    static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Exact rank over the rationals by fraction-free Gaussian elimination.
// Entries are small integers, so 64-bit numerators never overflow here.
int rational_rank(Eigen::MatrixXd m) {
  struct Frac {
    long long num = 0, den = 1;
    static long long gcd(long long a, long long b) {
      while (b != 0) {
        const long long t = a % b;
        a = b;
        b = t;
      }
      return a < 0 ? -a : a;
    }
    void reduce() {
      if (den < 0) {
        num = -num;
        den = -den;
      }
      const long long g = gcd(num == 0 ? 1 : num, den);
      num /= g;
      den /= g;
    }
    Frac operator-(const Frac& o) const {
      Frac r{num * o.den - o.num * den, den * o.den};
      r.reduce();
      return r;
    }
    Frac operator*(const Frac& o) const {
      Frac r{num * o.num, den * o.den};
      r.reduce();
      return r;
    }
    Frac operator/(const Frac& o) const {
      Frac r{num * o.den, den * o.num};
      r.reduce();
      return r;
    }
    bool zero() const { return num == 0; }
  };

  const int nr = static_cast<int>(m.rows());
  const int nc = static_cast<int>(m.cols());
  std::vector<std::vector<Frac>> a(static_cast<std::size_t>(nr),
                                   std::vector<Frac>(static_cast<std::size_t>(nc)));
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          Frac{static_cast<long long>(std::llround(m(i, j))), 1};

  int rank = 0;
  for (int col = 0; col < nc && rank < nr; ++col) {
    int pivot = -1;
    for (int r = rank; r < nr; ++r) {
      if (!a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]
               .zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[static_cast<std::size_t>(rank)],
              a[static_cast<std::size_t>(pivot)]);
    const Frac p =
        a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
    for (int r = rank + 1; r < nr; ++r) {
      const Frac f =
          a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / p;
      if (f.zero()) continue;
      for (int c = col; c < nc; ++c) {
        auto& cell = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        cell = cell -
               f * a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)];
      }
    }
    ++rank;
  }
  return rank;
}

TEST(NumericRank, IdentityIsFullRank) {
  EXPECT_EQ(numeric_rank(Eigen::MatrixXd::Identity(4, 4)), 4);
}

TEST(NumericRank, ZeroMatrixIsRankZero) {
  EXPECT_EQ(numeric_rank(Eigen::MatrixXd::Zero(3, 5)), 0);
}

TEST(NumericRank, DependentRows) {
  const auto m = rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}});
  EXPECT_EQ(numeric_rank(m), 2);
}

TEST(NumericRank, EmptyMatrixIsRankZero) {
  EXPECT_EQ(numeric_rank(Eigen::MatrixXd(0, 4)), 0);
  EXPECT_EQ(numeric_rank(Eigen::MatrixXd(0, 0)), 0);
}

TEST(NumericRank, RejectsNonFinite) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(numeric_rank(m), iface::InputError);
}

TEST(NumericRank, RejectsBadThreshold) {
  EXPECT_THROW(numeric_rank(Eigen::MatrixXd::Identity(2, 2), {0.0}),
               iface::InputError);
  EXPECT_THROW(numeric_rank(Eigen::MatrixXd::Identity(2, 2), {1.5}),
               iface::InputError);
}

TEST(NumericRank, MatchesTransposeRank) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd m(3 + trial % 4, 2 + trial % 5);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    EXPECT_EQ(numeric_rank(m), numeric_rank(m.transpose()));
  }
}

TEST(NumericRank, AgreesWithRationalElimination) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-2, 2);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::MatrixXd m(dim(rng), dim(rng));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    EXPECT_EQ(numeric_rank(m), rational_rank(m)) << m;
  }
}

TEST(StackedRowSpaceDim, EmptyListIsZero) {
  EXPECT_EQ(stacked_row_space_dim({}), 0);
}

TEST(StackedRowSpaceDim, MismatchedColumnsThrow) {
  EXPECT_THROW(
      stacked_row_space_dim({Eigen::MatrixXd::Zero(1, 3),
                             Eigen::MatrixXd::Zero(1, 4)}),
      iface::InputError);
}

TEST(StackedRowSpaceDim, PermutationInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> entry(-2, 2);
  std::vector<Eigen::MatrixXd> blocks;
  for (int b = 0; b < 4; ++b) {
    Eigen::MatrixXd m(1 + b % 2, 5);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    blocks.push_back(m);
  }
  const int base = stacked_row_space_dim(blocks);
  std::reverse(blocks.begin(), blocks.end());
  EXPECT_EQ(stacked_row_space_dim(blocks), base);
  std::swap(blocks[0], blocks[2]);
  EXPECT_EQ(stacked_row_space_dim(blocks), base);
}

TEST(IntersectionDim, SelfIntersection) {
  const auto id2 = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(intersection_dim(id2, id2), 2);
}

TEST(IntersectionDim, MismatchedColumnsThrow) {
  EXPECT_THROW(intersection_dim(Eigen::MatrixXd::Zero(1, 3),
                                Eigen::MatrixXd::Zero(1, 4)),
               iface::InputError);
}

TEST(IntersectionDim, BoundedByMinRank) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd m1(1 + trial % 3, 6);
    Eigen::MatrixXd m2(1 + (trial / 3) % 3, 6);
    for (auto* m : {&m1, &m2}) {
      for (Eigen::Index i = 0; i < m->rows(); ++i)
        for (Eigen::Index j = 0; j < m->cols(); ++j) (*m)(i, j) = entry(rng);
    }
    const int inter = intersection_dim(m1, m2);
    EXPECT_GE(inter, 0);
    EXPECT_LE(inter, std::min(numeric_rank(m1), numeric_rank(m2)));
  }
}

TEST(RowSpaceContains, ZeroRowAlwaysContained) {
  const auto m = rows({{1, 2, 3}});
  EXPECT_TRUE(row_space_contains(m, Eigen::MatrixXd::Zero(1, 3)));
}

TEST(RowSpaceContains, DetectsContainmentAndItsAbsence) {
  const auto container = rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}});
  EXPECT_TRUE(row_space_contains(container, rows({{0, 1, 0, 0}})));
  EXPECT_TRUE(row_space_contains(container, rows({{2, -1, 3, 0}})));
  EXPECT_FALSE(row_space_contains(container, rows({{0, 0, 0, 1}})));
  const auto heading = rows({{0, 0, 0, 1}});
  EXPECT_FALSE(row_space_contains(heading, rows({{0, 1, 0, 0}})));
}

TEST(Stack, ConcatenatesInOrder) {
  const auto m = stack({rows({{1, 2}}), rows({{3, 4}, {5, 6}})});
  ASSERT_EQ(m.rows(), 3);
  EXPECT_EQ(m(0, 0), 1);
  EXPECT_EQ(m(2, 1), 6);
}

}  // namespace
