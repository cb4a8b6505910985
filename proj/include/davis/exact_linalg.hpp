#pragma once

// Exact dense linear algebra on Eigen matrices whose scalar is an exact ring
// (BigInt) or field (Golden, Rational). No pivoting by magnitude: the first
// nonzero pivot is taken, which is all exactness needs.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace davis {

template <typename Scalar>
using DynMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DynVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Fraction-free (Bareiss) determinant. Every division is exact in an
/// integral domain, so this is valid for big integers as well as for fields.
template <typename Derived>
typename Derived::Scalar bareiss_determinant(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  eigen_assert(input.rows() == input.cols());
  DynMatrix<Scalar> m = input;
  const Eigen::Index n = m.rows();
  if (n == 0) return Scalar(1);
  Scalar previous(1);
  bool negate = false;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k) == Scalar(0)) {
      Eigen::Index swap = k + 1;
      while (swap < n && m(swap, k) == Scalar(0)) ++swap;
      if (swap == n) return Scalar(0);
      m.row(k).swap(m.row(swap));
      negate = !negate;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / previous;
      }
      m(i, k) = Scalar(0);
    }
    previous = m(k, k);
  }
  Scalar det = m(n - 1, n - 1);
  return negate ? Scalar(-det) : det;
}

/// Reduced row echelon form over a field; returns the pivot column of each
/// pivot row.
template <typename Scalar>
std::vector<Eigen::Index> reduce_row_echelon(DynMatrix<Scalar>& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index p = row;
    while (p < m.rows() && m(p, col) == Scalar(0)) ++p;
    if (p == m.rows()) continue;
    if (p != row) m.row(p).swap(m.row(row));
    const Scalar inv = Scalar(1) / m(row, col);
    for (Eigen::Index j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == Scalar(0)) continue;
      const Scalar f = m(i, col);
      for (Eigen::Index j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <typename Derived>
int exact_rank(const Eigen::MatrixBase<Derived>& input) {
  DynMatrix<typename Derived::Scalar> m = input;
  return static_cast<int>(reduce_row_echelon(m).size());
}

/// Solution set of A z = b: empty, or particular + span(kernel columns).
template <typename Scalar>
struct AffineSolution {
  bool consistent = false;
  DynVector<Scalar> particular;
  DynMatrix<Scalar> kernel;  // one column per free direction
};

template <typename DerivedA, typename DerivedB>
AffineSolution<typename DerivedA::Scalar> solve_affine(const Eigen::MatrixBase<DerivedA>& a,
                                                       const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  DynMatrix<Scalar> m(rows, cols + 1);
  m.leftCols(cols) = a;
  m.col(cols) = b;
  const auto pivots = reduce_row_echelon(m);
  AffineSolution<Scalar> out;
  if (!pivots.empty() && pivots.back() == cols) return out;
  out.consistent = true;
  out.particular = DynVector<Scalar>::Zero(cols);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    is_pivot[static_cast<std::size_t>(pivots[r])] = true;
    out.particular(pivots[r]) = m(static_cast<Eigen::Index>(r), cols);
  }
  const Eigen::Index free_count = cols - static_cast<Eigen::Index>(pivots.size());
  out.kernel = DynMatrix<Scalar>::Zero(cols, free_count);
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    out.kernel(f, k) = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      out.kernel(pivots[r], k) = -m(static_cast<Eigen::Index>(r), f);
    }
    ++k;
  }
  return out;
}

/// Exact inverse over a field; nullopt when singular.
template <typename Derived>
std::optional<DynMatrix<typename Derived::Scalar>> exact_inverse(
    const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  DynMatrix<Scalar> m(n, 2 * n);
  m.leftCols(n) = input;
  m.rightCols(n) = DynMatrix<Scalar>::Identity(n, n);
  const auto pivots = reduce_row_echelon(m);
  if (static_cast<Eigen::Index>(pivots.size()) < n || pivots[static_cast<std::size_t>(n - 1)] != n - 1) {
    return std::nullopt;
  }
  return DynMatrix<Scalar>(m.rightCols(n));
}

}  // namespace davis
