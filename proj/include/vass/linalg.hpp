#pragma once

#include "vass/integer.hpp"

#include <algorithm>
#include <vector>

namespace vass {

// Exact linear algebra over the rationals.  Eigen's decompositions assume an
// inexact field, so elimination is done by hand.

template <typename Derived>
[[nodiscard]] RatMatrix to_rational(const Eigen::MatrixBase<Derived>& m) {
  RatMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<Eigen::Index> reduce_rows(RatMatrix& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index sel = -1;
    for (Eigen::Index i = row; i < m.rows(); ++i) {
      if (!m(i, col).is_zero()) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != row) m.row(sel).swap(m.row(row));
    Rational inv = Rational(1) / m(row, col);
    for (Eigen::Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Rational f = m(i, col);
      for (Eigen::Index j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <typename Derived>
[[nodiscard]] Eigen::Index rank(const Eigen::MatrixBase<Derived>& m) {
  RatMatrix r = to_rational(m);
  return static_cast<Eigen::Index>(reduce_rows(r).size());
}

// Scales a rational vector to the primitive integer vector on the same ray.
[[nodiscard]] inline IntVector primitive(const RatVector& v) {
  Integer l(1);
  for (Eigen::Index i = 0; i < v.size(); ++i) l = lcm(l, v(i).den());
  IntVector out(v.size());
  Integer g(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = v(i).num() * (l / v(i).den());
    g = gcd(g, out(i));
  }
  if (!g.is_zero() && g != Integer(1))
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) /= g;
  return out;
}

[[nodiscard]] inline IntVector primitive(const IntVector& v) { return primitive(to_rational(v).col(0).eval()); }

// Basis of the right kernel, one primitive integer vector per free column.
template <typename Derived>
[[nodiscard]] std::vector<IntVector> kernel_basis(const Eigen::MatrixBase<Derived>& m) {
  RatMatrix r = to_rational(m);
  std::vector<Eigen::Index> pivots = reduce_rows(r);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<IntVector> basis;
  for (Eigen::Index f = 0; f < m.cols(); ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    RatVector v = RatVector::Zero(m.cols());
    v(f) = Rational(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) v(pivots[k]) = -r(static_cast<Eigen::Index>(k), f);
    basis.push_back(primitive(v));
  }
  return basis;
}

// Stacks vectors as rows of a matrix.
[[nodiscard]] inline IntMatrix stack_rows(const std::vector<IntVector>& rows, Eigen::Index cols) {
  IntMatrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

[[nodiscard]] inline bool is_zero_vector(const IntVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!v(i).is_zero()) return false;
  return true;
}

// Greedy independent subset, preserving input order.
[[nodiscard]] inline std::vector<IntVector> span_basis(const std::vector<IntVector>& vectors, Eigen::Index dim) {
  std::vector<IntVector> basis;
  for (const auto& v : vectors) {
    if (is_zero_vector(v)) continue;
    std::vector<IntVector> trial = basis;
    trial.push_back(v);
    if (rank(stack_rows(trial, dim)) == static_cast<Eigen::Index>(trial.size())) basis = std::move(trial);
  }
  return basis;
}

[[nodiscard]] inline bool in_span(const std::vector<IntVector>& basis, const IntVector& v) {
  if (is_zero_vector(v)) return true;
  if (basis.empty()) return false;
  std::vector<IntVector> with = basis;
  with.push_back(v);
  return rank(stack_rows(with, v.size())) == rank(stack_rows(basis, v.size()));
}

[[nodiscard]] inline IntVector cross3(const IntVector& a, const IntVector& b) {
  IntVector c(3);
  c(0) = a(1) * b(2) - a(2) * b(1);
  c(1) = a(2) * b(0) - a(0) * b(2);
  c(2) = a(0) * b(1) - a(1) * b(0);
  return c;
}

template <typename Derived>
[[nodiscard]] Integer norm1(const Eigen::MatrixBase<Derived>& v) {
  Integer s(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) s += abs(v(i));
  return s;
}

template <typename Derived>
[[nodiscard]] Integer dot(const Eigen::MatrixBase<Derived>& a, const IntVector& b) {
  Integer s(0);
  for (Eigen::Index i = 0; i < b.size(); ++i) s += a(i) * b(i);
  return s;
}

[[nodiscard]] inline bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

[[nodiscard]] inline bool all_nonnegative(const IntVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i).is_negative()) return false;
  return true;
}

// Componentwise a <= b.
[[nodiscard]] inline bool leq(const IntVector& a, const IntVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (b(i) < a(i)) return false;
  return true;
}

[[nodiscard]] inline IntVector int_vector(std::initializer_list<long long> xs) {
  IntVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long long x : xs) v(i++) = Integer(x);
  return v;
}

}  // namespace vass
