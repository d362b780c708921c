#include "vass/lp.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vass {

namespace {

// Integer tableau: row i holds det * B^-1 [A | b] for the current basis B.
struct Tableau {
  std::vector<std::vector<Integer>> t;
  std::vector<std::size_t> basis;
  Integer det{1};
  std::size_t rhs = 0;  // column index of b

  void pivot(std::size_t r, std::size_t c) {
    const Integer p = t[r][c];
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i == r) continue;
      const Integer f = t[i][c];
      if (f.is_zero()) {
        // det' / det scaling keeps the common denominator consistent
        if (p != det)
          for (auto& e : t[i]) e = (e * p) / det;
        continue;
      }
      for (std::size_t j = 0; j <= rhs; ++j) t[i][j] = (p * t[i][j] - f * t[r][j]) / det;
    }
    det = p;
    basis[r] = c;
    if (det.is_negative()) {
      for (auto& row : t)
        for (auto& e : row) e = -e;
      det = -det;
    }
  }

  // Maximizes obj over the allowed columns.  False when unbounded.
  bool optimize(const std::vector<Integer>& obj, std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed && enter == allowed; ++j) {
        Integer rho = det * obj[j];
        for (std::size_t i = 0; i < t.size(); ++i)
          if (!obj[basis[i]].is_zero() && !t[i][j].is_zero()) rho -= obj[basis[i]] * t[i][j];
        if (rho.is_positive()) enter = j;
      }
      if (enter == allowed) return true;
      std::size_t leave = t.size();
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i][enter].is_positive()) continue;
        if (leave == t.size()) {
          leave = i;
          continue;
        }
        // t[i][rhs] / t[i][enter] vs t[leave][rhs] / t[leave][enter]
        const Integer lhs = t[i][rhs] * t[leave][enter];
        const Integer cur = t[leave][rhs] * t[i][enter];
        if (lhs < cur || (lhs == cur && basis[i] < basis[leave])) leave = i;
      }
      if (leave == t.size()) return false;
      pivot(leave, enter);
    }
  }

  [[nodiscard]] Rational value(const std::vector<Integer>& obj) const {
    Integer s(0);
    for (std::size_t i = 0; i < t.size(); ++i) s += obj[basis[i]] * t[i][rhs];
    return Rational(s, det);
  }
};

}  // namespace

LpResult lp_maximize(const IntMatrix& a, const IntVector& b, const IntVector& c) {
  if (a.rows() != b.size() || a.cols() != c.size()) throw std::invalid_argument("lp_maximize: shape mismatch");
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  Tableau tab;
  tab.rhs = n + m;
  tab.t.assign(m, std::vector<Integer>(n + m + 1, Integer(0)));
  tab.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b(static_cast<Eigen::Index>(i)).is_negative();
    for (std::size_t j = 0; j < n; ++j) {
      const Integer& v = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      tab.t[i][j] = flip ? -v : v;
    }
    tab.t[i][n + i] = Integer(1);
    tab.t[i][tab.rhs] = flip ? -b(static_cast<Eigen::Index>(i)) : b(static_cast<Eigen::Index>(i));
    tab.basis[i] = n + i;
  }

  // phase 1: drive the artificial columns to zero
  std::vector<Integer> phase1(n + m, Integer(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = Integer(-1);
  (void)tab.optimize(phase1, n + m);
  LpResult out;
  if (tab.value(phase1).sign() < 0) return out;

  // pivot artificials out of the basis; rows where that fails are redundant
  for (std::size_t i = 0; i < tab.t.size();) {
    if (tab.basis[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n && col == n; ++j)
      if (!tab.t[i][j].is_zero()) col = j;
    if (col == n) {
      tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    tab.pivot(i, col);
    ++i;
  }

  std::vector<Integer> obj(n + m, Integer(0));
  for (std::size_t j = 0; j < n; ++j) obj[j] = c(static_cast<Eigen::Index>(j));
  if (!tab.optimize(obj, n)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.value = tab.value(obj);
  out.x = RatVector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < tab.t.size(); ++i)
    out.x(static_cast<Eigen::Index>(tab.basis[i])) = Rational(tab.t[i][tab.rhs], tab.det);
  return out;
}

}  // namespace vass
