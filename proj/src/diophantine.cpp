#include "vass/diophantine.hpp"

#include "vass/lp.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace vass {

DiophantineSystem::DiophantineSystem(const IntMatrix& a, const IntVector& r) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) add_variable();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    std::vector<Term> terms;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero()) terms.emplace_back(static_cast<std::size_t>(j), a(i, j));
    add_row(std::move(terms), r(i));
  }
}

std::size_t DiophantineSystem::add_variable(std::string name) {
  if (name.empty()) name = "v" + std::to_string(names_.size());
  names_.push_back(std::move(name));
  return names_.size() - 1;
}

void DiophantineSystem::add_row(std::vector<Term> terms, Integer rhs) {
  std::map<std::size_t, Integer> merged;
  for (auto& [v, c] : terms) {
    if (v >= num_vars()) throw std::out_of_range("row refers to an unknown variable");
    merged[v] += c;
  }
  Row row;
  for (auto& [v, c] : merged)
    if (!c.is_zero()) row.terms.emplace_back(v, c);
  row.rhs = std::move(rhs);
  rows_.push_back(std::move(row));
}

void DiophantineSystem::fix(std::size_t var, Integer value) {
  if (var >= num_vars()) throw std::out_of_range("fixing an unknown variable");
  if (value.is_negative()) throw std::invalid_argument("fixed value must be a natural number");
  auto it = fixed_.find(var);
  if (it != fixed_.end() && it->second != value) {
    // Contradictory pins are representable as an unsatisfiable row.
    add_row({{var, Integer(0)}}, Integer(1));
    return;
  }
  fixed_[var] = std::move(value);
}

IntMatrix DiophantineSystem::matrix() const {
  IntMatrix a = IntMatrix::Zero(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(num_vars()));
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [v, c] : rows_[i].terms) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(v)) = c;
  return a;
}

IntVector DiophantineSystem::rhs() const {
  IntVector r(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) r(static_cast<Eigen::Index>(i)) = rows_[i].rhs;
  return r;
}

IntMatrix DiophantineSystem::matrix_with_fixed() const {
  IntMatrix a = matrix();
  IntMatrix out = IntMatrix::Zero(a.rows() + static_cast<Eigen::Index>(fixed_.size()), a.cols());
  out.topRows(a.rows()) = a;
  Eigen::Index i = a.rows();
  for (const auto& [v, value] : fixed_) out(i++, static_cast<Eigen::Index>(v)) = Integer(1);
  return out;
}

bool DiophantineSystem::is_homogeneous() const {
  for (const auto& row : rows_)
    if (!row.rhs.is_zero()) return false;
  for (const auto& [v, value] : fixed_)
    if (!value.is_zero()) return false;
  return true;
}

DiophantineSystem DiophantineSystem::homogeneous() const {
  DiophantineSystem h = *this;
  for (auto& row : h.rows_) row.rhs = Integer(0);
  for (auto& [v, value] : h.fixed_) value = Integer(0);
  return h;
}

bool DiophantineSystem::satisfied_by(const IntVector& x) const {
  if (static_cast<std::size_t>(x.size()) != num_vars()) return false;
  if (!all_nonnegative(x)) return false;
  for (const auto& row : rows_) {
    Integer s(0);
    for (const auto& [v, c] : row.terms) s += c * x(static_cast<Eigen::Index>(v));
    if (s != row.rhs) return false;
  }
  for (const auto& [v, value] : fixed_)
    if (x(static_cast<Eigen::Index>(v)) != value) return false;
  return true;
}

std::string DiophantineSystem::signature() const {
  std::ostringstream os;
  os << num_vars() << '|';
  for (const auto& row : rows_) {
    for (const auto& [v, c] : row.terms) os << v << ':' << c << ',';
    os << '=' << row.rhs << ';';
  }
  os << '|';
  for (const auto& [v, value] : fixed_) os << v << '=' << value << ',';
  return os.str();
}

std::vector<std::size_t> SolutionSet::unbounded_vars() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < bounded.size(); ++v)
    if (!bounded[v]) out.push_back(v);
  return out;
}

Integer pottier_bound(const IntMatrix& a) {
  Integer norm(0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) norm += abs(a(i, j));
  return pow(Integer(1) + Integer(a.cols()) * norm, static_cast<unsigned>(rank(a)));
}

Integer affine_bound(const IntMatrix& a, const IntVector& r) {
  Integer norm(0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) norm += abs(a(i, j));
  return pow(Integer(1) + Integer(a.cols()) * norm + norm1(r), static_cast<unsigned>(rank(a) + 1));
}

namespace {

using SparseRow = std::map<std::size_t, Integer>;

// value = constant * x' + sum coefs[w] * w over surviving variables
struct Expr {
  Integer constant;
  SparseRow coefs;
};

struct LinearRow {
  SparseRow coefs;
  Integer rhs;
};

// Unit-pivot elimination.  Eliminated variables keep an expression over the
// surviving ones; their nonnegativity becomes an inequality.
struct Presolved {
  bool affine_infeasible = false;
  std::size_t num_orig = 0;
  std::vector<std::optional<Expr>> elim;
  std::vector<std::size_t> free_vars;
  std::vector<std::size_t> free_index;  // orig var -> column, kNone when eliminated
  std::vector<LinearRow> equalities;    // sum a w = rhs x'
  std::vector<LinearRow> inequalities;  // sum a w + rhs x' >= 0
};

constexpr std::size_t kNoCol = static_cast<std::size_t>(-1);

bool normalize_row(LinearRow& row, bool& infeasible) {
  for (auto it = row.coefs.begin(); it != row.coefs.end();) {
    if (it->second.is_zero()) {
      it = row.coefs.erase(it);
    } else {
      ++it;
    }
  }
  if (row.coefs.empty()) {
    if (!row.rhs.is_zero()) infeasible = true;
    return false;  // row is gone
  }
  Integer g(0);
  for (const auto& [v, c] : row.coefs) g = gcd(g, c);
  if (g != Integer(1)) {
    if (!(row.rhs % g).is_zero()) {
      infeasible = true;
      return false;
    }
    for (auto& [v, c] : row.coefs) c /= g;
    row.rhs /= g;
  }
  return true;
}

Presolved presolve(const DiophantineSystem& sys) {
  Presolved p;
  p.num_orig = sys.num_vars();
  p.elim.resize(p.num_orig);
  std::vector<LinearRow> rows;
  for (const auto& r : sys.rows()) {
    LinearRow lr;
    for (const auto& [v, c] : r.terms) lr.coefs[v] += c;
    lr.rhs = r.rhs;
    rows.push_back(std::move(lr));
  }
  for (const auto& [v, value] : sys.fixed()) rows.push_back(LinearRow{SparseRow{{v, Integer(1)}}, value});
  std::vector<bool> alive(rows.size(), true);

  auto eliminate = [&](std::size_t row_index, std::size_t var) {
    LinearRow pivot = rows[row_index];
    alive[row_index] = false;
    const Integer cv = pivot.coefs.at(var);
    // var = (rhs - sum_{l != var} c_l x_l) / cv, exact because cv divides every term here.
    Expr e;
    e.constant = pivot.rhs / cv;
    for (const auto& [l, c] : pivot.coefs)
      if (l != var) e.coefs[l] = -(c / cv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!alive[i]) continue;
      auto it = rows[i].coefs.find(var);
      if (it == rows[i].coefs.end()) continue;
      Integer a = it->second;
      rows[i].coefs.erase(it);
      rows[i].rhs -= a * e.constant;
      for (const auto& [l, c] : e.coefs) rows[i].coefs[l] += a * c;
    }
    for (auto& other : p.elim) {
      if (!other) continue;
      auto it = other->coefs.find(var);
      if (it == other->coefs.end()) continue;
      Integer b = it->second;
      other->coefs.erase(it);
      other->constant += b * e.constant;
      for (const auto& [l, c] : e.coefs) {
        Integer& slot = other->coefs[l];
        slot += b * c;
        if (slot.is_zero()) other->coefs.erase(l);
      }
    }
    for (auto it = e.coefs.begin(); it != e.coefs.end();) {
      if (it->second.is_zero()) {
        it = e.coefs.erase(it);
      } else {
        ++it;
      }
    }
    p.elim[var] = std::move(e);
  };

  for (;;) {
    std::vector<std::size_t> occurrences(p.num_orig, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!alive[i]) continue;
      if (!normalize_row(rows[i], p.affine_infeasible)) alive[i] = false;
      if (p.affine_infeasible) return p;
      if (alive[i])
        for (const auto& [v, c] : rows[i].coefs) occurrences[v] += 1;
    }
    std::size_t best_row = kNoCol;
    std::size_t best_var = kNoCol;
    std::size_t best_size = kNoCol;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!alive[i]) continue;
      const auto& coefs = rows[i].coefs;
      if (coefs.size() == 1) {
        const auto& [v, c] = *coefs.begin();
        // normalized: c == +-1
        if ((rows[i].rhs / c).is_negative()) {
          p.affine_infeasible = true;
          return p;
        }
        best_row = i;
        best_var = v;
        best_size = 1;
        break;
      }
      if (coefs.size() >= best_size) continue;
      std::size_t var = kNoCol;
      for (const auto& [v, c] : coefs) {
        if (abs(c) != Integer(1)) continue;
        if (var == kNoCol || occurrences[v] < occurrences[var] ||
            (occurrences[v] == occurrences[var] && v > var)) {
          var = v;
        }
      }
      if (var == kNoCol) continue;
      best_row = i;
      best_var = var;
      best_size = coefs.size();
    }
    if (best_row == kNoCol) break;
    eliminate(best_row, best_var);
  }

  p.free_index.assign(p.num_orig, kNoCol);
  for (std::size_t v = 0; v < p.num_orig; ++v) {
    if (p.elim[v]) continue;
    p.free_index[v] = p.free_vars.size();
    p.free_vars.push_back(v);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!alive[i]) continue;
    LinearRow r;
    for (const auto& [v, c] : rows[i].coefs) r.coefs[p.free_index[v]] = c;
    r.rhs = rows[i].rhs;
    p.equalities.push_back(std::move(r));
  }

  std::map<SparseRow, Integer> tightest;  // linear part -> smallest constant
  for (std::size_t v = 0; v < p.num_orig; ++v) {
    if (!p.elim[v]) continue;
    const Expr& e = *p.elim[v];
    if (e.coefs.empty()) {
      if (e.constant.is_negative()) {
        p.affine_infeasible = true;
        return p;
      }
      continue;
    }
    bool all_pos = true;
    bool all_neg = true;
    Integer g(0);
    for (const auto& [w, c] : e.coefs) {
      if (c.is_negative()) all_pos = false;
      if (c.is_positive()) all_neg = false;
      g = gcd(g, c);
    }
    if (all_pos && !e.constant.is_negative()) continue;
    if (all_neg && e.constant.is_negative()) {
      p.affine_infeasible = true;
      return p;
    }
    SparseRow lin;
    for (const auto& [w, c] : e.coefs) lin[p.free_index[w]] = c / g;
    Integer constant = floor_div(e.constant, g);
    auto it = tightest.find(lin);
    if (it == tightest.end()) {
      tightest.emplace(std::move(lin), constant);
    } else if (constant < it->second) {
      it->second = constant;
    }
  }
  for (auto& [lin, constant] : tightest) p.inequalities.push_back(LinearRow{lin, constant});
  return p;
}

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
    return h;
  }
};

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceLimit("64-bit overflow in the completion procedure");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceLimit("64-bit overflow in the completion procedure");
  return r;
}

// Contejean-Devie completion: all minimal nonzero z >= 0 with M z = 0 and
// z <= ub (where given).  Starts from unit vectors and only increments along
// directions that point back toward the kernel (<Mz, M e_j> < 0).
std::vector<std::vector<std::int64_t>> complete(const std::vector<std::vector<std::int64_t>>& m, std::size_t cols,
                                                const std::vector<std::int64_t>& ub, const SolveLimits& limits,
                                                const std::function<bool(const std::vector<std::int64_t>&)>& stop) {
  std::vector<std::vector<std::int64_t>> gram(cols, std::vector<std::int64_t>(cols, 0));
  for (const auto& row : m)
    for (std::size_t i = 0; i < cols; ++i) {
      if (row[i] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (row[j] != 0) gram[i][j] = checked_add(gram[i][j], checked_mul(row[i], row[j]));
    }

  struct Candidate {
    std::vector<std::int64_t> x;
    std::vector<std::int64_t> s;  // gram * x
    std::int64_t norm2;           // |M x|^2
  };
  std::vector<std::vector<std::int64_t>> basis;
  std::vector<Candidate> frontier;
  for (std::size_t j = 0; j < cols; ++j) {
    if (ub[j] == 0) continue;
    Candidate c{std::vector<std::int64_t>(cols, 0), std::vector<std::int64_t>(cols, 0), gram[j][j]};
    c.x[j] = 1;
    for (std::size_t i = 0; i < cols; ++i) c.s[i] = gram[i][j];
    frontier.push_back(std::move(c));
  }
  auto dominated = [&](const std::vector<std::int64_t>& x) {
    for (const auto& b : basis) {
      bool ge = true;
      for (std::size_t i = 0; i < cols && ge; ++i) ge = x[i] >= b[i];
      if (ge) return true;
    }
    return false;
  };
  std::size_t generated = frontier.size();
  while (!frontier.empty()) {
    std::vector<Candidate> open;
    for (auto& c : frontier) {
      if (c.norm2 == 0) {
        if (dominated(c.x)) continue;
        basis.push_back(c.x);
        if (stop && stop(c.x)) return basis;
      } else {
        open.push_back(std::move(c));
      }
    }
    std::vector<Candidate> next;
    std::unordered_set<std::vector<std::int64_t>, VecHash> seen;
    for (const auto& c : open) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (c.s[j] >= 0) continue;
        if (ub[j] >= 0 && c.x[j] >= ub[j]) continue;
        std::vector<std::int64_t> x = c.x;
        x[j] += 1;
        if (seen.count(x) != 0 || dominated(x)) continue;
        Candidate n{x, c.s, 0};
        for (std::size_t i = 0; i < cols; ++i) n.s[i] = checked_add(n.s[i], gram[i][j]);
        n.norm2 = checked_add(checked_add(c.norm2, checked_mul(2, c.s[j])), gram[j][j]);
        seen.insert(std::move(x));
        next.push_back(std::move(n));
        if (next.size() > limits.max_frontier) {
          throw ResourceLimit("completion frontier exceeded " + std::to_string(limits.max_frontier) + " candidates");
        }
      }
    }
    generated += next.size();
    if (generated > limits.max_candidates) {
      throw ResourceLimit("completion generated more than " + std::to_string(limits.max_candidates) + " candidates");
    }
    frontier = std::move(next);
  }
  return basis;
}

std::int64_t to_i64(const Integer& x) {
  if (!x.fits_int64()) throw ResourceLimit("coefficient too large for the completion procedure");
  return x.to_int64();
}

struct Reduced {
  std::vector<std::vector<std::int64_t>> rows;
  std::size_t cols = 0;
  std::size_t num_free = 0;
  std::size_t num_slack = 0;
  bool has_xprime = false;
};

Reduced build_reduced(const Presolved& p, bool affine) {
  Reduced r;
  r.num_free = p.free_vars.size();
  r.num_slack = p.inequalities.size();
  r.has_xprime = affine;
  r.cols = r.num_free + r.num_slack + (affine ? 1 : 0);
  for (const auto& e : p.equalities) {
    std::vector<std::int64_t> row(r.cols, 0);
    for (const auto& [w, c] : e.coefs) row[w] = to_i64(c);
    if (affine) row[r.cols - 1] = to_i64(-e.rhs);
    r.rows.push_back(std::move(row));
  }
  for (std::size_t k = 0; k < p.inequalities.size(); ++k) {
    const auto& ineq = p.inequalities[k];
    std::vector<std::int64_t> row(r.cols, 0);
    for (const auto& [w, c] : ineq.coefs) row[w] = to_i64(c);
    row[r.num_free + k] = -1;
    if (affine) row[r.cols - 1] = to_i64(ineq.rhs);
    r.rows.push_back(std::move(row));
  }
  return r;
}

IntVector decode(const Presolved& p, const std::vector<std::int64_t>& z, std::int64_t xprime) {
  IntVector full(static_cast<Eigen::Index>(p.num_orig));
  for (std::size_t v = 0; v < p.num_orig; ++v) {
    if (p.free_index[v] != kNoCol) {
      full(static_cast<Eigen::Index>(v)) = Integer(z[p.free_index[v]]);
      continue;
    }
    const Expr& e = *p.elim[v];
    Integer value = e.constant * Integer(xprime);
    for (const auto& [w, c] : e.coefs) value += c * Integer(z[p.free_index[w]]);
    full(static_cast<Eigen::Index>(v)) = value;
  }
  return full;
}

// When the surviving equalities have full column rank the system has at most
// one solution; compute it exactly instead of running the completion.
// Outer nullopt: not determined.  Inner nullopt: infeasible.
std::optional<std::optional<IntVector>> unique_point(const Presolved& p) {
  const auto nf = static_cast<Eigen::Index>(p.free_vars.size());
  std::vector<Integer> w(p.free_vars.size(), Integer(0));
  if (nf > 0) {
    if (p.equalities.size() < p.free_vars.size()) return std::nullopt;
    RatMatrix m = RatMatrix::Zero(static_cast<Eigen::Index>(p.equalities.size()), nf + 1);
    for (std::size_t i = 0; i < p.equalities.size(); ++i) {
      for (const auto& [col, c] : p.equalities[i].coefs) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) = Rational(c);
      m(static_cast<Eigen::Index>(i), nf) = Rational(p.equalities[i].rhs);
    }
    auto pivots = reduce_rows(m);
    if (!pivots.empty() && pivots.back() == nf) return std::optional<IntVector>{};
    if (static_cast<Eigen::Index>(pivots.size()) < nf) return std::nullopt;
    for (Eigen::Index j = 0; j < nf; ++j) {
      const Rational& v = m(j, nf);
      if (!v.is_integer() || v.sign() < 0) return std::optional<IntVector>{};
      w[static_cast<std::size_t>(j)] = v.num();
    }
  }
  IntVector full(static_cast<Eigen::Index>(p.num_orig));
  for (std::size_t v = 0; v < p.num_orig; ++v) {
    Integer value;
    if (p.free_index[v] != kNoCol) {
      value = w[p.free_index[v]];
    } else {
      const Expr& e = *p.elim[v];
      value = e.constant;
      for (const auto& [u, c] : e.coefs) value += c * w[p.free_index[u]];
    }
    if (value.is_negative()) return std::optional<IntVector>{};
    full(static_cast<Eigen::Index>(v)) = std::move(value);
  }
  return std::optional<IntVector>{std::move(full)};
}

// Some x in Z^k with a x = r, by unimodular column operations.
std::optional<IntVector> integer_solve(IntMatrix l, const IntVector& r) {
  const Eigen::Index m = l.rows();
  const Eigen::Index k = l.cols();
  IntMatrix u = IntMatrix::Identity(k, k);
  IntVector y = IntVector::Zero(k);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (;;) {
      Eigen::Index best = -1;
      for (Eigen::Index j = p; j < k; ++j)
        if (!l(i, j).is_zero() && (best < 0 || abs(l(i, j)) < abs(l(i, best)))) best = j;
      if (best < 0) break;
      if (best != p) {
        l.col(best).swap(l.col(p));
        u.col(best).swap(u.col(p));
      }
      bool clean = true;
      for (Eigen::Index j = p + 1; j < k; ++j) {
        if (l(i, j).is_zero()) continue;
        const Integer q = l(i, j) / l(i, p);
        l.col(j) -= l.col(p) * q;
        u.col(j) -= u.col(p) * q;
        clean = clean && l(i, j).is_zero();
      }
      if (clean) break;
    }
    Integer rest = r(i);
    for (Eigen::Index j = 0; j < p; ++j) rest -= l(i, j) * y(j);
    if (p == k || l(i, p).is_zero()) {
      if (!rest.is_zero()) return std::nullopt;
      continue;
    }
    if (!(rest % l(i, p)).is_zero()) return std::nullopt;
    y(p) = rest / l(i, p);
    ++p;
  }
  return IntVector(u * y);
}

void sort_lex(std::vector<IntVector>& vs) { std::sort(vs.begin(), vs.end(), lex_less); }

void require(bool ok, const std::string& what) {
  if (!ok) throw InternalInconsistency(what);
}

}  // namespace

HilbertBasis hilbert_basis(const DiophantineSystem& sys, const SolveLimits& limits) {
  if (!sys.is_homogeneous()) throw std::invalid_argument("hilbert_basis needs a homogeneous system");
  Presolved p = presolve(sys);
  require(!p.affine_infeasible, "homogeneous system reported infeasible");
  Reduced r = build_reduced(p, false);
  std::vector<std::int64_t> ub(r.cols, -1);
  HilbertBasis out;
  for (const auto& z : complete(r.rows, r.cols, ub, limits, nullptr)) out.elements.push_back(decode(p, z, 0));
  sort_lex(out.elements);
  for (const auto& m : out.elements) require(sys.satisfied_by(m), "basis element does not solve the system");
  if (limits.check_bounds && !out.elements.empty()) {
    Integer bound = pottier_bound(sys.matrix_with_fixed());
    for (const auto& m : out.elements) require(norm1(m) <= bound, "basis element exceeds the Pottier bound");
  }
  return out;
}

SolutionSet solve_all(const DiophantineSystem& sys, const SolveLimits& limits) {
  SolutionSet out;
  Presolved p = presolve(sys);
  if (p.affine_infeasible) return out;
  if (auto point = unique_point(p)) {
    if (*point) {
      require(sys.satisfied_by(**point), "unique solution does not solve the system");
      out.satisfiable = true;
      out.minimal.particular.push_back(**point);
      out.h0 = IntVector::Zero(static_cast<Eigen::Index>(sys.num_vars()));
      out.bounded.assign(sys.num_vars(), true);
    }
    return out;
  }
  Reduced r = build_reduced(p, true);
  std::vector<std::int64_t> ub(r.cols, -1);
  ub[r.cols - 1] = 1;
  for (const auto& z : complete(r.rows, r.cols, ub, limits, nullptr)) {
    std::int64_t xp = z[r.cols - 1];
    IntVector full = decode(p, z, xp);
    (xp == 1 ? out.minimal.particular : out.minimal.homogeneous).push_back(std::move(full));
  }
  sort_lex(out.minimal.particular);
  sort_lex(out.minimal.homogeneous);
  out.satisfiable = !out.minimal.particular.empty();
  DiophantineSystem hom = sys.homogeneous();
  for (const auto& m : out.minimal.particular) require(sys.satisfied_by(m), "minimal solution does not solve the system");
  for (const auto& m : out.minimal.homogeneous) require(hom.satisfied_by(m), "homogeneous element does not solve E0");
  out.h0 = IntVector::Zero(static_cast<Eigen::Index>(sys.num_vars()));
  for (const auto& m : out.minimal.homogeneous) out.h0 += m;
  out.bounded.resize(sys.num_vars());
  for (std::size_t v = 0; v < sys.num_vars(); ++v) out.bounded[v] = out.h0(static_cast<Eigen::Index>(v)).is_zero();
  return out;
}

MinimalSolutions minimal_solutions(const IntMatrix& a, const IntVector& r, const SolveLimits& limits) {
  DiophantineSystem sys(a, r);
  SolutionSet s = solve_all(sys, limits);
  if (limits.check_bounds) {
    // Pottier's bound applied to the homogenized matrix [A | -r].
    IntMatrix ext(a.rows(), a.cols() + 1);
    ext.leftCols(a.cols()) = a;
    ext.col(a.cols()) = -r;
    Integer bound = pottier_bound(ext);
    for (const auto& m : s.minimal.particular) require(norm1(m) + Integer(1) <= bound, "minimal solution exceeds bound");
    for (const auto& m : s.minimal.homogeneous) require(norm1(m) <= bound, "homogeneous solution exceeds bound");
  }
  return s.minimal;
}

AffineResult solve_affine(const DiophantineSystem& sys, const SolveLimits& limits) {
  SolutionSet s = solve_all(sys, limits);
  AffineResult out;
  out.satisfiable = s.satisfiable;
  if (!s.satisfiable) return out;
  out.solution = s.minimal.particular.front();
  out.bounded = s.bounded;
  return out;
}

std::vector<std::size_t> BoundedProjection::unbounded_vars() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < bounded.size(); ++v)
    if (!bounded[v]) out.push_back(v);
  return out;
}

BoundedProjection project_bounded(const DiophantineSystem& sys, const SolveLimits& limits, std::size_t max_tuples) {
  BoundedProjection out;
  const std::size_t n = sys.num_vars();
  const IntMatrix a = sys.matrix();
  const IntVector r = sys.rhs();
  const auto& fixed = sys.fixed();
  out.bounded.assign(n, true);
  out.h0 = IntVector::Zero(static_cast<Eigen::Index>(n));

  std::vector<std::size_t> open;  // not pinned
  for (std::size_t v = 0; v < n; ++v)
    if (!fixed.count(v)) open.push_back(v);

  // recession cone support, one LP per uncovered variable
  for (std::size_t k = 0; k < open.size(); ++k) {
    if (!out.bounded[open[k]]) continue;
    const auto cols = static_cast<Eigen::Index>(open.size());
    IntMatrix lp = IntMatrix::Zero(a.rows() + 1, cols + 1);
    for (Eigen::Index j = 0; j < cols; ++j) lp.block(0, j, a.rows(), 1) = a.col(static_cast<Eigen::Index>(open[j]));
    lp(a.rows(), static_cast<Eigen::Index>(k)) = Integer(1);
    lp(a.rows(), cols) = Integer(1);
    IntVector b = IntVector::Zero(a.rows() + 1);
    b(a.rows()) = Integer(1);
    IntVector c = IntVector::Zero(cols + 1);
    c(static_cast<Eigen::Index>(k)) = Integer(1);
    LpResult res = lp_maximize(lp, b, c);
    require(res.status == LpStatus::Optimal, "recession LP is not optimal");
    if (res.value.is_zero()) continue;
    IntVector ray = primitive(RatVector(res.x.head(cols)));
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (ray(j).is_zero()) continue;
      out.bounded[open[j]] = false;
      out.h0(static_cast<Eigen::Index>(open[j])) += ray(j);
    }
  }

  std::vector<std::size_t> unbounded, branch;
  for (std::size_t v : open) (out.bounded[v] ? branch : unbounded).push_back(v);
  IntVector x = IntVector::Zero(static_cast<Eigen::Index>(n));
  for (const auto& [v, value] : fixed) x(static_cast<Eigen::Index>(v)) = value;

  // LP over the variables from branch[k] on, with the earlier ones set in x.
  auto range = [&](std::size_t k) -> std::optional<std::pair<Integer, Integer>> {
    std::vector<std::size_t> cols(unbounded);
    cols.insert(cols.end(), branch.begin() + static_cast<std::ptrdiff_t>(k), branch.end());
    IntMatrix lp(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      lp.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(cols[j]));
    IntVector b = r;
    for (std::size_t v = 0; v < n; ++v)
      if (fixed.count(v) || (out.bounded[v] && std::find(cols.begin(), cols.end(), v) == cols.end()))
        b -= a.col(static_cast<Eigen::Index>(v)) * x(static_cast<Eigen::Index>(v));
    IntVector c = IntVector::Zero(static_cast<Eigen::Index>(cols.size()));
    const auto target = static_cast<Eigen::Index>(unbounded.size());
    c(target) = Integer(1);
    LpResult hi = lp_maximize(lp, b, c);
    if (hi.status == LpStatus::Infeasible) return std::nullopt;
    require(hi.status == LpStatus::Optimal, "bounded variable is unbounded over the rationals");
    c(target) = Integer(-1);
    LpResult lo = lp_maximize(lp, b, c);
    require(lo.status == LpStatus::Optimal, "bounded variable has no rational minimum");
    const Rational low = -lo.value;
    return std::make_pair(ceil_div(low.num(), low.den()), floor_div(hi.value.num(), hi.value.den()));
  };

  // every coordinate of a lattice point becomes nonnegative after enough h0
  auto leaf = [&]() -> std::optional<IntVector> {
    IntMatrix lat(a.rows(), static_cast<Eigen::Index>(unbounded.size()));
    for (std::size_t j = 0; j < unbounded.size(); ++j)
      lat.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(unbounded[j]));
    IntVector b = r;
    for (std::size_t v = 0; v < n; ++v)
      if (out.bounded[v]) b -= a.col(static_cast<Eigen::Index>(v)) * x(static_cast<Eigen::Index>(v));
    auto z = integer_solve(lat, b);
    if (!z) return std::nullopt;
    IntVector sol = x;
    std::optional<Integer> shift;
    for (std::size_t j = 0; j < unbounded.size(); ++j) {
      const Integer& h = out.h0(static_cast<Eigen::Index>(unbounded[j]));
      Integer need = ceil_div(-(*z)(static_cast<Eigen::Index>(j)), h);
      if (!shift || *shift < need) shift = need;
    }
    for (std::size_t j = 0; j < unbounded.size(); ++j) {
      const auto v = static_cast<Eigen::Index>(unbounded[j]);
      sol(v) = (*z)(static_cast<Eigen::Index>(j)) + *shift * out.h0(v);
    }
    require(sys.satisfied_by(sol), "projected solution does not solve the system");
    return sol;
  };

  std::size_t nodes = 0;
  auto dfs = [&](auto&& self, std::size_t k) -> bool {
    if (++nodes > limits.max_frontier)
      throw ResourceLimit("bounded enumeration exceeded " + std::to_string(limits.max_frontier) + " nodes");
    if (k == branch.size()) {
      if (auto sol = leaf()) out.representatives.push_back(std::move(*sol));
      return out.representatives.size() < max_tuples;
    }
    auto span = range(k);
    if (!span) return true;
    const auto v = static_cast<Eigen::Index>(branch[k]);
    for (Integer val = span->first; val <= span->second; val += Integer(1)) {
      x(v) = val;
      if (!self(self, k + 1)) return false;
    }
    x(v) = Integer(0);
    return true;
  };
  if (max_tuples > 0) (void)dfs(dfs, 0);
  out.satisfiable = !out.representatives.empty();
  return out;
}

std::optional<IntVector> find_solution(const DiophantineSystem& sys, const SolveLimits& limits) {
  BoundedProjection p = project_bounded(sys, limits, 1);
  if (!p.satisfiable) return std::nullopt;
  return p.representatives.front();
}

}  // namespace vass
