#include "vass/eff2d.hpp"

#include <cmath>

namespace vass {

namespace {

IntVector canonical_normal(IntVector n) {
  n = primitive(n);
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    if (n(i).is_zero()) continue;
    if (n(i).is_negative()) n = -n;
    break;
  }
  return n;
}

// Coordinates of the plane: w in Q^2 maps to w0 * b0 + w1 * b1.  Row k of the
// returned functionals is the k-th coordinate as a function of w.
std::array<std::array<Integer, 2>, 3> functionals(const Plane2D& v) {
  std::array<std::array<Integer, 2>, 3> f;
  for (int k = 0; k < 3; ++k) f[static_cast<std::size_t>(k)] = {v.basis[0](k), v.basis[1](k)};
  return f;
}

using Dir = std::array<Integer, 2>;

Integer eval_row(const std::array<Integer, 2>& row, const Dir& w) { return row[0] * w[0] + row[1] * w[1]; }

// Generators of the 2-dimensional cone {w : s_r * row_r(w) >= 0}.  Every
// extreme ray or lineality direction is orthogonal to some row, a row itself,
// or a unit vector when no row constrains it.
std::vector<Dir> cone_generators(const std::vector<std::array<Integer, 2>>& rows) {
  std::vector<Dir> candidates{{Integer(1), Integer(0)}, {Integer(-1), Integer(0)}, {Integer(0), Integer(1)},
                              {Integer(0), Integer(-1)}};
  for (const auto& r : rows) {
    if (r[0].is_zero() && r[1].is_zero()) continue;
    candidates.push_back({-r[1], r[0]});
    candidates.push_back({r[1], -r[0]});
    candidates.push_back(r);
    candidates.push_back({-r[0], -r[1]});
  }
  std::vector<Dir> out;
  for (const auto& c : candidates) {
    bool ok = true;
    for (const auto& r : rows) ok = ok && !eval_row(r, c).is_negative();
    if (ok) out.push_back(c);
  }
  return out;
}

std::array<Integer, 2> signed_row(const std::array<Integer, 2>& row, Sign s) {
  if (s == Sign::Ge) return row;
  return {-row[0], -row[1]};
}

Integer lift_denominator(const Plane2D& v, Axes axes) {
  int k = 3 - axes.first - axes.second;
  return abs(v.normal(k));
}

}  // namespace

Plane2D Plane2D::from_normal(const IntVector& normal) {
  if (normal.size() != 3 || is_zero_vector(normal)) throw std::invalid_argument("plane normal must be a nonzero triple");
  Plane2D p;
  p.normal = canonical_normal(normal);
  IntMatrix row(1, 3);
  row.row(0) = p.normal.transpose();
  auto ker = kernel_basis(row);
  p.basis = {ker.at(0), ker.at(1)};
  return p;
}

Plane2D Plane2D::from_span(const std::vector<IntVector>& vectors) {
  auto b = span_basis(vectors, 3);
  if (b.size() != 2) throw std::invalid_argument("vectors do not span a plane");
  return from_normal(cross3(b[0], b[1]));
}

bool Plane2D::contains(const IntVector& v) const { return dot(normal, v).is_zero(); }

Plane2D enclosing_plane(const VassGraph& g) {
  if (g.dim() != 3) throw NotEff2D("effective-dimension machinery needs a 3-VASS");
  CycleSpace cs = cycle_space(g);
  if (cs.dim() == 3) throw NotEff2D("cycle space is 3-dimensional");
  if (cs.dim() == 2) return Plane2D::from_span(cs.basis);
  // Extend a line or the origin to a plane with unit vectors, earliest first.
  std::vector<IntVector> vs = cs.basis;
  for (Eigen::Index i = 0; i < 3 && span_basis(vs, 3).size() < 2; ++i) {
    IntVector e = IntVector::Zero(3);
    e(i) = 1;
    if (!in_span(span_basis(vs, 3), e)) vs.push_back(e);
  }
  return Plane2D::from_span(vs);
}

bool zone_spans_plane(const Plane2D& v, const ZoneSignature& z) {
  auto f = functionals(v);
  std::vector<std::array<Integer, 2>> rows;
  for (int k = 0; k < 3; ++k) rows.push_back(signed_row(f[static_cast<std::size_t>(k)], z.signs[static_cast<std::size_t>(k)]));
  auto gens = cone_generators(rows);
  std::vector<IntVector> as_vectors;
  for (const auto& g : gens) {
    IntVector w(2);
    w(0) = g[0];
    w(1) = g[1];
    as_vectors.push_back(w);
  }
  return span_basis(as_vectors, 2).size() == 2;
}

bool axes_imply_zone(const Plane2D& v, const ZoneSignature& z, Axes axes) {
  auto f = functionals(v);
  auto idx = [](int a) { return static_cast<std::size_t>(a); };
  std::vector<std::array<Integer, 2>> rows{signed_row(f[idx(axes.first)], z.signs[idx(axes.first)]),
                                           signed_row(f[idx(axes.second)], z.signs[idx(axes.second)])};
  int k = 3 - axes.first - axes.second;
  auto target = signed_row(f[idx(k)], z.signs[idx(k)]);
  for (const auto& g : cone_generators(rows))
    if (eval_row(target, g).is_negative()) return false;
  return true;
}

std::optional<Axes> subspace_zone_axes(const Plane2D& v, const ZoneSignature& z) {
  if (!zone_spans_plane(v, z)) return std::nullopt;
  std::optional<Axes> best;
  Integer best_den;
  for (Axes a : {Axes{0, 1}, Axes{0, 2}, Axes{1, 2}}) {
    Integer den = lift_denominator(v, a);
    if (den.is_zero()) continue;  // the dropped coordinate is not a function of the kept ones
    if (!axes_imply_zone(v, z, a)) continue;
    if (!best || den < best_den) {
      best = a;
      best_den = den;
    }
  }
  return best;
}

IntVector Projection::apply(const IntVector& v) const {
  IntVector w(2);
  w(0) = v(kept.first);
  w(1) = v(kept.second);
  return w;
}

IntVector Projection::lift(const IntVector& w) const {
  Rational d = coef_first * Rational(w(0)) + coef_second * Rational(w(1));
  if (!d.is_integer()) throw LiftUndefined("lifted entry " + d.to_string() + " is not an integer");
  IntVector v(3);
  v(kept.first) = w(0);
  v(kept.second) = w(1);
  v(dropped) = d.num();
  return v;
}

ProjectedGraph project(const VassGraph& g, Axes axes) {
  if (g.dim() != 3) throw std::invalid_argument("projection needs a 3-VASS");
  if (axes.first < 0 || axes.second > 2 || axes.first >= axes.second) throw std::invalid_argument("bad axes");
  Projection proj;
  proj.kept = axes;
  proj.dropped = 3 - axes.first - axes.second;
  CycleSpace cs = cycle_space(g);
  if (cs.dim() == 3) throw LiftUndefined("cycle space is 3-dimensional");
  // Solve B_dropped = c1 B_first + c2 B_second over the cycle-space basis.
  if (!cs.basis.empty()) {
    RatMatrix m(static_cast<Eigen::Index>(cs.basis.size()), 3);
    for (std::size_t r = 0; r < cs.basis.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      m(row, 0) = Rational(cs.basis[r](axes.first));
      m(row, 1) = Rational(cs.basis[r](axes.second));
      m(row, 2) = Rational(cs.basis[r](proj.dropped));
    }
    auto pivots = reduce_rows(m);
    if (!pivots.empty() && pivots.back() == 2) {
      throw LiftUndefined("axis " + std::to_string(proj.dropped + 1) + " is not a function of the kept axes on V_G");
    }
    // free coefficient set to zero
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      (pivots[r] == 0 ? proj.coef_first : proj.coef_second) = m(row, 2);
    }
  }
  auto out = std::make_shared<VassGraph>(2);
  for (StateId s = 0; s < g.num_states(); ++s) out->add_state(g.state_name(s), s);
  for (const auto& t : g.transitions()) out->add_transition(t.source, t.target, proj.apply(t.delta), t.name + "'", t.id);
  out->set_initial(g.initial());
  out->set_final(g.final());
  return ProjectedGraph{out, proj};
}

LinearPathScheme lift_scheme(const LinearPathScheme& projected, std::shared_ptr<const VassGraph> original) {
  const VassGraph& pg = projected.graph();
  auto map = [&](const Path& p) {
    Path out;
    for (TransitionId t : p) out.push_back(pg.transition(t).origin);
    return out;
  };
  std::vector<Path> alphas;
  std::vector<Path> betas;
  for (const auto& a : projected.alphas()) alphas.push_back(map(a));
  for (const auto& b : projected.betas()) betas.push_back(map(b));
  return LinearPathScheme(std::move(original), pg.state_origin(projected.start()), std::move(alphas), std::move(betas));
}

IntVector BandGraph::drop(const IntVector& v) const {
  IntVector w(2);
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < 3; ++i)
    if (i != axis) w(j++) = v(i);
  return w;
}

BandGraph band_encode(const VassGraph& g, int axis, const Integer& bound) {
  if (g.dim() != 3) throw std::invalid_argument("band encoding needs a 3-VASS");
  if (axis < 0 || axis > 2) throw std::invalid_argument("bad axis");
  if (bound.is_negative()) throw std::invalid_argument("band bound must be nonnegative");
  BandGraph band;
  band.axis = axis;
  band.bound = bound;
  band.levels = static_cast<std::size_t>(bound.to_int64()) + 1;
  auto out = std::make_shared<VassGraph>(2);
  for (StateId s = 0; s < g.num_states(); ++s)
    for (std::size_t lv = 0; lv < band.levels; ++lv) out->add_state(g.state_name(s) + "_" + std::to_string(lv), s);
  for (const auto& t : g.transitions()) {
    for (std::size_t lv = 0; lv < band.levels; ++lv) {
      Integer to = Integer(lv) + t.delta(axis);
      if (to.is_negative() || to > bound) continue;
      out->add_transition(band.state(t.source, Integer(lv)), band.state(t.target, to), band.drop(t.delta),
                          t.name + "@" + std::to_string(lv), t.id);
    }
  }
  band.graph = out;
  return band;
}

std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::HighOctant: return "HighOctant";
    case RegionKind::Band: return "Band";
    case RegionKind::BandUnion: return "BandUnion";
    case RegionKind::Corridor: return "Corridor";
    case RegionKind::CrossCorridor: return "CrossCorridor";
    case RegionKind::Overlap: return "Overlap";
  }
  return "?";
}

RegionParams RegionParams::of(const VassGraph& g, unsigned c) {
  RegionParams r;
  r.D = PumpConstants::of(g, c).D;
  r.Dprime = Integer(g.num_states()) * (Integer(2) * r.D + Integer(1)) * g.norm();
  r.T = g.max_norm() * Integer(g.num_states());
  return r;
}

bool RegionPiece::contains(const IntVector& v) const {
  const Integer two_d = Integer(2) * params.D;
  auto nonneg = all_nonnegative(v);
  if (!nonneg) return false;
  auto band = [&](int a, const Integer& w) { return v(a) <= w; };
  switch (kind) {
    case RegionKind::HighOctant:
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) < two_d) return false;
      return true;
    case RegionKind::Band: return band(axis, width);
    case RegionKind::BandUnion:
      for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (band(i, width)) return true;
      return false;
    case RegionKind::Corridor:
      return band(axis, two_d) && v(other_axis) >= center - params.Dprime && v(other_axis) <= center + params.Dprime;
    case RegionKind::CrossCorridor:
      return (band(axis, two_d) && band(other_axis, params.Dprime)) ||
             (band(axis, params.Dprime) && band(other_axis, two_d));
    case RegionKind::Overlap: {
      RegionPiece high = *this;
      high.kind = RegionKind::HighOctant;
      RegionPiece uni = *this;
      uni.kind = RegionKind::BandUnion;
      return high.contains(v) && uni.contains(v);
    }
  }
  return false;
}

std::string RegionPiece::to_string() const {
  std::string s = vass::to_string(kind);
  if (axis >= 0) s += "(" + std::to_string(axis + 1) + ")";
  return s;
}

RegionPlan region_decompose(const VassGraph& g, StateId p, const IntVector& m, StateId q, const IntVector& n,
                            unsigned c) {
  RegionPlan plan;
  RegionParams params = RegionParams::of(g, c);
  plan.max_segments = Integer(2) * Integer(g.num_states()) * pow(Integer(2) * params.D + Integer(1), 2) + Integer(1);
  if (p == q && m == n) return plan;
  RegionPiece high;
  high.kind = RegionKind::HighOctant;
  high.params = params;
  const Integer width = Integer(2) * params.D + Integer(2) * params.T;
  auto band_of = [&](const IntVector& v) {
    RegionPiece b;
    b.kind = RegionKind::Band;
    b.params = params;
    b.width = width;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
      if (v(i) < Integer(2) * params.D) {
        b.axis = i;
        break;
      }
    }
    return b;
  };
  RegionPiece overlap;
  overlap.kind = RegionKind::Overlap;
  overlap.params = params;
  overlap.width = width;
  const bool m_high = high.contains(m);
  const bool n_high = high.contains(n);
  if (!m_high) {
    plan.segments.push_back(band_of(m));
    plan.segments.push_back(overlap);
  }
  plan.segments.push_back(high);
  if (!n_high) {
    plan.segments.push_back(overlap);
    plan.segments.push_back(band_of(n));
  }
  return plan;
}

namespace {

struct Search {
  Eff2dResult& out;
  std::size_t max_schemes;
  LpsSolver solver;

  // Returns false to stop the enumeration.
  bool attempt(const LinearPathScheme& rho) {
    if (out.schemes_tried >= max_schemes) {
      out.budget_exhausted = true;
      return false;
    }
    ++out.schemes_tried;
    auto hit = solver.solve(rho);
    if (!hit) return true;
    out.walk = std::move(hit->walk);
    out.scheme = rho;
    out.counts = std::move(hit->counts);
    return false;
  }
};

}  // namespace

Eff2dResult eff2d_reach(std::shared_ptr<const VassGraph> g, StateId p, const IntVector& m, StateId q,
                        const IntVector& n, const Eff2dBudget& budget, const SolveLimits& limits) {
  Plane2D plane = enclosing_plane(*g);
  const bool planar = cycle_space(*g).dim() == 2;
  Eff2dResult out;
  out.plan = region_decompose(*g, p, m, q, n, budget.c);
  double base = (Integer(g->num_states()) + g->norm()).to_double();
  out.exponent = base > 1.0 ? std::log(static_cast<double>(std::max<std::size_t>(budget.max_length, 1))) / std::log(base) : 0.0;
  Search search{out, budget.max_schemes, LpsSolver(m, n, limits)};

  // High octant: project along the zone of n - m, keep schemes whose projected
  // cycles are zigzag free in the kept quadrant, lift and solve in G.
  if (planar && out.plan.segments.size() == 1 && out.plan.segments[0].kind == RegionKind::HighOctant) {
    for (const auto& z : zone_of(n - m)) {
      auto axes = subspace_zone_axes(plane, z);
      if (!axes) continue;
      ProjectedGraph pg = project(*g, *axes);
      ZoneSignature quadrant{{z.signs[static_cast<std::size_t>(axes->first)], z.signs[static_cast<std::size_t>(axes->second)]}};
      enumerate_lps(pg.graph, p, q, budget.max_length, std::min<std::size_t>(budget.max_cycles, 2 * g->num_states()),
                    [&](const LinearPathScheme& rho2) {
                      if (!is_zigzag_free(rho2, quadrant)) return true;
                      return search.attempt(lift_scheme(rho2, g));
                    });
      if (out.found()) {
        out.used_projection = true;
        out.limit_hits = search.solver.limit_hits;
        return out;
      }
      if (out.budget_exhausted) break;
    }
  }
  if (!out.budget_exhausted) {
    enumerate_lps(g, p, q, budget.max_length, budget.max_cycles,
                  [&](const LinearPathScheme& rho) { return search.attempt(rho); });
  }
  out.limit_hits = search.solver.limit_hits;
  return out;
}

}  // namespace vass
