#pragma once

#include "vass/lps.hpp"
#include "vass/structure.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vass {

// A 2-dimensional subspace of Q^3: {v : normal . v = 0}.
struct Plane2D {
  IntVector normal;                 // primitive, first nonzero entry positive
  std::array<IntVector, 2> basis;  // primitive integer vectors spanning the plane

  static Plane2D from_normal(const IntVector& normal);
  // Throws std::invalid_argument unless the vectors span a 2-dimensional space.
  static Plane2D from_span(const std::vector<IntVector>& vectors);
  [[nodiscard]] bool contains(const IntVector& v) const;
};

// A plane containing V_G; V_G itself when n_G = 2.  Throws NotEff2D when n_G = 3.
[[nodiscard]] Plane2D enclosing_plane(const VassGraph& g);

using Axes = std::pair<int, int>;  // 0-based, first < second

// Axes (i, j) such that on the plane the sign constraints of z on i and j imply
// all of z; nullopt when the plane points in z do not span the plane.  Among
// qualifying pairs the one with the smallest lift denominator wins, then the
// lexicographically smallest.
[[nodiscard]] std::optional<Axes> subspace_zone_axes(const Plane2D& v, const ZoneSignature& z);
// Whether every plane point satisfying z on the two axes lies in z (exact check).
[[nodiscard]] bool axes_imply_zone(const Plane2D& v, const ZoneSignature& z, Axes axes);
// Whether the plane points in z span the plane.
[[nodiscard]] bool zone_spans_plane(const Plane2D& v, const ZoneSignature& z);

// Drops one axis.  On V_G the dropped coordinate is c_i * v_i + c_j * v_j.
struct Projection {
  Axes kept{0, 1};
  int dropped = 2;
  Rational coef_first;
  Rational coef_second;

  [[nodiscard]] IntVector apply(const IntVector& v) const;
  // Inverse on V_G; throws LiftUndefined when the dropped entry is not integral.
  [[nodiscard]] IntVector lift(const IntVector& w) const;
};

struct ProjectedGraph {
  std::shared_ptr<const VassGraph> graph;  // same states and transition ids
  Projection projection;
};

// Throws LiftUndefined when the kept axes do not determine the dropped one on V_G.
[[nodiscard]] ProjectedGraph project(const VassGraph& g, Axes axes);
// The scheme over the origins of its states and transitions.
[[nodiscard]] LinearPathScheme lift_scheme(const LinearPathScheme& projected, std::shared_ptr<const VassGraph> original);

// States (q, g) for g in [0, B]; axis i is folded into the state.
struct BandGraph {
  std::shared_ptr<const VassGraph> graph;  // dimension 2
  int axis = 0;
  Integer bound;
  std::size_t levels = 0;  // B + 1
  [[nodiscard]] StateId state(StateId q, const Integer& level) const {
    return q * levels + static_cast<std::size_t>(level.to_int64());
  }
  [[nodiscard]] IntVector drop(const IntVector& v) const;
};

[[nodiscard]] BandGraph band_encode(const VassGraph& g, int axis, const Integer& bound);
// lift_scheme also maps band-graph schemes back: states and transitions keep their origins.

enum class RegionKind { HighOctant, Band, BandUnion, Corridor, CrossCorridor, Overlap };
[[nodiscard]] std::string to_string(RegionKind k);

struct RegionParams {
  Integer D;        // max|T| * (|Q| + |T|)^c
  Integer Dprime;   // |Q| * (2D + 1) * |T|
  Integer T;        // max|T| * |Q|
  static RegionParams of(const VassGraph& g, unsigned c);
};

struct RegionPiece {
  RegionKind kind = RegionKind::HighOctant;
  RegionParams params;
  int axis = -1;        // Band, Corridor, CrossCorridor: the bounded axis
  int other_axis = -1;  // Corridor: axis kept within Dprime of center; CrossCorridor: second axis
  Integer width;        // Band, BandUnion, Overlap: upper end of the band
  Integer center;       // Corridor
  [[nodiscard]] bool contains(const IntVector& v) const;
  [[nodiscard]] std::string to_string() const;
};

// Which regions the walk is expected to pass, in order.  Bands use the widened
// bound 2D + 2T of the split between D and L.
struct RegionPlan {
  std::vector<RegionPiece> segments;
  Integer max_segments;  // 2 |Q| (2D + 1)^2 + 1
  [[nodiscard]] bool empty() const noexcept { return segments.empty(); }
};

[[nodiscard]] RegionPlan region_decompose(const VassGraph& g, StateId p, const IntVector& m, StateId q,
                                          const IntVector& n, unsigned c = 3);

struct Eff2dBudget {
  std::size_t max_length = 8;   // scheme length |rho|
  std::size_t max_cycles = 4;
  std::size_t max_schemes = 200000;
  unsigned c = 3;
};

struct Eff2dResult {
  std::optional<Path> walk;
  std::optional<LinearPathScheme> scheme;
  std::vector<Integer> counts;
  RegionPlan plan;
  std::size_t schemes_tried = 0;
  bool budget_exhausted = false;  // stopped by max_schemes rather than by the length bound
  std::size_t limit_hits = 0;     // schemes the Diophantine solver gave up on
  bool used_projection = false;
  // log_{|Q|+|T|}(max_length): the exponent the length bound corresponds to.
  double exponent = 0.0;
  [[nodiscard]] bool found() const noexcept { return walk.has_value(); }
};

// Throws NotEff2D when n_G = 3.  A miss is relative to the budget.
[[nodiscard]] Eff2dResult eff2d_reach(std::shared_ptr<const VassGraph> g, StateId p, const IntVector& m, StateId q,
                                      const IntVector& n, const Eff2dBudget& budget = {},
                                      const SolveLimits& limits = {});

}  // namespace vass
