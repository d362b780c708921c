#pragma once

#include "vass/model.hpp"

#include <compare>
#include <string>
#include <vector>

namespace vass {

struct SccDecomposition {
  std::vector<std::size_t> component_of;        // state -> component index
  std::vector<std::vector<StateId>> components;  // topological order, sources first
  std::vector<std::vector<TransitionId>> internal_edges;
  std::vector<std::vector<TransitionId>> outgoing_edges;  // edges leaving the component

  [[nodiscard]] std::size_t size() const noexcept { return components.size(); }
  [[nodiscard]] bool has_cycle(std::size_t c) const { return !internal_edges.at(c).empty(); }
};

[[nodiscard]] SccDecomposition scc_condense(const VassGraph& g);
[[nodiscard]] bool is_strongly_connected(const VassGraph& g);

struct CycleSpace {
  std::vector<IntVector> basis;
  [[nodiscard]] std::size_t dim() const noexcept { return basis.size(); }
  [[nodiscard]] bool contains(const IntVector& v) const { return in_span(basis, v); }
};

// V_G: span of all cycle displacements.
[[nodiscard]] CycleSpace cycle_space(const VassGraph& g);
// V_G(t): span of the displacements of cycles through t.
[[nodiscard]] CycleSpace edge_cycle_space(const VassGraph& g, TransitionId t);
[[nodiscard]] std::size_t edge_cycle_dim(const VassGraph& g, TransitionId t);

// Per SCC potentials: displacement of a tree path from the component root.
// Cycle displacements are spanned by pot(src) + delta - pot(dst) over internal edges.
struct Potentials {
  std::vector<IntVector> pot;  // per state
  std::vector<StateId> root;   // per state, root of its component
};
[[nodiscard]] Potentials scc_potentials(const VassGraph& g, const SccDecomposition& scc);

// (r_d, ..., r_0): counts[k] is the number of edges t with dim V_G(t) = k.
struct RankVector {
  std::vector<std::size_t> counts;

  RankVector() = default;
  explicit RankVector(std::size_t dim) : counts(dim + 1, 0) {}

  [[nodiscard]] std::size_t dim() const noexcept { return counts.empty() ? 0 : counts.size() - 1; }
  [[nodiscard]] std::size_t total() const;
  [[nodiscard]] std::string to_string() const;  // highest dimension first
  RankVector& operator+=(const RankVector& o);

  friend bool operator==(const RankVector& a, const RankVector& b) { return (a <=> b) == 0; }
  // Lexicographic from the highest dimension down.
  friend std::strong_ordering operator<=>(const RankVector& a, const RankVector& b);
};

[[nodiscard]] RankVector rank(const VassGraph& g);

// Dimensions i with V_G inside {x_i = 0}: every cycle leaves them unchanged.
[[nodiscard]] std::vector<bool> rigid_dims(const VassGraph& g);

}  // namespace vass
