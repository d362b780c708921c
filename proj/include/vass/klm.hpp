#pragma once

#include "vass/diophantine.hpp"
#include "vass/lps.hpp"
#include "vass/structure.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vass {

enum class ComponentKind { Graph, Scheme };

// (u G v) run from entry to exit, or a linear path scheme standing in for it.
// States and transitions of the body carry origins in the root graph of the
// sequence, so witnesses flatten to root paths.
struct KlmComponent {
  ComponentKind kind = ComponentKind::Graph;
  ExtVector u;
  ExtVector v;
  std::shared_ptr<const VassGraph> graph;  // for schemes: the graph the scheme lives in
  StateId entry = 0;
  StateId exit = 0;
  std::optional<LinearPathScheme> scheme;
  // Set once scheme replacement has been explored; the component is then
  // decomposed like any other graph component.
  bool lps_tried = false;

  static KlmComponent of_graph(std::shared_ptr<const VassGraph> g, StateId entry, StateId exit, ExtVector u,
                               ExtVector v);
  static KlmComponent of_scheme(LinearPathScheme rho, ExtVector u, ExtVector v);

  [[nodiscard]] bool is_graph() const noexcept { return kind == ComponentKind::Graph; }
  [[nodiscard]] Eigen::Index dim() const { return graph->dim(); }
  // dim V_G of the body graph.
  [[nodiscard]] std::size_t effective_dim() const;
};

// A root transition joining two consecutive components.
struct Connector {
  TransitionId origin = 0;
  IntVector delta;
};

struct KlmSequence {
  std::shared_ptr<const VassGraph> root;
  std::vector<KlmComponent> components;
  std::vector<Connector> connectors;  // connectors[i] joins components[i] and components[i + 1]

  // (u G v) over the whole root graph.  The root is copied when its origins are
  // not the identity.
  static KlmSequence single(std::shared_ptr<const VassGraph> g, StateId p, ExtVector u, StateId q, ExtVector v);

  [[nodiscard]] Eigen::Index dim() const { return root->dim(); }
  // 2 (d+1)^(d+1) (n + sum(|u_i| + |G_i| + |v_i|) + sum |a_i|), omega counted as 1.
  [[nodiscard]] Integer size() const;
  // "(u0 G0[p->q] v0) a1 (u1 ...)" with omega spelled w.
  [[nodiscard]] std::string to_string() const;
  // Throws std::invalid_argument when connectors do not chain the components.
  void validate() const;
};

// Replaces component i by a chain of components joined by the given connectors.
[[nodiscard]] KlmSequence splice(const KlmSequence& xi, std::size_t i, std::vector<KlmComponent> comps,
                                 std::vector<Connector> conns);

// Variables of one component inside the characteristic system.
struct ComponentBlock {
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;
  std::vector<std::size_t> phi;  // graph: per local transition; scheme: per cycle
  std::optional<LpsLayout> layout;
  std::size_t offset = 0;  // scheme: first LPS variable
};

struct CharSystem {
  DiophantineSystem system;
  std::vector<ComponentBlock> blocks;
  bool homogeneous = false;
};

// Euler, displacement, boundary and connector rows.  char_system requires every
// component to be a graph; the composite version embeds the full LPS system of
// every scheme component.
[[nodiscard]] CharSystem char_system(const KlmSequence& xi);
[[nodiscard]] CharSystem homogeneous_char_system(const KlmSequence& xi);
[[nodiscard]] CharSystem composite_char_system(const KlmSequence& xi);
[[nodiscard]] CharSystem composite_homogeneous_char_system(const KlmSequence& xi);

struct KlmAnalysis {
  CharSystem sys;
  BoundedProjection solutions;

  [[nodiscard]] bool satisfiable() const noexcept { return solutions.satisfiable; }
  [[nodiscard]] bool bounded(std::size_t var) const { return solutions.bounded.at(var); }
  // Some edge count of graph component i is bounded.
  [[nodiscard]] bool component_bounded(std::size_t i) const;
  [[nodiscard]] std::vector<std::size_t> unbounded_vars() const { return solutions.unbounded_vars(); }
};

// Solves the composite system.  On satisfiable systems asserts that the bounded
// variables of every representative sum to less than |xi|^(|xi|-1).
[[nodiscard]] KlmAnalysis analyze(const KlmSequence& xi, const SolveLimits& limits = {});
// Throws Unsatisfiable when the system has no solution.
[[nodiscard]] std::vector<std::size_t> unbounded_vars(const KlmSequence& xi, const SolveLimits& limits = {});

// Omega boundary entries whose variable is bounded.
[[nodiscard]] bool is_saturated(const KlmSequence& xi, const KlmAnalysis& a);
// One branch per attainable tuple of the bounded omega entries; {xi} when already
// saturated, {} when unsatisfiable.
[[nodiscard]] std::vector<KlmSequence> saturate(const KlmSequence& xi, const KlmAnalysis& a);
[[nodiscard]] std::vector<KlmSequence> saturate(const KlmSequence& xi, const SolveLimits& limits = {});

// Splits graph component i along every path of its SCC DAG from entry to exit.
[[nodiscard]] std::vector<KlmSequence> linearize(const KlmSequence& xi, std::size_t i);
[[nodiscard]] bool is_standard(const KlmSequence& xi, const KlmAnalysis& a);
// Branches that are strongly connected and saturated; unsatisfiable ones dropped.
[[nodiscard]] std::vector<KlmSequence> standardize(const KlmSequence& xi, const SolveLimits& limits = {});

// Bounded edges become connectors, the unbounded ones stay in their strongly
// connected blocks.  Calls visit for every ordering of the bounded edges that
// chains through the blocks; orderings that provably leave N^d are skipped.
// Throws PreconditionUnmet unless component i is a bounded graph component.
// Returns the number of branches visited; stops early when visit returns false
// and throws ResourceLimit past max_branches.
std::size_t decompose_bounded(const KlmSequence& xi, std::size_t i, const KlmAnalysis& a,
                              const std::function<bool(const KlmSequence&)>& visit,
                              std::size_t max_branches = 1000000);
[[nodiscard]] std::vector<KlmSequence> decompose_bounded(const KlmSequence& xi, std::size_t i,
                                                         const SolveLimits& limits = {});

// Karp-Miller labels reachable from s(u) over N_omega.
struct Coverability {
  std::vector<std::pair<StateId, ExtVector>> labels;
  // Some reachable configuration at s is >= w on every finite entry of w.
  [[nodiscard]] bool covers(StateId s, const ExtVector& w) const;
};
[[nodiscard]] Coverability karp_miller(const VassGraph& g, StateId s, const ExtVector& u,
                                       std::size_t node_cap = 200000);
// Edges reversed and displacements negated; ids and origins kept.
[[nodiscard]] VassGraph reversed(const VassGraph& g);

enum class PumpStatus { Pumpable, NotForward, NotBackward };
struct PumpResult {
  PumpStatus status = PumpStatus::Pumpable;
  // Finite dimensions (0-based) the entry (resp. exit) configuration can never
  // exceed when coming back to its state.
  std::vector<Eigen::Index> dims;
};
// Forward: some cycle at entry from u strictly increases every finite entry of u
// outside `ignore`.  Backward: the same for v on the reversed graph.
[[nodiscard]] PumpResult pumpable(const KlmComponent& c, const std::vector<bool>& ignore = {},
                                  std::size_t node_cap = 200000);
// A cycle at s that is a walk from u (omega entries unconstrained) and ends
// strictly above u on the finite entries outside ignore.  Throws ResourceLimit
// when none is found within the caps.
[[nodiscard]] Path find_pump(const VassGraph& g, StateId s, const ExtVector& u, const std::vector<bool>& ignore,
                             long long box_cap = 1 << 12, std::size_t node_cap = 2000000);

// A finite dimension outside ignore that is never omega in any label, with the
// largest value it takes: every run from the analysed configuration keeps that
// coordinate at or below the bound.
struct BoundedDim {
  Eigen::Index dim = 0;
  Integer bound;
};
[[nodiscard]] std::optional<BoundedDim> bounded_dim(const Coverability& cov, const ExtVector& start,
                                                    const std::vector<bool>& ignore = {});

// Axis i folded into the state over levels [0, bound]; displacements keep their
// i-th entry, so the location still carries the true value.  One component per
// choice of entry and exit level (forced when the boundary entry is finite).
[[nodiscard]] std::vector<KlmComponent> reduce(const KlmComponent& c, Eigen::Index i, const Integer& bound);
[[nodiscard]] std::vector<KlmSequence> reduce(const KlmSequence& xi, std::size_t k, Eigen::Index i,
                                              const Integer& bound);

// On a rigid coordinate the value at every state is fixed by a finite boundary
// entry.  Drops the edges touching states where it would be negative; nullopt
// when nothing is dropped.
[[nodiscard]] std::optional<KlmSequence> prune_rigid(const KlmSequence& xi);

// Sum of the graph components' ranks; schemes contribute nothing.
[[nodiscard]] RankVector klm_rank(const KlmSequence& xi);
// Every component is a scheme, or a graph component that is strongly
// connected, saturated, has only unbounded edge counts and is pumpable on its
// non-rigid coordinates.
[[nodiscard]] bool is_3normal(const KlmSequence& xi, const KlmAnalysis& a, std::size_t node_cap = 200000);
[[nodiscard]] bool is_3normal(const KlmSequence& xi, const SolveLimits& limits = {});

struct Witness {
  Path transitions;  // root transition ids
  StateId start_state = 0;
  StateId end_state = 0;
  IntVector start;
  IntVector end;
  std::vector<IntVector> entries;  // m_i
  std::vector<IntVector> exits;    // n_i
  // transitions[0, segment_end[i]) ends where component i is left.
  std::vector<std::size_t> segment_end;
};

struct WitnessOptions {
  std::size_t max_length = 20000000;
  unsigned max_doublings = 24;
  std::size_t node_cap = 200000;
};

// Pumps, an Euler path and a balancing cycle per graph component, scheme
// instantiations for the rest, all from one solution shifted by the homogeneous
// sum.  The repetition count doubles until the whole run validates.  Throws
// PreconditionUnmet unless xi is 3-normal and InternalInconsistency when no
// count validates.
[[nodiscard]] Witness witness_from_normal(const KlmSequence& xi, const KlmAnalysis& a, const WitnessOptions& opts = {});
// Re-runs the witness on the root graph and checks every boundary; throws
// InternalInconsistency on failure.
void validate_witness(const KlmSequence& xi, const Witness& w);
// log2 |w| <= C |xi| log2 |xi|.
[[nodiscard]] bool within_size_bound(const Witness& w, const KlmSequence& xi, double C);

// Euler path from `from` to `to` using transition t exactly counts[t] times.
// Throws InternalInconsistency when the counts do not admit one.
[[nodiscard]] Path euler_path(const VassGraph& g, StateId from, StateId to, const std::vector<Integer>& counts);

}  // namespace vass
