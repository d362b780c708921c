#pragma once

#include "vass/eff2d.hpp"
#include "vass/klm.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vass {

struct SolverConfig {
  // Scheme replacement of effectively <= 2-dimensional components.
  unsigned lps_c = 3;
  std::size_t lps_max_length = 5;
  std::size_t lps_max_cycles = 2;
  std::size_t lps_max_schemes = 64;       // per replacement step
  std::size_t lps_speculative_nodes = 200;  // search nodes spent inside scheme branches per step
  long long band_cap = 64;                // largest reduction bound accepted
  std::size_t coverability_cap = 200000;  // Karp-Miller nodes
  std::size_t max_depth = 200;
  std::size_t max_nodes = 20000;
  std::size_t max_branches = 200000;  // per decomposition
  long long oracle_box = 40;
  std::size_t oracle_state_cap = 4000000;
  std::uint64_t seed = 0;  // 0 keeps the natural branch order, otherwise shuffles it
  bool cross_check = false;
  bool use_eff2d = true;
  Eff2dBudget eff2d{6, 3, 20000, 3};
  SolveLimits limits{};
  WitnessOptions witness{};
  double witness_c = 1.0;  // log2 |w| <= C |xi| log2 |xi|
};

enum class Decision { Reachable, UnreachableProven, Unknown };
[[nodiscard]] std::string to_string(Decision d);

struct NormalRecord {
  std::size_t witness_length = 0;
  double size_log2 = 0.0;  // log2 |xi|
  bool within_bound = false;
};

struct SolverStats {
  std::size_t nodes = 0;
  std::size_t systems_solved = 0;
  double max_size_log2 = 0.0;
  std::size_t linearizations = 0;
  std::size_t saturations = 0;
  std::size_t prunings = 0;
  std::size_t decompositions = 0;  // branches produced
  std::size_t reductions = 0;      // branches produced
  std::size_t schemes_tried = 0;
  std::size_t normal_sequences = 0;
  std::size_t tower_max = 0;  // decompose/reduce steps on 3-dimensional components along one branch
  std::size_t rank_checks = 0;
  std::vector<NormalRecord> normals;
  std::set<std::string> cap_reasons;
};

struct OracleResult {
  bool reachable = false;
  std::optional<Path> walk;  // shortest, when reachable
  // A negative answer is exact when linear invariants confine every walk to the box.
  bool exact = false;
  std::size_t states_explored = 0;
};

struct ReachResult {
  Decision decision = Decision::Unknown;
  std::optional<Witness> witness;
  SolverStats stats;
  // A negative or unknown answer depends on search bounds (eff2d budget, caps).
  bool bound_relative = false;
  bool via_eff2d = false;
  std::optional<OracleResult> oracle;  // set when cross-checking
};

// Coordinates bounded along every walk from p(m) to q(n), derived from
// nonnegative weight vectors w in {0..3}^d with w.delta <= 0 on every
// transition (bound w.m / w_i) or >= 0 on every transition (bound w.n / w_i).
[[nodiscard]] std::vector<std::optional<Integer>> invariant_bounds(const VassGraph& g, const IntVector& m,
                                                                   const IntVector& n);

// Breadth-first search over configurations in [0, box]^d.  Throws ResourceLimit
// past state_cap.
[[nodiscard]] OracleResult bfs_oracle(const VassGraph& g, StateId p, const IntVector& m, StateId q,
                                      const IntVector& n, long long box, std::size_t state_cap = 4000000);

// Depth-first exploration of the KLMST branch tree from xi0.  xi0 must start
// with a finite u.
[[nodiscard]] ReachResult klmst3(const KlmSequence& xi0, const SolverConfig& cfg = {});

// Decides p(m) -> q(n) in a 3-VASS: effectively 2-dimensional graphs go through
// eff2d_reach first; misses and 3-dimensional graphs go through klmst3.
[[nodiscard]] ReachResult reach3(std::shared_ptr<const VassGraph> g, StateId p, const IntVector& m, StateId q,
                                 const IntVector& n, const SolverConfig& cfg = {});

}  // namespace vass
