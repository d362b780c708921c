#pragma once

#include "vass/diophantine.hpp"
#include "vass/model.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vass {

// alpha_0 beta_1* alpha_1 ... beta_n* alpha_n.  Each beta_i is anchored at the
// state where alpha_{i-1} ends; two rotations of one cycle are different schemes.
class LinearPathScheme {
 public:
  LinearPathScheme() = default;
  // Throws std::invalid_argument unless the pieces chain up.
  LinearPathScheme(std::shared_ptr<const VassGraph> graph, StateId start, std::vector<Path> alphas,
                   std::vector<Path> betas);

  [[nodiscard]] const VassGraph& graph() const { return *graph_; }
  [[nodiscard]] const std::shared_ptr<const VassGraph>& graph_ptr() const noexcept { return graph_; }
  [[nodiscard]] StateId start() const noexcept { return start_; }
  [[nodiscard]] StateId end() const;
  // State where alpha_k ends (the anchor of beta_{k+1}).
  [[nodiscard]] StateId junction(std::size_t k) const;
  [[nodiscard]] const std::vector<Path>& alphas() const noexcept { return alphas_; }
  [[nodiscard]] const std::vector<Path>& betas() const noexcept { return betas_; }
  [[nodiscard]] std::size_t num_cycles() const noexcept { return betas_.size(); }
  [[nodiscard]] std::size_t length() const;

  // alpha_0 beta_1^{e_1} ... alpha_n; throws ResourceLimit past max_length.
  [[nodiscard]] Path instantiate(const std::vector<Integer>& counts, std::size_t max_length = 50000000) const;
  // "alpha: [0, 2] ; beta: [1]* ; alpha: [] ..." with transition names.
  [[nodiscard]] std::string to_string() const;
  // Same, with repetition counts after each cycle.
  [[nodiscard]] std::string to_string(const std::vector<Integer>& counts) const;

  friend bool operator==(const LinearPathScheme& a, const LinearPathScheme& b) {
    return a.start_ == b.start_ && a.alphas_ == b.alphas_ && a.betas_ == b.betas_;
  }

 private:
  std::shared_ptr<const VassGraph> graph_;
  StateId start_ = 0;
  std::vector<Path> alphas_;
  std::vector<Path> betas_;
};

struct PumpConstants {
  unsigned c = 3;
  Integer D;  // max|T| * (|Q| + |T|)^c

  static PumpConstants of(const VassGraph& g, unsigned c = 3);
  // (|Q| + |T|)^c: the length bound defining L_c(G).
  static Integer length_bound(const VassGraph& g, unsigned c);
  // m in [2D, oo)^d
  [[nodiscard]] bool in_region(const IntVector& m) const;
};

[[nodiscard]] bool is_zigzag_free(const LinearPathScheme& rho, const ZoneSignature& z);
// Some zone containing every cycle displacement, if one exists.
[[nodiscard]] std::optional<ZoneSignature> common_zone(const LinearPathScheme& rho);

// Checks the hypotheses under which every instantiation of rho from p(m) whose
// final location lies in [2D, oo)^d is a walk: m in that region, rho zigzag free
// and no longer than (|Q| + |T|)^c.  Returns true or throws PreconditionUnmet.
bool zigzag_walk_guarantee(const LinearPathScheme& rho, const IntVector& m, const PumpConstants& k);

// Variable layout of the LPS system.  z1 positions cover every prefix of every
// alpha_k (0 <= l <= |alpha_k|), z2 the first lap and z3 the last lap of every
// cycle (1 <= l <= |beta|).
struct LpsLayout {
  Eigen::Index dim = 0;
  std::size_t cycles = 0;
  std::vector<std::vector<std::size_t>> z1;  // [k][l] -> first variable of the block
  std::vector<std::vector<std::size_t>> z2;  // [k][l-1], k = cycle index from 0
  std::vector<std::vector<std::size_t>> z3;
  std::size_t num_vars = 0;

  [[nodiscard]] std::size_t x(Eigen::Index i) const { return static_cast<std::size_t>(i); }
  [[nodiscard]] std::size_t y(Eigen::Index i) const { return static_cast<std::size_t>(dim + i); }
  [[nodiscard]] std::size_t phi(std::size_t i) const { return static_cast<std::size_t>(2 * dim) + i; }
};

struct LpsSystem {
  DiophantineSystem system;
  LpsLayout layout;
};

struct LpsSolution {
  IntVector x;
  IntVector y;
  std::vector<Integer> phi;
};

// E_rho with the finite entries of m and n pinned on x and y.
[[nodiscard]] LpsSystem lps_system(const LinearPathScheme& rho, const ExtVector& m, const ExtVector& n);
[[nodiscard]] LpsSystem lps_system(const LinearPathScheme& rho);
// E0_rho: same rows, zero right-hand sides, pinned endpoint entries pinned to 0.
[[nodiscard]] LpsSystem lps_homogeneous_system(const LinearPathScheme& rho, const ExtVector& m, const ExtVector& n);
[[nodiscard]] LpsSystem lps_homogeneous_system(const LinearPathScheme& rho);

[[nodiscard]] LpsSolution decode_solution(const LpsLayout& layout, const IntVector& values);
// Full assignment of E_rho (or of E0_rho) induced by an instantiation starting at x.
[[nodiscard]] IntVector encode_solution(const LinearPathScheme& rho, const LpsLayout& layout, const IntVector& x,
                                        const std::vector<Integer>& phi, bool homogeneous = false);

// The instantiated path, validated from p(x) to q(y) over N^d; throws
// InternalInconsistency when it is not a walk.
[[nodiscard]] Path extract_walk(const LinearPathScheme& rho, const LpsSolution& sol);

// Schemes from p to q with |rho| <= length_bound and at most max_cycles cycles,
// shortest first, then lexicographic over the item sequence where a step t is
// (0, t) and a cycle beta is (1, beta).  The visitor returns false to stop.
// Returns the number of schemes visited.
std::size_t enumerate_lps(std::shared_ptr<const VassGraph> g, StateId p, StateId q, std::size_t length_bound,
                          std::size_t max_cycles, const std::function<bool(const LinearPathScheme&)>& visit);

// Solves E_rho between fixed endpoints.  Cheap necessary conditions run first:
// alpha_0 must be a walk from m, alpha_n must end at n without going negative,
// and the displacement equation alone (cached by its data) must be solvable.
// Cycles that are proper powers of a shorter word are skipped: the scheme with
// the root cycle captures every walk the power does.
class LpsSolver {
 public:
  LpsSolver(IntVector m, IntVector n, SolveLimits limits = {});

  struct Hit {
    Path walk;
    std::vector<Integer> counts;
  };
  std::optional<Hit> solve(const LinearPathScheme& rho);

  std::size_t solved = 0;      // full systems built
  std::size_t filtered = 0;    // rejected by the cheap checks
  std::size_t limit_hits = 0;  // solver gave up (ResourceLimit); the scheme counts as unknown

 private:
  IntVector m_;
  IntVector n_;
  SolveLimits limits_;
  std::map<std::string, bool> displacement_cache_;
};

[[nodiscard]] bool is_proper_power(const Path& word);

struct LpsReachResult {
  std::optional<Path> walk;
  std::optional<LinearPathScheme> scheme;
  std::vector<Integer> counts;
  std::size_t schemes_tried = 0;
  std::size_t limit_hits = 0;
  // A miss only refutes reachability relative to the bounds searched.
  std::size_t length_bound = 0;
  std::size_t max_cycles = 0;
  [[nodiscard]] bool found() const noexcept { return walk.has_value(); }
};

[[nodiscard]] LpsReachResult lps_reach(std::shared_ptr<const VassGraph> g, StateId p, const IntVector& m, StateId q,
                                       const IntVector& n, std::size_t length_bound, std::size_t max_cycles,
                                       const SolveLimits& limits = {});

}  // namespace vass
