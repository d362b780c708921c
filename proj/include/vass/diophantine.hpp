#pragma once

#include "vass/errors.hpp"
#include "vass/linalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vass {

// A x = r over N with optional pinned variables.  Rows are kept sparse so large
// systems can be assembled incrementally; matrix() materializes A.
class DiophantineSystem {
 public:
  using Term = std::pair<std::size_t, Integer>;
  struct Row {
    std::vector<Term> terms;
    Integer rhs;
  };

  DiophantineSystem() = default;
  DiophantineSystem(const IntMatrix& a, const IntVector& r);

  std::size_t add_variable(std::string name = {});
  void add_row(std::vector<Term> terms, Integer rhs);
  void fix(std::size_t var, Integer value);

  [[nodiscard]] std::size_t num_vars() const noexcept { return names_.size(); }
  [[nodiscard]] std::size_t num_rows() const noexcept { return rows_.size(); }
  [[nodiscard]] const std::vector<Row>& rows() const noexcept { return rows_; }
  [[nodiscard]] const std::map<std::size_t, Integer>& fixed() const noexcept { return fixed_; }
  [[nodiscard]] const std::string& name(std::size_t var) const { return names_.at(var); }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }

  [[nodiscard]] IntMatrix matrix() const;
  [[nodiscard]] IntVector rhs() const;
  // Matrix with one extra unit row per fixed variable.
  [[nodiscard]] IntMatrix matrix_with_fixed() const;
  [[nodiscard]] bool is_homogeneous() const;
  // Same rows with zero right-hand side and every pinned variable pinned to 0.
  [[nodiscard]] DiophantineSystem homogeneous() const;
  [[nodiscard]] bool satisfied_by(const IntVector& x) const;
  // Canonical text, usable as a cache key.
  [[nodiscard]] std::string signature() const;

 private:
  std::vector<Row> rows_;
  std::map<std::size_t, Integer> fixed_;
  std::vector<std::string> names_;
};

struct SolveLimits {
  std::size_t max_frontier = 400000;      // candidates alive at one completion level
  std::size_t max_candidates = 20000000;  // candidates generated overall
  bool check_bounds = true;               // assert the size bounds on the output
};

struct HilbertBasis {
  std::vector<IntVector> elements;  // sorted lexicographically
  [[nodiscard]] std::size_t size() const noexcept { return elements.size(); }
};

// S^{=r} and S^{=0}: every solution of A x = r is some s in the first set plus
// an N-combination of the second.
struct MinimalSolutions {
  std::vector<IntVector> particular;
  std::vector<IntVector> homogeneous;
};

struct SolutionSet {
  bool satisfiable = false;
  MinimalSolutions minimal;
  IntVector h0;               // sum of the homogeneous basis
  std::vector<bool> bounded;  // per variable: takes finitely many values
  [[nodiscard]] std::vector<std::size_t> unbounded_vars() const;
};

// The bounded part of the solution set, found without the inhomogeneous
// completion: bounded variables come from an LP over the recession cone, their
// attainable tuples from LP-bounded enumeration, and each tuple is completed by
// an integer solve shifted along h0.
struct BoundedProjection {
  bool satisfiable = false;
  std::vector<IntVector> representatives;  // one solution per tuple, lexicographic by tuple
  IntVector h0;                            // homogeneous solution, support = unbounded variables
  std::vector<bool> bounded;
  [[nodiscard]] std::vector<std::size_t> unbounded_vars() const;
};

struct AffineResult {
  bool satisfiable = false;
  IntVector solution;
  std::vector<bool> bounded;
};

[[nodiscard]] Integer pottier_bound(const IntMatrix& a);
[[nodiscard]] Integer affine_bound(const IntMatrix& a, const IntVector& r);

[[nodiscard]] HilbertBasis hilbert_basis(const DiophantineSystem& sys, const SolveLimits& limits = {});
[[nodiscard]] MinimalSolutions minimal_solutions(const IntMatrix& a, const IntVector& r,
                                                 const SolveLimits& limits = {});
[[nodiscard]] SolutionSet solve_all(const DiophantineSystem& sys, const SolveLimits& limits = {});
[[nodiscard]] AffineResult solve_affine(const DiophantineSystem& sys, const SolveLimits& limits = {});
// Stops after max_tuples tuples.  Throws ResourceLimit past limits.max_frontier
// enumeration nodes.
[[nodiscard]] BoundedProjection project_bounded(const DiophantineSystem& sys, const SolveLimits& limits = {},
                                                std::size_t max_tuples = SIZE_MAX);
// Some solution, or nullopt when unsatisfiable; stops at the first one found.
[[nodiscard]] std::optional<IntVector> find_solution(const DiophantineSystem& sys, const SolveLimits& limits = {});

}  // namespace vass
