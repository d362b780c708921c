#pragma once

#include "vass/errors.hpp"
#include "vass/integer.hpp"
#include "vass/linalg.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vass {

using StateId = std::size_t;
using TransitionId = std::size_t;
inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Vector over N extended with omega.  Omega absorbs any finite addition.
class ExtVector {
 public:
  ExtVector() = default;
  explicit ExtVector(IntVector finite);
  static ExtVector omegas(Eigen::Index dim);
  static ExtVector zeros(Eigen::Index dim) { return ExtVector(IntVector::Zero(dim)); }
  static ExtVector of(std::initializer_list<long long> xs) { return ExtVector(int_vector(xs)); }

  [[nodiscard]] Eigen::Index dim() const noexcept { return values_.size(); }
  [[nodiscard]] bool is_omega(Eigen::Index i) const { return omega_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const Integer& value(Eigen::Index i) const;
  void set(Eigen::Index i, Integer v);
  void set_omega(Eigen::Index i);

  [[nodiscard]] bool is_finite() const noexcept;
  [[nodiscard]] std::vector<Eigen::Index> finite_dims() const;
  // Finite entries as-is, omega entries as zero.
  [[nodiscard]] const IntVector& finite_part() const noexcept { return values_; }
  [[nodiscard]] Integer norm1() const;
  [[nodiscard]] ExtVector plus(const IntVector& delta) const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ExtVector& a, const ExtVector& b);

 private:
  IntVector values_;
  std::vector<bool> omega_;
};

// x ⊑ y: every entry of y is the matching entry of x or omega.
[[nodiscard]] bool sqsubseteq(const ExtVector& x, const ExtVector& y);
// x <= y with omega as +infinity.
[[nodiscard]] bool covered_by(const ExtVector& x, const ExtVector& y);

struct Transition {
  TransitionId id = 0;
  StateId source = 0;
  StateId target = 0;
  IntVector delta;
  std::string name;
  // Id of the transition this one copies in the graph the analysis started from.
  TransitionId origin = 0;
};

class VassGraph {
 public:
  VassGraph() = default;
  explicit VassGraph(Eigen::Index dim) : dim_(dim) {}

  StateId add_state(std::string name, StateId origin = kNone);
  TransitionId add_transition(StateId source, StateId target, IntVector delta, std::string name = {},
                              TransitionId origin = kNone);
  void set_initial(StateId s) { initial_ = s; }
  void set_final(StateId s) { final_ = s; }

  [[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t num_states() const noexcept { return state_names_.size(); }
  [[nodiscard]] std::size_t num_transitions() const noexcept { return transitions_.size(); }
  [[nodiscard]] const std::string& state_name(StateId s) const { return state_names_.at(s); }
  [[nodiscard]] StateId state_origin(StateId s) const { return state_origin_.at(s); }
  [[nodiscard]] std::optional<StateId> find_state(const std::string& name) const;
  [[nodiscard]] std::optional<TransitionId> find_transition(const std::string& name) const;
  [[nodiscard]] const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  [[nodiscard]] const Transition& transition(TransitionId t) const { return transitions_.at(t); }
  [[nodiscard]] const std::vector<TransitionId>& out_edges(StateId s) const { return out_.at(s); }
  [[nodiscard]] const std::vector<TransitionId>& in_edges(StateId s) const { return in_.at(s); }
  [[nodiscard]] StateId initial() const noexcept { return initial_; }
  [[nodiscard]] StateId final() const noexcept { return final_; }

  // ‖T‖, max‖T‖ and |G| = |Q| + ‖T‖.
  [[nodiscard]] Integer norm() const;
  [[nodiscard]] Integer max_norm() const;
  [[nodiscard]] Integer size() const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<std::string> state_names_;
  std::vector<StateId> state_origin_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<TransitionId>> out_;
  std::vector<std::vector<TransitionId>> in_;
  StateId initial_ = 0;
  StateId final_ = 0;
};

using Path = std::vector<TransitionId>;

struct Configuration {
  StateId state = 0;
  ExtVector location;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class Domain { Naturals, Integers, Extended };

// Configuration over Z^d, where steps never fail on negativity.
struct ZConfiguration {
  StateId state = 0;
  IntVector location;
};

[[nodiscard]] ZConfiguration step(const VassGraph& g, const ZConfiguration& c, TransitionId t);
[[nodiscard]] ZConfiguration run_path(const VassGraph& g, const ZConfiguration& c, const Path& path);

[[nodiscard]] bool is_chained(const VassGraph& g, const Path& path);
[[nodiscard]] Configuration step(const VassGraph& g, const Configuration& c, TransitionId t, Domain domain);
// Folds step over the path; DomainViolation carries the index of the first bad step.
[[nodiscard]] Configuration run_path(const VassGraph& g, const Configuration& c, const Path& path, Domain domain);
// Index of the first step leaving N^d, or nullopt when the path is a walk from c.
[[nodiscard]] std::optional<std::size_t> first_violation(const VassGraph& g, const Configuration& c,
                                                         const Path& path);
[[nodiscard]] IntVector displacement(const VassGraph& g, const Path& path);
[[nodiscard]] std::map<TransitionId, Integer> parikh(const Path& path);
[[nodiscard]] IntVector parikh_vector(const VassGraph& g, const Path& path);
[[nodiscard]] IntVector displacement_of_parikh(const VassGraph& g, const IntVector& counts);

enum class Sign { Ge, Le };

struct ZoneSignature {
  std::vector<Sign> signs;
  friend bool operator==(const ZoneSignature&, const ZoneSignature&) = default;
  friend auto operator<=>(const ZoneSignature&, const ZoneSignature&) = default;
  [[nodiscard]] std::string to_string() const;
  static ZoneSignature all(Eigen::Index dim, Sign s) { return {std::vector<Sign>(static_cast<std::size_t>(dim), s)}; }
};

[[nodiscard]] bool in_zone(const IntVector& v, const ZoneSignature& z);
// Every signature v satisfies; the canonical one (Ge on zero entries) comes first.
[[nodiscard]] std::vector<ZoneSignature> zone_of(const IntVector& v);
[[nodiscard]] ZoneSignature canonical_zone(const IntVector& v);

}  // namespace vass
