#include "vass/model.hpp"

#include <sstream>

namespace vass {

ExtVector::ExtVector(IntVector finite) : values_(std::move(finite)), omega_(static_cast<std::size_t>(values_.size()), false) {
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    if (values_(i).is_negative()) throw std::invalid_argument("ExtVector entries must be natural numbers");
}

ExtVector ExtVector::omegas(Eigen::Index dim) {
  ExtVector v(IntVector::Zero(dim));
  v.omega_.assign(static_cast<std::size_t>(dim), true);
  return v;
}

const Integer& ExtVector::value(Eigen::Index i) const {
  if (is_omega(i)) throw std::logic_error("value() on an omega entry");
  return values_(i);
}

void ExtVector::set(Eigen::Index i, Integer v) {
  if (v.is_negative()) throw std::invalid_argument("ExtVector entries must be natural numbers");
  values_(i) = std::move(v);
  omega_[static_cast<std::size_t>(i)] = false;
}

void ExtVector::set_omega(Eigen::Index i) {
  values_(i) = Integer(0);
  omega_[static_cast<std::size_t>(i)] = true;
}

bool ExtVector::is_finite() const noexcept {
  for (bool w : omega_)
    if (w) return false;
  return true;
}

std::vector<Eigen::Index> ExtVector::finite_dims() const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (!is_omega(i)) out.push_back(i);
  return out;
}

Integer ExtVector::norm1() const {
  Integer s(0);
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (!is_omega(i)) s += values_(i);
  return s;
}

ExtVector ExtVector::plus(const IntVector& delta) const {
  ExtVector r = *this;
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (!is_omega(i)) r.values_(i) = values_(i) + delta(i);
  return r;
}

std::string ExtVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (i > 0) os << ',';
    if (is_omega(i)) {
      os << 'w';
    } else {
      os << values_(i);
    }
  }
  os << ')';
  return os.str();
}

bool operator==(const ExtVector& a, const ExtVector& b) {
  if (a.dim() != b.dim()) return false;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    if (a.is_omega(i) != b.is_omega(i)) return false;
    if (!a.is_omega(i) && a.values_(i) != b.values_(i)) return false;
  }
  return true;
}

bool sqsubseteq(const ExtVector& x, const ExtVector& y) {
  for (Eigen::Index i = 0; i < x.dim(); ++i) {
    if (y.is_omega(i)) continue;
    if (x.is_omega(i) || x.value(i) != y.value(i)) return false;
  }
  return true;
}

bool covered_by(const ExtVector& x, const ExtVector& y) {
  for (Eigen::Index i = 0; i < x.dim(); ++i) {
    if (y.is_omega(i)) continue;
    if (x.is_omega(i) || y.value(i) < x.value(i)) return false;
  }
  return true;
}

StateId VassGraph::add_state(std::string name, StateId origin) {
  StateId id = state_names_.size();
  state_names_.push_back(std::move(name));
  state_origin_.push_back(origin == kNone ? id : origin);
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

TransitionId VassGraph::add_transition(StateId source, StateId target, IntVector delta, std::string name,
                                       TransitionId origin) {
  if (source >= num_states() || target >= num_states()) throw std::out_of_range("transition endpoint out of range");
  if (delta.size() != dim_) throw std::invalid_argument("displacement has wrong dimension");
  TransitionId id = transitions_.size();
  if (name.empty()) name = "t" + std::to_string(id);
  transitions_.push_back(Transition{id, source, target, std::move(delta), std::move(name), origin == kNone ? id : origin});
  out_[source].push_back(id);
  in_[target].push_back(id);
  return id;
}

std::optional<StateId> VassGraph::find_state(const std::string& name) const {
  for (StateId s = 0; s < state_names_.size(); ++s)
    if (state_names_[s] == name) return s;
  return std::nullopt;
}

std::optional<TransitionId> VassGraph::find_transition(const std::string& name) const {
  for (const auto& t : transitions_)
    if (t.name == name) return t.id;
  return std::nullopt;
}

Integer VassGraph::norm() const {
  Integer s(0);
  for (const auto& t : transitions_) s += norm1(t.delta);
  return s;
}

Integer VassGraph::max_norm() const {
  Integer m(0);
  for (const auto& t : transitions_) m = max(m, norm1(t.delta));
  return m;
}

Integer VassGraph::size() const { return Integer(num_states()) + norm(); }

bool is_chained(const VassGraph& g, const Path& path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (g.transition(path[i]).target != g.transition(path[i + 1]).source) return false;
  return true;
}

namespace {

Configuration step_at(const VassGraph& g, const Configuration& c, TransitionId t, Domain domain, std::size_t index) {
  const Transition& tr = g.transition(t);
  if (tr.source != c.state) {
    throw std::invalid_argument("transition " + tr.name + " does not leave state " + g.state_name(c.state));
  }
  Configuration next{tr.target, c.location};
  if (domain == Domain::Integers) throw std::invalid_argument("runs over Z^d take a ZConfiguration");
  for (Eigen::Index i = 0; i < tr.delta.size(); ++i) {
    if (c.location.is_omega(i)) continue;
    Integer v = c.location.value(i) + tr.delta(i);
    if (v.is_negative()) {
      throw DomainViolation(index, "step " + std::to_string(index) + " (" + tr.name + ") leaves N^d in dimension " +
                                       std::to_string(i + 1));
    }
    next.location.set(i, std::move(v));
  }
  return next;
}

}  // namespace

Configuration step(const VassGraph& g, const Configuration& c, TransitionId t, Domain domain) {
  if (domain == Domain::Naturals && !c.location.is_finite()) {
    throw std::invalid_argument("omega entries are only allowed in the extended domain");
  }
  return step_at(g, c, t, domain, 0);
}

Configuration run_path(const VassGraph& g, const Configuration& c, const Path& path, Domain domain) {
  if (domain == Domain::Naturals && !c.location.is_finite()) {
    throw std::invalid_argument("omega entries are only allowed in the extended domain");
  }
  Configuration cur = c;
  for (std::size_t i = 0; i < path.size(); ++i) cur = step_at(g, cur, path[i], domain, i);
  return cur;
}

ZConfiguration step(const VassGraph& g, const ZConfiguration& c, TransitionId t) {
  const Transition& tr = g.transition(t);
  if (tr.source != c.state) throw std::invalid_argument("transition " + tr.name + " does not leave the current state");
  return ZConfiguration{tr.target, c.location + tr.delta};
}

ZConfiguration run_path(const VassGraph& g, const ZConfiguration& c, const Path& path) {
  ZConfiguration cur = c;
  for (TransitionId t : path) cur = step(g, cur, t);
  return cur;
}

std::optional<std::size_t> first_violation(const VassGraph& g, const Configuration& c, const Path& path) {
  try {
    (void)run_path(g, c, path, Domain::Extended);
  } catch (const DomainViolation& e) {
    return e.step_index();
  }
  return std::nullopt;
}

IntVector displacement(const VassGraph& g, const Path& path) {
  IntVector d = IntVector::Zero(g.dim());
  for (TransitionId t : path) d += g.transition(t).delta;
  return d;
}

std::map<TransitionId, Integer> parikh(const Path& path) {
  std::map<TransitionId, Integer> counts;
  for (TransitionId t : path) counts[t] += 1;
  return counts;
}

IntVector parikh_vector(const VassGraph& g, const Path& path) {
  IntVector v = IntVector::Zero(static_cast<Eigen::Index>(g.num_transitions()));
  for (TransitionId t : path) v(static_cast<Eigen::Index>(t)) += 1;
  return v;
}

IntVector displacement_of_parikh(const VassGraph& g, const IntVector& counts) {
  IntVector d = IntVector::Zero(g.dim());
  for (const auto& t : g.transitions()) d += t.delta * counts(static_cast<Eigen::Index>(t.id));
  return d;
}

std::string ZoneSignature::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i > 0) s += ',';
    s += signs[i] == Sign::Ge ? ">=" : "<=";
  }
  return s + ")";
}

bool in_zone(const IntVector& v, const ZoneSignature& z) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Sign s = z.signs[static_cast<std::size_t>(i)];
    if (s == Sign::Ge && v(i).is_negative()) return false;
    if (s == Sign::Le && v(i).is_positive()) return false;
  }
  return true;
}

std::vector<ZoneSignature> zone_of(const IntVector& v) {
  std::vector<ZoneSignature> out{ZoneSignature{}};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::vector<ZoneSignature> next;
    for (const auto& z : out) {
      if (!v(i).is_negative()) {
        auto a = z;
        a.signs.push_back(Sign::Ge);
        next.push_back(std::move(a));
      }
      if (!v(i).is_positive()) {
        auto b = z;
        b.signs.push_back(Sign::Le);
        next.push_back(std::move(b));
      }
    }
    out = std::move(next);
  }
  return out;
}

ZoneSignature canonical_zone(const IntVector& v) { return zone_of(v).front(); }

}  // namespace vass
