#include "vass/klm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>

namespace vass {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InternalInconsistency(what);
}

bool identity_origins(const VassGraph& g) {
  for (StateId s = 0; s < g.num_states(); ++s)
    if (g.state_origin(s) != s) return false;
  for (const auto& t : g.transitions())
    if (t.origin != t.id) return false;
  return true;
}

// Subgraph on the given states and edges; origins are composed with g's.
struct Induced {
  std::shared_ptr<VassGraph> graph;
  std::vector<StateId> local;  // g state -> subgraph state or kNone
};

Induced induced(const VassGraph& g, const std::vector<StateId>& states, const std::vector<TransitionId>& edges) {
  Induced out{std::make_shared<VassGraph>(g.dim()), std::vector<StateId>(g.num_states(), kNone)};
  for (StateId s : states) out.local[s] = out.graph->add_state(g.state_name(s), g.state_origin(s));
  for (TransitionId t : edges) {
    const Transition& tr = g.transition(t);
    require(out.local[tr.source] != kNone && out.local[tr.target] != kNone, "induced edge leaves the state set");
    out.graph->add_transition(out.local[tr.source], out.local[tr.target], tr.delta, tr.name, tr.origin);
  }
  return out;
}

std::vector<StateId> all_states(const VassGraph& g) {
  std::vector<StateId> s(g.num_states());
  for (StateId i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

std::vector<bool> or_default(const std::vector<bool>& ignore, Eigen::Index d) {
  if (ignore.empty()) return std::vector<bool>(static_cast<std::size_t>(d), false);
  return ignore;
}

Integer ext_norm1(const ExtVector& x) {
  Integer s(0);
  for (Eigen::Index i = 0; i < x.dim(); ++i) s += x.is_omega(i) ? Integer(1) : abs(x.value(i));
  return s;
}

std::string var_name(const char* what, std::size_t i, const std::string& inner) {
  return std::string(what) + std::to_string(i) + "[" + inner + "]";
}

CharSystem build(const KlmSequence& xi, bool allow_schemes) {
  CharSystem cs;
  DiophantineSystem& sys = cs.system;
  const Eigen::Index d = xi.dim();
  for (std::size_t i = 0; i < xi.components.size(); ++i) {
    const KlmComponent& c = xi.components[i];
    ComponentBlock b;
    if (c.is_graph()) {
      const VassGraph& g = *c.graph;
      for (Eigen::Index j = 0; j < d; ++j) b.x.push_back(sys.add_variable(var_name("x", i, std::to_string(j))));
      for (Eigen::Index j = 0; j < d; ++j) b.y.push_back(sys.add_variable(var_name("y", i, std::to_string(j))));
      for (const auto& t : g.transitions()) b.phi.push_back(sys.add_variable(var_name("phi", i, t.name)));
      // Euler rows: out - in = [s = entry] - [s = exit]
      for (StateId s = 0; s < g.num_states(); ++s) {
        std::vector<DiophantineSystem::Term> terms;
        for (TransitionId t : g.out_edges(s)) terms.emplace_back(b.phi[t], Integer(1));
        for (TransitionId t : g.in_edges(s)) terms.emplace_back(b.phi[t], Integer(-1));
        Integer rhs = Integer(s == c.entry ? 1 : 0) - Integer(s == c.exit ? 1 : 0);
        if (terms.empty() && rhs.is_zero()) continue;
        sys.add_row(std::move(terms), rhs);
      }
      for (Eigen::Index j = 0; j < d; ++j) {
        std::vector<DiophantineSystem::Term> terms{{b.y[j], Integer(1)}, {b.x[j], Integer(-1)}};
        for (const auto& t : g.transitions())
          if (!t.delta(j).is_zero()) terms.emplace_back(b.phi[t.id], -t.delta(j));
        sys.add_row(std::move(terms), Integer(0));
      }
    } else {
      if (!allow_schemes) throw PreconditionUnmet("characteristic system of a sequence with scheme components");
      LpsSystem ls = lps_system(*c.scheme);
      b.offset = sys.num_vars();
      for (const auto& name : ls.system.names()) sys.add_variable("L" + std::to_string(i) + "." + name);
      for (const auto& row : ls.system.rows()) {
        std::vector<DiophantineSystem::Term> terms;
        for (const auto& [v, coef] : row.terms) terms.emplace_back(b.offset + v, coef);
        sys.add_row(std::move(terms), row.rhs);
      }
      for (const auto& [v, value] : ls.system.fixed()) sys.fix(b.offset + v, value);
      for (Eigen::Index j = 0; j < d; ++j) {
        b.x.push_back(b.offset + ls.layout.x(j));
        b.y.push_back(b.offset + ls.layout.y(j));
      }
      for (std::size_t k = 0; k < ls.layout.cycles; ++k) b.phi.push_back(b.offset + ls.layout.phi(k));
      b.layout = ls.layout;
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!c.u.is_omega(j)) sys.fix(b.x[static_cast<std::size_t>(j)], c.u.value(j));
      if (!c.v.is_omega(j)) sys.fix(b.y[static_cast<std::size_t>(j)], c.v.value(j));
    }
    cs.blocks.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < xi.connectors.size(); ++i) {
    const auto& a = xi.connectors[i];
    for (Eigen::Index j = 0; j < d; ++j) {
      auto jj = static_cast<std::size_t>(j);
      sys.add_row({{cs.blocks[i + 1].x[jj], Integer(1)}, {cs.blocks[i].y[jj], Integer(-1)}}, a.delta(j));
    }
  }
  return cs;
}

CharSystem homogenize(CharSystem cs) {
  cs.system = cs.system.homogeneous();
  cs.homogeneous = true;
  return cs;
}

bool component_saturated(const KlmSequence& xi, const KlmAnalysis& a, std::size_t k) {
  const KlmComponent& c = xi.components[k];
  const ComponentBlock& b = a.sys.blocks[k];
  for (Eigen::Index j = 0; j < xi.dim(); ++j) {
    auto jj = static_cast<std::size_t>(j);
    if (c.u.is_omega(j) && a.bounded(b.x[jj])) return false;
    if (c.v.is_omega(j) && a.bounded(b.y[jj])) return false;
  }
  return true;
}

ExtVector with_entry(ExtVector x, Eigen::Index i, const Integer& value) {
  x.set(i, value);
  return x;
}

Path repeat(const Path& p, std::size_t times) {
  Path out;
  out.reserve(p.size() * times);
  for (std::size_t k = 0; k < times; ++k) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Integer max_abs(const IntVector& v) {
  Integer m(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) m = max(m, abs(v(i)));
  return m;
}

}  // namespace

KlmComponent KlmComponent::of_graph(std::shared_ptr<const VassGraph> g, StateId entry, StateId exit, ExtVector u,
                                    ExtVector v) {
  KlmComponent c;
  c.kind = ComponentKind::Graph;
  c.graph = std::move(g);
  c.entry = entry;
  c.exit = exit;
  c.u = std::move(u);
  c.v = std::move(v);
  return c;
}

KlmComponent KlmComponent::of_scheme(LinearPathScheme rho, ExtVector u, ExtVector v) {
  KlmComponent c;
  c.kind = ComponentKind::Scheme;
  c.graph = rho.graph_ptr();
  c.entry = rho.start();
  c.exit = rho.end();
  c.scheme = std::move(rho);
  c.u = std::move(u);
  c.v = std::move(v);
  return c;
}

std::size_t KlmComponent::effective_dim() const { return cycle_space(*graph).dim(); }

KlmSequence KlmSequence::single(std::shared_ptr<const VassGraph> g, StateId p, ExtVector u, StateId q, ExtVector v) {
  KlmSequence xi;
  if (identity_origins(*g)) {
    xi.root = g;
  } else {
    auto copy = std::make_shared<VassGraph>(g->dim());
    for (StateId s = 0; s < g->num_states(); ++s) copy->add_state(g->state_name(s));
    for (const auto& t : g->transitions()) copy->add_transition(t.source, t.target, t.delta, t.name);
    copy->set_initial(g->initial());
    copy->set_final(g->final());
    xi.root = copy;
  }
  xi.components.push_back(KlmComponent::of_graph(xi.root, p, q, std::move(u), std::move(v)));
  return xi;
}

Integer KlmSequence::size() const {
  const auto d = static_cast<unsigned>(dim());
  Integer pre = Integer(2) * pow(Integer(d + 1), d + 1);
  Integer sum(connectors.size());
  for (const auto& c : components) sum += ext_norm1(c.u) + c.graph->size() + ext_norm1(c.v);
  for (const auto& a : connectors) sum += norm1(a.delta);
  return pre * sum;
}

std::string KlmSequence::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (i > 0) os << ' ' << root->transition(connectors[i - 1].origin).name << ' ';
    os << '(' << c.u.to_string() << ' ';
    if (c.is_graph()) {
      os << "G" << i << '[' << c.graph->state_name(c.entry) << "->" << c.graph->state_name(c.exit) << ", "
         << c.graph->num_states() << "q/" << c.graph->num_transitions() << "t]";
    } else {
      os << "LPS[" << c.scheme->to_string() << ']';
    }
    os << ' ' << c.v.to_string() << ')';
  }
  return os.str();
}

void KlmSequence::validate() const {
  if (!root) throw std::invalid_argument("sequence without a root graph");
  if (components.empty()) throw std::invalid_argument("sequence without components");
  if (connectors.size() + 1 != components.size()) throw std::invalid_argument("connector count mismatch");
  for (const auto& c : components) {
    if (!c.graph) throw std::invalid_argument("component without a graph");
    if (c.u.dim() != dim() || c.v.dim() != dim() || c.graph->dim() != dim())
      throw std::invalid_argument("component dimension mismatch");
    if (c.entry >= c.graph->num_states() || c.exit >= c.graph->num_states())
      throw std::invalid_argument("component endpoint out of range");
    if (!c.is_graph() && !c.scheme) throw std::invalid_argument("scheme component without a scheme");
  }
  for (std::size_t i = 0; i < connectors.size(); ++i) {
    const auto& a = connectors[i];
    if (a.origin >= root->num_transitions()) throw std::invalid_argument("connector is not a root transition");
    const Transition& t = root->transition(a.origin);
    if (t.delta != a.delta) throw std::invalid_argument("connector displacement differs from its transition");
    const auto& prev = components[i];
    const auto& next = components[i + 1];
    if (prev.graph->state_origin(prev.exit) != t.source || next.graph->state_origin(next.entry) != t.target)
      throw std::invalid_argument("connector " + t.name + " does not chain its components");
  }
}

KlmSequence splice(const KlmSequence& xi, std::size_t i, std::vector<KlmComponent> comps,
                   std::vector<Connector> conns) {
  if (comps.size() != conns.size() + 1) throw std::invalid_argument("splice needs one connector fewer than components");
  KlmSequence out;
  out.root = xi.root;
  for (std::size_t k = 0; k < i; ++k) {
    out.components.push_back(xi.components[k]);
    out.connectors.push_back(xi.connectors[k]);
  }
  for (std::size_t k = 0; k < comps.size(); ++k) {
    out.components.push_back(std::move(comps[k]));
    if (k < conns.size()) out.connectors.push_back(std::move(conns[k]));
  }
  for (std::size_t k = i + 1; k < xi.components.size(); ++k) {
    out.connectors.push_back(xi.connectors[k - 1]);
    out.components.push_back(xi.components[k]);
  }
  return out;
}

CharSystem char_system(const KlmSequence& xi) { return build(xi, false); }
CharSystem homogeneous_char_system(const KlmSequence& xi) { return homogenize(build(xi, false)); }
CharSystem composite_char_system(const KlmSequence& xi) { return build(xi, true); }
CharSystem composite_homogeneous_char_system(const KlmSequence& xi) { return homogenize(build(xi, true)); }

bool KlmAnalysis::component_bounded(std::size_t i) const {
  for (std::size_t v : sys.blocks.at(i).phi)
    if (bounded(v)) return true;
  return false;
}

KlmAnalysis analyze(const KlmSequence& xi, const SolveLimits& limits) {
  KlmAnalysis a;
  a.sys = composite_char_system(xi);
  a.solutions = project_bounded(a.sys.system, limits);
  if (a.satisfiable()) {
    // bounded variables sum below |xi|^(|xi|-1), compared in log2
    const double log_size = xi.size().log2_abs();
    const double ceiling = (xi.size().to_double() - 1.0) * log_size;
    for (const auto& s : a.solutions.representatives) {
      Integer sum(0);
      for (std::size_t v = 0; v < a.sys.system.num_vars(); ++v)
        if (a.bounded(v)) sum += s(static_cast<Eigen::Index>(v));
      require(sum.is_zero() || sum.log2_abs() < ceiling, "bounded variables exceed the size bound");
    }
  }
  return a;
}

std::vector<std::size_t> unbounded_vars(const KlmSequence& xi, const SolveLimits& limits) {
  KlmAnalysis a = analyze(xi, limits);
  if (!a.satisfiable()) throw Unsatisfiable("characteristic system is unsatisfiable");
  return a.unbounded_vars();
}

bool is_saturated(const KlmSequence& xi, const KlmAnalysis& a) {
  for (std::size_t k = 0; k < xi.components.size(); ++k)
    if (!component_saturated(xi, a, k)) return false;
  return true;
}

std::vector<KlmSequence> saturate(const KlmSequence& xi, const KlmAnalysis& a) {
  if (!a.satisfiable()) return {};
  struct Target {
    std::size_t comp;
    bool on_u;
    Eigen::Index dim;
    std::size_t var;
  };
  std::vector<Target> targets;
  for (std::size_t k = 0; k < xi.components.size(); ++k) {
    const auto& c = xi.components[k];
    const auto& b = a.sys.blocks[k];
    for (Eigen::Index j = 0; j < xi.dim(); ++j) {
      auto jj = static_cast<std::size_t>(j);
      if (c.u.is_omega(j) && a.bounded(b.x[jj])) targets.push_back({k, true, j, b.x[jj]});
      if (c.v.is_omega(j) && a.bounded(b.y[jj])) targets.push_back({k, false, j, b.y[jj]});
    }
  }
  if (targets.empty()) return {xi};
  // Homogeneous solutions vanish on bounded variables, so the attainable tuples
  // are exactly the projections of the representatives.
  std::set<std::vector<Integer>> tuples;
  for (const auto& s : a.solutions.representatives) {
    std::vector<Integer> tuple;
    for (const auto& t : targets) tuple.push_back(s(static_cast<Eigen::Index>(t.var)));
    tuples.insert(std::move(tuple));
  }
  std::vector<KlmSequence> out;
  for (const auto& tuple : tuples) {
    KlmSequence b = xi;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      auto& c = b.components[targets[k].comp];
      (targets[k].on_u ? c.u : c.v).set(targets[k].dim, tuple[k]);
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<KlmSequence> saturate(const KlmSequence& xi, const SolveLimits& limits) {
  return saturate(xi, analyze(xi, limits));
}

std::vector<KlmSequence> linearize(const KlmSequence& xi, std::size_t i) {
  const KlmComponent& c = xi.components.at(i);
  if (!c.is_graph()) throw PreconditionUnmet("only graph components are linearized");
  const VassGraph& g = *c.graph;
  SccDecomposition scc = scc_condense(g);
  const std::size_t target = scc.component_of[c.exit];
  std::vector<bool> reaches(scc.size(), false);
  for (std::size_t k = scc.size(); k-- > 0;) {
    if (k == target) {
      reaches[k] = true;
      continue;
    }
    for (TransitionId t : scc.outgoing_edges[k])
      if (reaches[scc.component_of[g.transition(t).target]]) reaches[k] = true;
  }
  std::vector<Induced> pieces(scc.size());
  auto piece = [&](std::size_t k) -> const Induced& {
    if (!pieces[k].graph) pieces[k] = induced(g, scc.components[k], scc.internal_edges[k]);
    return pieces[k];
  };

  std::vector<KlmSequence> out;
  std::vector<KlmComponent> comps;
  std::vector<Connector> conns;
  const ExtVector omega = ExtVector::omegas(xi.dim());
  auto segment = [&](std::size_t k, StateId from, StateId to, bool last) {
    const Induced& p = piece(k);
    return KlmComponent::of_graph(p.graph, p.local[from], p.local[to], comps.empty() ? c.u : omega,
                                  last ? c.v : omega);
  };
  auto dfs = [&](auto&& self, std::size_t k, StateId entry) -> void {
    if (k == target) {
      comps.push_back(segment(k, entry, c.exit, true));
      out.push_back(splice(xi, i, comps, conns));
      comps.pop_back();
      return;
    }
    for (TransitionId t : scc.outgoing_edges[k]) {
      const Transition& tr = g.transition(t);
      const std::size_t next = scc.component_of[tr.target];
      if (!reaches[next]) continue;
      comps.push_back(segment(k, entry, tr.source, false));
      conns.push_back(Connector{tr.origin, tr.delta});
      self(self, next, tr.target);
      comps.pop_back();
      conns.pop_back();
    }
  };
  if (reaches[scc.component_of[c.entry]]) dfs(dfs, scc.component_of[c.entry], c.entry);
  return out;
}

bool is_standard(const KlmSequence& xi, const KlmAnalysis& a) {
  for (const auto& c : xi.components)
    if (c.is_graph() && !is_strongly_connected(*c.graph)) return false;
  return is_saturated(xi, a);
}

std::vector<KlmSequence> standardize(const KlmSequence& xi, const SolveLimits& limits) {
  for (std::size_t i = 0; i < xi.components.size(); ++i) {
    const auto& c = xi.components[i];
    if (!c.is_graph() || is_strongly_connected(*c.graph)) continue;
    std::vector<KlmSequence> out;
    for (const auto& b : linearize(xi, i))
      for (auto& s : standardize(b, limits)) out.push_back(std::move(s));
    return out;
  }
  return saturate(xi, limits);
}

std::size_t decompose_bounded(const KlmSequence& xi, std::size_t i, const KlmAnalysis& a,
                              const std::function<bool(const KlmSequence&)>& visit, std::size_t max_branches) {
  const KlmComponent& c = xi.components.at(i);
  if (!c.is_graph()) throw PreconditionUnmet("decomposition needs a graph component");
  if (!a.satisfiable() || !a.component_bounded(i)) throw PreconditionUnmet("component is not bounded");
  const VassGraph& g = *c.graph;
  const ComponentBlock& blk = a.sys.blocks[i];
  const Eigen::Index d = xi.dim();

  std::vector<TransitionId> bounded_edges;
  std::vector<TransitionId> free_edges;
  for (const auto& t : g.transitions()) (a.bounded(blk.phi[t.id]) ? bounded_edges : free_edges).push_back(t.id);

  // Blocks: strongly connected components of the unbounded edges.  An unbounded
  // edge never crosses blocks (flow conservation bounds it), so every stretch
  // between bounded edges stays inside one block.
  Induced free_graph = induced(g, all_states(g), free_edges);
  SccDecomposition blocks = scc_condense(*free_graph.graph);
  std::vector<std::vector<TransitionId>> block_edges(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (TransitionId t : blocks.internal_edges[b]) block_edges[b].push_back(free_edges[t]);
  std::vector<Induced> pieces(blocks.size());
  auto piece = [&](std::size_t b) -> const Induced& {
    if (!pieces[b].graph) pieces[b] = induced(g, blocks.components[b], block_edges[b]);
    return pieces[b];
  };
  auto block_of = [&](StateId s) { return blocks.component_of[s]; };

  std::set<std::vector<Integer>> tuples;
  for (const auto& s : a.solutions.representatives) {
    std::vector<Integer> tuple;
    for (TransitionId t : bounded_edges) tuple.push_back(s(static_cast<Eigen::Index>(blk.phi[t])));
    tuples.insert(std::move(tuple));
  }

  const ExtVector omega = ExtVector::omegas(d);
  std::size_t count = 0;
  for (const auto& tuple : tuples) {
    std::vector<long long> remaining;
    for (const auto& v : tuple) remaining.push_back(v.to_int64());
    struct Seg {
      std::size_t block;
      StateId from;
      StateId to;
    };
    std::vector<Seg> segs;
    std::vector<TransitionId> conns;
    std::set<std::vector<long long>> dead;

    auto emit = [&]() {
      std::vector<KlmComponent> comps;
      std::vector<Connector> cs;
      for (std::size_t k = 0; k < segs.size(); ++k) {
        const Induced& p = piece(segs[k].block);
        comps.push_back(KlmComponent::of_graph(p.graph, p.local[segs[k].from], p.local[segs[k].to],
                                               k == 0 ? c.u : omega, k + 1 == segs.size() ? c.v : omega));
      }
      for (TransitionId t : conns) cs.push_back(Connector{g.transition(t).origin, g.transition(t).delta});
      if (++count > max_branches) throw ResourceLimit("decomposition branch cap exceeded");
      return visit(splice(xi, i, std::move(comps), std::move(cs)));
    };

    // loc is exact while every block passed so far has no edges.
    auto dfs = [&](auto&& self, StateId s, const std::optional<IntVector>& loc) -> bool {
      const std::size_t b = block_of(s);
      const bool trivial = block_edges[b].empty();
      std::vector<long long> key{static_cast<long long>(s), loc ? 1 : 0};
      key.insert(key.end(), remaining.begin(), remaining.end());
      if (loc)
        for (Eigen::Index j = 0; j < d; ++j) key.push_back((*loc)(j).to_int64());
      if (dead.count(key)) return true;
      const std::size_t before = count;

      bool done = std::all_of(remaining.begin(), remaining.end(), [](long long r) { return r == 0; });
      if (done && block_of(c.exit) == b) {
        bool fits = true;
        if (loc && trivial)
          for (Eigen::Index j = 0; j < d; ++j)
            if (!c.v.is_omega(j) && c.v.value(j) != (*loc)(j)) fits = false;
        if (fits) {
          segs.push_back(Seg{b, s, c.exit});
          bool go = emit();
          segs.pop_back();
          if (!go) return false;
        }
      }
      for (std::size_t k = 0; k < bounded_edges.size(); ++k) {
        if (remaining[k] == 0) continue;
        const Transition& tr = g.transition(bounded_edges[k]);
        if (block_of(tr.source) != b) continue;
        std::optional<IntVector> next;
        if (loc && trivial) {
          next = *loc + tr.delta;
          if (!all_nonnegative(*next)) continue;
        }
        --remaining[k];
        segs.push_back(Seg{b, s, tr.source});
        conns.push_back(tr.id);
        bool go = self(self, tr.target, next);
        conns.pop_back();
        segs.pop_back();
        ++remaining[k];
        if (!go) return false;
      }
      if (count == before) dead.insert(std::move(key));
      return true;
    };
    std::optional<IntVector> start;
    if (c.u.is_finite()) start = c.u.finite_part();
    if (!dfs(dfs, c.entry, start)) return count;
  }
  return count;
}

std::vector<KlmSequence> decompose_bounded(const KlmSequence& xi, std::size_t i, const SolveLimits& limits) {
  KlmAnalysis a = analyze(xi, limits);
  std::vector<KlmSequence> out;
  decompose_bounded(xi, i, a, [&](const KlmSequence& b) {
    out.push_back(b);
    return true;
  });
  return out;
}

bool Coverability::covers(StateId s, const ExtVector& w) const {
  for (const auto& [state, label] : labels) {
    if (state != s) continue;
    bool ok = true;
    for (Eigen::Index j = 0; j < w.dim() && ok; ++j)
      if (!w.is_omega(j) && !label.is_omega(j) && label.value(j) < w.value(j)) ok = false;
    if (ok) return true;
  }
  return false;
}

Coverability karp_miller(const VassGraph& g, StateId s, const ExtVector& u, std::size_t node_cap) {
  struct Node {
    StateId state;
    ExtVector label;
    std::size_t parent;
  };
  std::vector<Node> nodes{{s, u, kNone}};
  std::vector<std::size_t> work{0};
  std::unordered_set<std::string> expanded;
  const Eigen::Index d = g.dim();
  while (!work.empty()) {
    const std::size_t n = work.back();
    work.pop_back();
    // a node equal to one already expanded adds nothing: its own successors were
    // generated there, and acceleration only raises labels
    if (!expanded.insert(std::to_string(nodes[n].state) + nodes[n].label.to_string()).second) continue;
    for (TransitionId t : g.out_edges(nodes[n].state)) {
      const Transition& tr = g.transition(t);
      ExtVector label = nodes[n].label.plus(tr.delta);
      bool ok = true;
      for (Eigen::Index j = 0; j < d && ok; ++j)
        if (!label.is_omega(j) && label.value(j).is_negative()) ok = false;
      if (!ok) continue;
      // accelerate over strictly smaller ancestors at the same state
      for (std::size_t a = n; a != kNone; a = nodes[a].parent) {
        if (nodes[a].state != tr.target || !covered_by(nodes[a].label, label) || nodes[a].label == label) continue;
        for (Eigen::Index j = 0; j < d; ++j)
          if (!nodes[a].label.is_omega(j) && !label.is_omega(j) && nodes[a].label.value(j) < label.value(j))
            label.set_omega(j);
      }
      nodes.push_back(Node{tr.target, std::move(label), n});
      if (nodes.size() > node_cap) throw ResourceLimit("coverability node cap exceeded");
      work.push_back(nodes.size() - 1);
    }
  }
  Coverability out;
  out.labels.reserve(nodes.size());
  for (auto& n : nodes) out.labels.emplace_back(n.state, std::move(n.label));
  return out;
}

VassGraph reversed(const VassGraph& g) {
  VassGraph r(g.dim());
  for (StateId s = 0; s < g.num_states(); ++s) r.add_state(g.state_name(s), g.state_origin(s));
  for (const auto& t : g.transitions()) r.add_transition(t.target, t.source, -t.delta, t.name, t.origin);
  return r;
}

namespace {

// Target strictly above x on its finite, non-ignored entries; nullopt when there is none.
std::optional<ExtVector> pump_target(const ExtVector& x, const std::vector<bool>& ignore) {
  ExtVector w = ExtVector::omegas(x.dim());
  bool any = false;
  for (Eigen::Index j = 0; j < x.dim(); ++j) {
    if (x.is_omega(j) || ignore[static_cast<std::size_t>(j)]) continue;
    w.set(j, x.value(j) + Integer(1));
    any = true;
  }
  if (!any) return std::nullopt;
  return w;
}

std::vector<Eigen::Index> stuck_dims(const Coverability& cov, StateId s, const ExtVector& x,
                                     const std::vector<bool>& ignore) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index j = 0; j < x.dim(); ++j) {
    if (x.is_omega(j) || ignore[static_cast<std::size_t>(j)]) continue;
    bool exceeded = false;
    for (const auto& [state, label] : cov.labels)
      if (state == s && (label.is_omega(j) || label.value(j) > x.value(j))) exceeded = true;
    if (!exceeded) out.push_back(j);
  }
  return out;
}

}  // namespace

PumpResult pumpable(const KlmComponent& c, const std::vector<bool>& ignore_in, std::size_t node_cap) {
  if (!c.is_graph()) throw PreconditionUnmet("pumpability is defined for graph components");
  const auto ignore = or_default(ignore_in, c.dim());
  if (auto w = pump_target(c.u, ignore)) {
    Coverability cov = karp_miller(*c.graph, c.entry, c.u, node_cap);
    if (!cov.covers(c.entry, *w)) return {PumpStatus::NotForward, stuck_dims(cov, c.entry, c.u, ignore)};
  }
  if (auto w = pump_target(c.v, ignore)) {
    VassGraph r = reversed(*c.graph);
    Coverability cov = karp_miller(r, c.exit, c.v, node_cap);
    if (!cov.covers(c.exit, *w)) return {PumpStatus::NotBackward, stuck_dims(cov, c.exit, c.v, ignore)};
  }
  return {PumpStatus::Pumpable, {}};
}

Path find_pump(const VassGraph& g, StateId s, const ExtVector& u, const std::vector<bool>& ignore_in,
               long long box_cap, std::size_t node_cap) {
  const auto ignore = or_default(ignore_in, g.dim());
  std::vector<Eigen::Index> dims;  // tracked: finite entries of u
  for (Eigen::Index j = 0; j < u.dim(); ++j)
    if (!u.is_omega(j)) dims.push_back(j);
  std::vector<long long> start;
  long long top = 1;
  for (Eigen::Index j : dims) {
    start.push_back(u.value(j).to_int64());
    top = std::max(top, start.back());
  }
  auto accepting = [&](StateId st, const std::vector<long long>& xs) {
    if (st != s) return false;
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (!ignore[static_cast<std::size_t>(dims[k])] && xs[k] <= start[k]) return false;
    return true;
  };
  for (long long box = 2 * top + 2; box <= box_cap; box *= 2) {
    struct Node {
      StateId state;
      std::vector<long long> xs;
      std::size_t parent;
      TransitionId via;
    };
    std::vector<Node> nodes{{s, start, kNone, 0}};
    std::map<std::pair<StateId, std::vector<long long>>, std::size_t> seen{{{s, start}, 0}};
    bool clipped = false;
    for (std::size_t head = 0; head < nodes.size(); ++head) {
      for (TransitionId t : g.out_edges(nodes[head].state)) {
        const Transition& tr = g.transition(t);
        std::vector<long long> xs = nodes[head].xs;
        bool ok = true;
        for (std::size_t k = 0; k < dims.size() && ok; ++k) {
          xs[k] += tr.delta(dims[k]).to_int64();
          if (xs[k] < 0) ok = false;
          if (xs[k] > box) {
            ok = false;
            clipped = true;
          }
        }
        if (!ok) continue;
        if (accepting(tr.target, xs)) {
          Path p{t};
          for (std::size_t n = head; nodes[n].parent != kNone; n = nodes[n].parent) p.push_back(nodes[n].via);
          std::reverse(p.begin(), p.end());
          return p;
        }
        if (!seen.emplace(std::make_pair(tr.target, xs), nodes.size()).second) continue;
        nodes.push_back(Node{tr.target, std::move(xs), head, t});
        if (nodes.size() > node_cap) throw ResourceLimit("pump search node cap exceeded");
      }
    }
    if (!clipped) break;
  }
  throw ResourceLimit("no pumping cycle found within the search box");
}

std::optional<BoundedDim> bounded_dim(const Coverability& cov, const ExtVector& start,
                                      const std::vector<bool>& ignore_in) {
  const auto ignore = or_default(ignore_in, start.dim());
  std::optional<BoundedDim> best;
  for (Eigen::Index j = 0; j < start.dim(); ++j) {
    if (start.is_omega(j) || ignore[static_cast<std::size_t>(j)]) continue;
    bool unbounded = false;
    Integer top = start.value(j);
    for (const auto& [state, label] : cov.labels) {
      if (label.is_omega(j)) {
        unbounded = true;
        break;
      }
      top = max(top, label.value(j));
    }
    if (unbounded) continue;
    if (!best || top < best->bound) best = BoundedDim{j, top};
  }
  return best;
}

std::vector<KlmComponent> reduce(const KlmComponent& c, Eigen::Index i, const Integer& bound) {
  if (!c.is_graph()) throw PreconditionUnmet("reduction needs a graph component");
  if (bound.is_negative()) throw std::invalid_argument("negative band bound");
  const VassGraph& g = *c.graph;
  const long long top = bound.to_int64();
  const auto levels = static_cast<std::size_t>(top + 1);
  auto band = std::make_shared<VassGraph>(g.dim());
  for (StateId s = 0; s < g.num_states(); ++s)
    for (std::size_t lv = 0; lv < levels; ++lv)
      band->add_state(g.state_name(s) + "_" + std::to_string(lv), g.state_origin(s));
  auto state = [&](StateId s, long long lv) { return s * levels + static_cast<std::size_t>(lv); };
  for (const auto& t : g.transitions()) {
    const long long step = t.delta(i).to_int64();
    for (long long lv = 0; lv <= top; ++lv) {
      long long to = lv + step;
      if (to < 0 || to > top) continue;
      band->add_transition(state(t.source, lv), state(t.target, to), t.delta, t.name + "@" + std::to_string(lv),
                           t.origin);
    }
  }
  auto choices = [&](const ExtVector& x) {
    std::vector<long long> out;
    if (!x.is_omega(i)) {
      if (x.value(i) <= bound) out.push_back(x.value(i).to_int64());
      return out;
    }
    for (long long lv = 0; lv <= top; ++lv) out.push_back(lv);
    return out;
  };
  std::vector<KlmComponent> out;
  for (long long in : choices(c.u))
    for (long long at : choices(c.v))
      out.push_back(KlmComponent::of_graph(band, state(c.entry, in), state(c.exit, at), with_entry(c.u, i, in),
                                           with_entry(c.v, i, at)));
  return out;
}

std::vector<KlmSequence> reduce(const KlmSequence& xi, std::size_t k, Eigen::Index i, const Integer& bound) {
  std::vector<KlmSequence> out;
  for (auto& c : reduce(xi.components.at(k), i, bound)) out.push_back(splice(xi, k, {std::move(c)}, {}));
  return out;
}

std::optional<KlmSequence> prune_rigid(const KlmSequence& xi) {
  KlmSequence out = xi;
  bool changed = false;
  for (auto& c : out.components) {
    if (!c.is_graph() || !is_strongly_connected(*c.graph)) continue;
    const VassGraph& g = *c.graph;
    std::vector<bool> rigid = rigid_dims(g);
    SccDecomposition scc = scc_condense(g);
    Potentials pots = scc_potentials(g, scc);
    std::vector<bool> bad(g.num_states(), false);
    for (Eigen::Index j = 0; j < g.dim(); ++j) {
      if (!rigid[static_cast<std::size_t>(j)]) continue;
      std::optional<Integer> base;  // value minus potential, the same at every state
      if (!c.u.is_omega(j)) {
        base = c.u.value(j) - pots.pot[c.entry](j);
      } else if (!c.v.is_omega(j)) {
        base = c.v.value(j) - pots.pot[c.exit](j);
      }
      if (!base) continue;
      for (StateId s = 0; s < g.num_states(); ++s)
        if ((*base + pots.pot[s](j)).is_negative()) bad[s] = true;
    }
    std::vector<TransitionId> kept;
    for (const auto& t : g.transitions())
      if (!bad[t.source] && !bad[t.target]) kept.push_back(t.id);
    if (kept.size() == g.num_transitions()) continue;
    Induced sub = induced(g, all_states(g), kept);
    c.graph = sub.graph;
    changed = true;
  }
  if (!changed) return std::nullopt;
  return out;
}

RankVector klm_rank(const KlmSequence& xi) {
  RankVector r(static_cast<std::size_t>(xi.dim()));
  for (const auto& c : xi.components)
    if (c.is_graph()) r += rank(*c.graph);
  return r;
}

bool is_3normal(const KlmSequence& xi, const KlmAnalysis& a, std::size_t node_cap) {
  if (!a.satisfiable()) return false;
  for (std::size_t k = 0; k < xi.components.size(); ++k) {
    const auto& c = xi.components[k];
    if (!c.is_graph()) continue;
    if (!is_strongly_connected(*c.graph) || !component_saturated(xi, a, k) || a.component_bounded(k)) return false;
    if (pumpable(c, rigid_dims(*c.graph), node_cap).status != PumpStatus::Pumpable) return false;
  }
  return true;
}

bool is_3normal(const KlmSequence& xi, const SolveLimits& limits) { return is_3normal(xi, analyze(xi, limits)); }

Path euler_path(const VassGraph& g, StateId from, StateId to, const std::vector<Integer>& counts) {
  std::vector<long long> left;
  long long total = 0;
  for (const auto& c : counts) {
    if (c.is_negative() || !c.fits_int64()) throw InternalInconsistency("edge count out of range");
    left.push_back(c.to_int64());
    total += left.back();
  }
  std::vector<std::size_t> next(g.num_states(), 0);
  std::vector<std::pair<StateId, TransitionId>> stack{{from, kNone}};
  Path out;
  out.reserve(static_cast<std::size_t>(total));
  while (!stack.empty()) {
    StateId s = stack.back().first;
    const auto& outs = g.out_edges(s);
    while (next[s] < outs.size() && left[outs[next[s]]] == 0) ++next[s];
    if (next[s] < outs.size()) {
      TransitionId t = outs[next[s]];
      --left[t];
      stack.emplace_back(g.transition(t).target, t);
    } else {
      if (stack.back().second != kNone) out.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  std::reverse(out.begin(), out.end());
  bool ok = static_cast<long long>(out.size()) == total && is_chained(g, out);
  if (ok && !out.empty()) ok = g.transition(out.front()).source == from && g.transition(out.back()).target == to;
  if (ok && out.empty()) ok = from == to;
  if (!ok) throw InternalInconsistency("edge counts admit no Euler path");
  return out;
}

Witness witness_from_normal(const KlmSequence& xi, const KlmAnalysis& a, const WitnessOptions& opts) {
  if (!is_3normal(xi, a, opts.node_cap)) throw PreconditionUnmet("sequence is not 3-normal");
  const IntVector& base = a.solutions.representatives.front();
  const IntVector& h0 = a.solutions.h0;
  const std::size_t n = xi.components.size();
  auto at = [](const IntVector& v, std::size_t var) { return v(static_cast<Eigen::Index>(var)); };

  struct Pumps {
    Path forward;
    Path backward;
  };
  std::vector<Pumps> pumps(n);
  Integer mult(1);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& c = xi.components[k];
    if (!c.is_graph()) continue;
    const VassGraph& g = *c.graph;
    std::vector<bool> rigid = rigid_dims(g);
    if (pump_target(c.u, rigid)) pumps[k].forward = find_pump(g, c.entry, c.u, rigid);
    if (pump_target(c.v, rigid)) {
      Path back = find_pump(reversed(g), c.exit, c.v, rigid);
      std::reverse(back.begin(), back.end());
      pumps[k].backward = back;
    }
    IntVector pf = parikh_vector(g, pumps[k].forward);
    IntVector pb = parikh_vector(g, pumps[k].backward);
    for (Eigen::Index t = 0; t < pf.size(); ++t) mult = max(mult, pf(t) + pb(t) + Integer(1));
    mult = max(mult, max_abs(displacement(g, pumps[k].forward)) + max_abs(displacement(g, pumps[k].backward)) +
                         Integer(1));
  }

  const Integer shift0(1);
  for (unsigned doubling = 0; doubling < opts.max_doublings; ++doubling) {
    const std::size_t r = std::size_t{1} << doubling;
    const Integer scale = shift0 + Integer(r) * mult;
    IntVector sol = base + h0 * scale;
    Witness w;
    const auto& first = xi.components.front();
    w.start_state = first.graph->state_origin(first.entry);
    const auto& last = xi.components.back();
    w.end_state = last.graph->state_origin(last.exit);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& c = xi.components[k];
      const auto& blk = a.sys.blocks[k];
      const VassGraph& g = *c.graph;
      IntVector x(xi.dim());
      IntVector y(xi.dim());
      for (Eigen::Index j = 0; j < xi.dim(); ++j) {
        x(j) = at(sol, blk.x[static_cast<std::size_t>(j)]);
        y(j) = at(sol, blk.y[static_cast<std::size_t>(j)]);
      }
      Path local;
      if (!c.is_graph()) {
        IntVector values = sol.segment(static_cast<Eigen::Index>(blk.offset),
                                       static_cast<Eigen::Index>(blk.layout->num_vars));
        local = extract_walk(*c.scheme, decode_solution(*blk.layout, values));
      } else {
        IntVector pf = parikh_vector(g, pumps[k].forward);
        IntVector pb = parikh_vector(g, pumps[k].backward);
        std::vector<Integer> middle;
        std::vector<Integer> balance;
        for (TransitionId t = 0; t < g.num_transitions(); ++t) {
          const Integer h = at(h0, blk.phi[t]);
          middle.push_back(at(base, blk.phi[t]) + shift0 * h);
          balance.push_back(mult * h - pf(static_cast<Eigen::Index>(t)) - pb(static_cast<Eigen::Index>(t)));
        }
        const std::size_t est = r * (pumps[k].forward.size() + pumps[k].backward.size());
        if (est > opts.max_length) throw ResourceLimit("witness exceeds the length cap");
        Path varpi = euler_path(g, c.entry, c.exit, middle);
        Path theta = euler_path(g, c.exit, c.exit, balance);
        if (est + varpi.size() + r * theta.size() > opts.max_length)
          throw ResourceLimit("witness exceeds the length cap");
        local = repeat(pumps[k].forward, r);
        local.insert(local.end(), varpi.begin(), varpi.end());
        Path thetas = repeat(theta, r);
        local.insert(local.end(), thetas.begin(), thetas.end());
        Path backs = repeat(pumps[k].backward, r);
        local.insert(local.end(), backs.begin(), backs.end());
      }
      if (k == 0) w.start = x;
      w.entries.push_back(x);
      w.exits.push_back(y);
      for (TransitionId t : local) w.transitions.push_back(g.transition(t).origin);
      w.segment_end.push_back(w.transitions.size());
      if (k + 1 < n) w.transitions.push_back(xi.connectors[k].origin);
      if (w.transitions.size() > opts.max_length) throw ResourceLimit("witness exceeds the length cap");
      w.end = y;
    }
    try {
      validate_witness(xi, w);
      return w;
    } catch (const InternalInconsistency&) {
      // too few repetitions; double and retry
    }
  }
  throw InternalInconsistency("no repetition count validated the witness");
}

void validate_witness(const KlmSequence& xi, const Witness& w) {
  const VassGraph& root = *xi.root;
  const std::size_t n = xi.components.size();
  require(w.entries.size() == n && w.exits.size() == n && w.segment_end.size() == n, "witness shape mismatch");
  ZConfiguration cur{w.start_state, w.start};
  std::size_t pos = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& c = xi.components[k];
    require(cur.state == c.graph->state_origin(c.entry) && cur.location == w.entries[k], "segment entry mismatch");
    require(sqsubseteq(ExtVector(w.entries[k]), c.u), "entry location violates u");
    for (; pos < w.segment_end[k]; ++pos) {
      require(root.transition(w.transitions.at(pos)).source == cur.state, "witness does not chain");
      cur = step(root, cur, w.transitions[pos]);
      require(all_nonnegative(cur.location), "witness leaves N^d");
    }
    require(cur.state == c.graph->state_origin(c.exit) && cur.location == w.exits[k], "segment exit mismatch");
    require(sqsubseteq(ExtVector(w.exits[k]), c.v), "exit location violates v");
    if (k + 1 < n) {
      require(w.transitions.at(pos) == xi.connectors[k].origin, "connector missing from witness");
      require(root.transition(w.transitions[pos]).source == cur.state, "witness does not chain");
      cur = step(root, cur, w.transitions[pos]);
      require(all_nonnegative(cur.location), "witness leaves N^d");
      ++pos;
    }
  }
  require(pos == w.transitions.size(), "witness has trailing transitions");
  require(cur.state == w.end_state && cur.location == w.end, "witness end mismatch");
  Configuration end =
      run_path(root, Configuration{w.start_state, ExtVector(w.start)}, w.transitions, Domain::Naturals);
  require(end.state == w.end_state && end.location == ExtVector(w.end), "witness does not replay");
}

bool within_size_bound(const Witness& w, const KlmSequence& xi, double C) {
  if (w.transitions.size() <= 1) return true;
  const Integer size = xi.size();
  return std::log2(static_cast<double>(w.transitions.size())) <= C * size.to_double() * size.log2_abs();
}

}  // namespace vass
