#include "vass/structure.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace vass {

SccDecomposition scc_condense(const VassGraph& g) {
  const std::size_t n = g.num_states();
  std::vector<std::size_t> index(n, kNone);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  std::vector<std::vector<StateId>> found;
  std::size_t counter = 0;

  // Iterative Tarjan: frames hold (state, next out-edge position).
  for (StateId root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    std::vector<std::pair<StateId, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [s, pos] = frames.back();
      const auto& outs = g.out_edges(s);
      if (pos < outs.size()) {
        StateId w = g.transition(outs[pos++]).target;
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[s] = std::min(low[s], index[w]);
        }
        continue;
      }
      if (low[s] == index[s]) {
        std::vector<StateId> comp;
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != s);
        std::sort(comp.begin(), comp.end());
        found.push_back(std::move(comp));
      }
      StateId done = s;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
    }
  }

  SccDecomposition out;
  out.components.assign(found.rbegin(), found.rend());
  out.component_of.assign(n, 0);
  for (std::size_t c = 0; c < out.components.size(); ++c)
    for (StateId s : out.components[c]) out.component_of[s] = c;
  out.internal_edges.resize(out.components.size());
  out.outgoing_edges.resize(out.components.size());
  for (const auto& t : g.transitions()) {
    std::size_t a = out.component_of[t.source];
    std::size_t b = out.component_of[t.target];
    if (a == b) {
      out.internal_edges[a].push_back(t.id);
    } else {
      out.outgoing_edges[a].push_back(t.id);
    }
  }
  return out;
}

bool is_strongly_connected(const VassGraph& g) { return g.num_states() > 0 && scc_condense(g).size() == 1; }

Potentials scc_potentials(const VassGraph& g, const SccDecomposition& scc) {
  Potentials p;
  p.pot.assign(g.num_states(), IntVector::Zero(g.dim()));
  p.root.assign(g.num_states(), kNone);
  for (std::size_t c = 0; c < scc.size(); ++c) {
    StateId root = scc.components[c].front();
    p.root[root] = root;
    std::deque<StateId> queue{root};
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      for (TransitionId t : g.out_edges(s)) {
        const Transition& tr = g.transition(t);
        if (scc.component_of[tr.target] != c || p.root[tr.target] != kNone) continue;
        p.root[tr.target] = root;
        p.pot[tr.target] = p.pot[s] + tr.delta;
        queue.push_back(tr.target);
      }
    }
  }
  return p;
}

namespace {

std::vector<CycleSpace> per_component_spaces(const VassGraph& g, const SccDecomposition& scc) {
  Potentials p = scc_potentials(g, scc);
  std::vector<CycleSpace> spaces(scc.size());
  for (std::size_t c = 0; c < scc.size(); ++c) {
    std::vector<IntVector> chords;
    for (TransitionId t : scc.internal_edges[c]) {
      const Transition& tr = g.transition(t);
      chords.push_back(p.pot[tr.source] + tr.delta - p.pot[tr.target]);
    }
    spaces[c].basis = span_basis(chords, g.dim());
  }
  return spaces;
}

}  // namespace

CycleSpace cycle_space(const VassGraph& g) {
  SccDecomposition scc = scc_condense(g);
  std::vector<IntVector> all;
  for (auto& s : per_component_spaces(g, scc)) all.insert(all.end(), s.basis.begin(), s.basis.end());
  return CycleSpace{span_basis(all, g.dim())};
}

CycleSpace edge_cycle_space(const VassGraph& g, TransitionId t) {
  SccDecomposition scc = scc_condense(g);
  const Transition& tr = g.transition(t);
  std::size_t c = scc.component_of[tr.source];
  if (c != scc.component_of[tr.target]) return CycleSpace{};
  // Inside a strongly connected component every cycle can be routed through t,
  // so V_G(t) is the component's cycle space.
  return per_component_spaces(g, scc)[c];
}

std::size_t edge_cycle_dim(const VassGraph& g, TransitionId t) { return edge_cycle_space(g, t).dim(); }

std::size_t RankVector::total() const {
  std::size_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

std::string RankVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = counts.size(); k-- > 0;) {
    os << counts[k];
    if (k > 0) os << ',';
  }
  os << ')';
  return os.str();
}

RankVector& RankVector::operator+=(const RankVector& o) {
  if (o.counts.size() > counts.size()) counts.resize(o.counts.size(), 0);
  for (std::size_t k = 0; k < o.counts.size(); ++k) counts[k] += o.counts[k];
  return *this;
}

std::strong_ordering operator<=>(const RankVector& a, const RankVector& b) {
  std::size_t n = std::max(a.counts.size(), b.counts.size());
  for (std::size_t k = n; k-- > 0;) {
    std::size_t x = k < a.counts.size() ? a.counts[k] : 0;
    std::size_t y = k < b.counts.size() ? b.counts[k] : 0;
    if (x != y) return x <=> y;
  }
  return std::strong_ordering::equal;
}

RankVector rank(const VassGraph& g) {
  SccDecomposition scc = scc_condense(g);
  std::vector<CycleSpace> spaces = per_component_spaces(g, scc);
  RankVector r(static_cast<std::size_t>(g.dim()));
  for (const auto& t : g.transitions()) {
    std::size_t a = scc.component_of[t.source];
    std::size_t k = a == scc.component_of[t.target] ? spaces[a].dim() : 0;
    r.counts[k] += 1;
  }
  return r;
}

std::vector<bool> rigid_dims(const VassGraph& g) {
  CycleSpace v = cycle_space(g);
  std::vector<bool> rigid(static_cast<std::size_t>(g.dim()), true);
  for (const auto& b : v.basis)
    for (Eigen::Index i = 0; i < g.dim(); ++i)
      if (!b(i).is_zero()) rigid[static_cast<std::size_t>(i)] = false;
  return rigid;
}

}  // namespace vass
