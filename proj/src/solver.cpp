#include "vass/solver.hpp"

#include "vass/errors.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_map>

namespace vass {

std::string to_string(Decision d) {
  switch (d) {
    case Decision::Reachable:
      return "Reachable";
    case Decision::UnreachableProven:
      return "UnreachableProven";
    case Decision::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::vector<std::optional<Integer>> invariant_bounds(const VassGraph& g, const IntVector& m, const IntVector& n) {
  const auto d = static_cast<std::size_t>(g.dim());
  std::vector<std::optional<Integer>> bound(d);
  std::vector<int> w(d, 0);
  auto consider = [&]() {
    bool nonpos = true;
    bool nonneg = true;
    for (const auto& t : g.transitions()) {
      Integer s(0);
      for (std::size_t i = 0; i < d; ++i) s += Integer(w[i]) * t.delta(static_cast<Eigen::Index>(i));
      nonpos = nonpos && !s.is_positive();
      nonneg = nonneg && !s.is_negative();
    }
    auto dot = [&](const IntVector& x) {
      Integer s(0);
      for (std::size_t i = 0; i < d; ++i) s += Integer(w[i]) * x(static_cast<Eigen::Index>(i));
      return s;
    };
    std::optional<Integer> total;
    if (nonpos) total = dot(m);
    if (nonneg) total = total ? min(*total, dot(n)) : dot(n);
    if (!total) return;
    for (std::size_t i = 0; i < d; ++i) {
      if (w[i] == 0) continue;
      Integer b = floor_div(*total, Integer(w[i]));
      if (!bound[i] || b < *bound[i]) bound[i] = b;
    }
  };
  // odometer over {0..3}^d without the zero vector
  while (true) {
    std::size_t k = 0;
    while (k < d && w[k] == 3) w[k++] = 0;
    if (k == d) break;
    ++w[k];
    consider();
  }
  return bound;
}

OracleResult bfs_oracle(const VassGraph& g, StateId p, const IntVector& m, StateId q, const IntVector& n,
                        long long box, std::size_t state_cap) {
  if (box < 0) throw std::invalid_argument("negative oracle box");
  const auto d = static_cast<std::size_t>(g.dim());
  const auto side = static_cast<unsigned long long>(box) + 1;
  double cells = static_cast<double>(g.num_states());
  for (std::size_t i = 0; i < d; ++i) cells *= static_cast<double>(side);
  if (cells > 1.8e19) throw PreconditionUnmet("oracle box too large to index");

  OracleResult out;
  auto bounds = invariant_bounds(g, m, n);
  out.exact = std::all_of(bounds.begin(), bounds.end(),
                          [&](const std::optional<Integer>& b) { return b && *b <= Integer(box); });

  auto inside = [&](const IntVector& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i).is_negative() || x(i) > Integer(box)) return false;
    return true;
  };
  if (!inside(m) || !inside(n)) return out;

  using Key = unsigned long long;
  auto encode = [&](StateId s, const std::vector<long long>& xs) {
    Key k = s;
    for (long long x : xs) k = k * side + static_cast<Key>(x);
    return k;
  };
  std::vector<long long> start(d);
  std::vector<long long> goal(d);
  for (std::size_t i = 0; i < d; ++i) {
    start[i] = m(static_cast<Eigen::Index>(i)).to_int64();
    goal[i] = n(static_cast<Eigen::Index>(i)).to_int64();
  }
  const Key goal_key = encode(q, goal);
  struct Entry {
    Key parent;
    TransitionId via;
  };
  std::unordered_map<Key, Entry> parent;
  std::deque<std::pair<StateId, std::vector<long long>>> queue;
  const Key start_key = encode(p, start);
  parent.emplace(start_key, Entry{start_key, kNone});
  queue.emplace_back(p, start);
  bool found = start_key == goal_key;
  while (!queue.empty() && !found) {
    auto [s, xs] = std::move(queue.front());
    queue.pop_front();
    const Key here = encode(s, xs);
    for (TransitionId t : g.out_edges(s)) {
      const Transition& tr = g.transition(t);
      std::vector<long long> next = xs;
      bool ok = true;
      for (std::size_t i = 0; i < d && ok; ++i) {
        next[i] += tr.delta(static_cast<Eigen::Index>(i)).to_int64();
        ok = next[i] >= 0 && next[i] <= box;
      }
      if (!ok) continue;
      const Key key = encode(tr.target, next);
      if (!parent.emplace(key, Entry{here, t}).second) continue;
      if (parent.size() > state_cap) throw ResourceLimit("oracle state cap exceeded");
      if (key == goal_key) {
        found = true;
        break;
      }
      queue.emplace_back(tr.target, std::move(next));
    }
  }
  out.states_explored = parent.size();
  if (!found) return out;
  Path walk;
  for (Key k = goal_key; k != start_key;) {
    const Entry& e = parent.at(k);
    walk.push_back(e.via);
    k = e.parent;
  }
  std::reverse(walk.begin(), walk.end());
  out.reachable = true;
  out.exact = true;
  out.walk = std::move(walk);
  return out;
}

namespace {

enum class Outcome { Found, Refuted, Unknown };

class Explorer {
 public:
  Explorer(const SolverConfig& cfg, std::size_t tower_limit, SolverStats& stats)
      : cfg_(cfg), tower_limit_(tower_limit), stats_(stats), rng_(cfg.seed) {}

  std::optional<Witness> witness;

  Outcome explore(const KlmSequence& xi, std::size_t depth, std::size_t tower) {
    ++stats_.nodes;
    if (speculative_) {
      if (++spec_nodes_ > cfg_.lps_speculative_nodes) return Outcome::Unknown;
    } else if (++exact_nodes_ > cfg_.max_nodes) {
      return cap("node cap");
    }
    if (depth > cfg_.max_depth) return cap("depth cap");
    stats_.max_size_log2 = std::max(stats_.max_size_log2, xi.size().log2_abs());
    try {
      return step(xi, depth, tower);
    } catch (const ResourceLimit& e) {
      return cap(e.what());
    }
  }

 private:
  const SolverConfig& cfg_;
  std::size_t tower_limit_;
  SolverStats& stats_;
  std::mt19937_64 rng_;
  bool speculative_ = false;
  std::size_t spec_nodes_ = 0;
  std::size_t exact_nodes_ = 0;

  Outcome cap(const std::string& reason) {
    if (!speculative_) stats_.cap_reasons.insert(reason);
    return Outcome::Unknown;
  }

  template <class T>
  void order(std::vector<T>& xs) {
    if (cfg_.seed != 0) std::shuffle(xs.begin(), xs.end(), rng_);
  }

  void check_rank(const KlmSequence& child, const RankVector& before) {
    ++stats_.rank_checks;
    if (!(klm_rank(child) < before)) throw InternalInconsistency("rank did not decrease");
  }

  std::size_t next_tower(const KlmComponent& c, std::size_t tower) {
    if (c.effective_dim() < 3) return tower;
    if (tower + 1 > tower_limit_) throw InternalInconsistency("tower depth exceeded twice the transition count");
    stats_.tower_max = std::max(stats_.tower_max, tower + 1);
    return tower + 1;
  }

  Outcome over(std::vector<KlmSequence> branches, std::size_t depth, std::size_t tower) {
    order(branches);
    bool unknown = false;
    for (const auto& b : branches) {
      Outcome o = explore(b, depth + 1, tower);
      if (o == Outcome::Found) return o;
      unknown = unknown || o == Outcome::Unknown;
    }
    return unknown ? Outcome::Unknown : Outcome::Refuted;
  }

  Outcome step(const KlmSequence& xi, std::size_t depth, std::size_t tower) {
    ++stats_.systems_solved;
    if (!find_solution(composite_char_system(xi).system, cfg_.limits)) return Outcome::Refuted;

    for (std::size_t i = 0; i < xi.components.size(); ++i) {
      const auto& c = xi.components[i];
      if (c.is_graph() && !is_strongly_connected(*c.graph)) {
        ++stats_.linearizations;
        return over(linearize(xi, i), depth, tower);
      }
    }

    ++stats_.systems_solved;
    KlmAnalysis a = analyze(xi, cfg_.limits);
    if (!a.satisfiable()) return Outcome::Refuted;
    if (!is_saturated(xi, a)) {
      ++stats_.saturations;
      return over(saturate(xi, a), depth, tower);
    }
    if (auto pruned = prune_rigid(xi)) {
      ++stats_.prunings;
      return explore(*pruned, depth + 1, tower);
    }

    for (std::size_t i = 0; i < xi.components.size(); ++i) {
      const auto& c = xi.components[i];
      if (!c.is_graph() || c.lps_tried) continue;
      const std::size_t nd = c.effective_dim();
      if (nd == 1 || nd == 2) return replace_by_schemes(xi, i, depth, tower);
    }

    for (std::size_t i = 0; i < xi.components.size(); ++i)
      if (xi.components[i].is_graph() && a.component_bounded(i)) return decompose(xi, a, i, depth, tower);

    for (std::size_t i = 0; i < xi.components.size(); ++i) {
      const auto& c = xi.components[i];
      if (!c.is_graph()) continue;
      PumpResult pr = pumpable(c, rigid_dims(*c.graph), cfg_.coverability_cap);
      if (pr.status != PumpStatus::Pumpable) return reduce_component(xi, i, pr.status, depth, tower);
    }

    if (!is_3normal(xi, a, cfg_.coverability_cap)) throw InternalInconsistency("sequence left every step but is not normal");
    ++stats_.normal_sequences;
    Witness w = witness_from_normal(xi, a, cfg_.witness);
    validate_witness(xi, w);
    const bool within = within_size_bound(w, xi, cfg_.witness_c);
    stats_.normals.push_back(NormalRecord{w.transitions.size(), xi.size().log2_abs(), within});
    if (!within) throw InternalInconsistency("witness exceeds the size bound");
    witness = std::move(w);
    return Outcome::Found;
  }

  // Scheme branches can only add witnesses; the fallback, which keeps the graph
  // and decomposes it, decides the outcome on its own.
  Outcome replace_by_schemes(const KlmSequence& xi, std::size_t i, std::size_t depth, std::size_t tower) {
    const KlmComponent c = xi.components[i];
    if (!speculative_) {
      std::vector<LinearPathScheme> schemes;
      enumerate_lps(c.graph, c.entry, c.exit, cfg_.lps_max_length, cfg_.lps_max_cycles,
                    [&](const LinearPathScheme& rho) {
                      schemes.push_back(rho);
                      return schemes.size() < cfg_.lps_max_schemes;
                    });
      order(schemes);
      speculative_ = true;
      spec_nodes_ = 0;
      for (const auto& rho : schemes) {
        if (spec_nodes_ > cfg_.lps_speculative_nodes) break;
        ++stats_.schemes_tried;
        KlmSequence s = xi;
        for (auto& other : s.components) other.lps_tried = true;
        s.components[i] = KlmComponent::of_scheme(rho, c.u, c.v);
        if (explore(s, depth + 1, tower) == Outcome::Found) {
          speculative_ = false;
          return Outcome::Found;
        }
      }
      speculative_ = false;
    }
    KlmSequence fallback = xi;
    fallback.components[i].lps_tried = true;
    return explore(fallback, depth + 1, tower);
  }

  Outcome decompose(const KlmSequence& xi, const KlmAnalysis& a, std::size_t i, std::size_t depth,
                    std::size_t tower) {
    const std::size_t t = next_tower(xi.components[i], tower);
    const RankVector before = klm_rank(xi);
    bool unknown = false;
    bool found = false;
    auto visit = [&](const KlmSequence& b) {
      ++stats_.decompositions;
      check_rank(b, before);
      Outcome o = explore(b, depth + 1, t);
      if (o == Outcome::Found) {
        found = true;
        return false;
      }
      unknown = unknown || o == Outcome::Unknown;
      return true;
    };
    try {
      if (cfg_.seed == 0) {
        decompose_bounded(xi, i, a, visit, cfg_.max_branches);
      } else {
        std::vector<KlmSequence> all;
        decompose_bounded(
            xi, i, a,
            [&](const KlmSequence& b) {
              all.push_back(b);
              return true;
            },
            cfg_.max_branches);
        order(all);
        for (const auto& b : all)
          if (!visit(b)) break;
      }
    } catch (const ResourceLimit& e) {
      if (found) return Outcome::Found;
      cap(e.what());
      return Outcome::Unknown;
    }
    if (found) return Outcome::Found;
    return unknown ? Outcome::Unknown : Outcome::Refuted;
  }

  Outcome reduce_component(const KlmSequence& xi, std::size_t k, PumpStatus status, std::size_t depth,
                           std::size_t tower) {
    const KlmComponent& c = xi.components[k];
    const std::vector<bool> rigid = rigid_dims(*c.graph);
    const bool forward = status == PumpStatus::NotForward;
    Coverability cov = forward ? karp_miller(*c.graph, c.entry, c.u, cfg_.coverability_cap)
                               : karp_miller(reversed(*c.graph), c.exit, c.v, cfg_.coverability_cap);
    auto bd = bounded_dim(cov, forward ? c.u : c.v, rigid);
    if (!bd) return cap("no bounded coordinate to reduce along");
    if (bd->bound > Integer(cfg_.band_cap)) return cap("band cap");
    const std::size_t t = next_tower(c, tower);
    const RankVector before = klm_rank(xi);
    std::vector<KlmSequence> branches = reduce(xi, k, bd->dim, bd->bound);
    for (const auto& b : branches) check_rank(b, before);
    stats_.reductions += branches.size();
    return over(std::move(branches), depth, t);
  }
};

Witness plain_witness(const Path& walk, StateId p, const IntVector& m, StateId q, const IntVector& n) {
  Witness w;
  w.transitions = walk;
  w.start_state = p;
  w.end_state = q;
  w.start = m;
  w.end = n;
  w.entries = {m};
  w.exits = {n};
  w.segment_end = {walk.size()};
  return w;
}

}  // namespace

ReachResult klmst3(const KlmSequence& xi0, const SolverConfig& cfg) {
  xi0.validate();
  if (!xi0.components.front().u.is_finite()) throw PreconditionUnmet("klmst3 needs a finite start");
  ReachResult r;
  Explorer ex(cfg, 2 * xi0.root->num_transitions(), r.stats);
  switch (ex.explore(xi0, 0, 0)) {
    case Outcome::Found:
      r.decision = Decision::Reachable;
      r.witness = std::move(ex.witness);
      break;
    case Outcome::Refuted:
      r.decision = Decision::UnreachableProven;
      break;
    case Outcome::Unknown:
      r.decision = Decision::Unknown;
      r.bound_relative = true;
      break;
  }
  return r;
}

ReachResult reach3(std::shared_ptr<const VassGraph> g, StateId p, const IntVector& m, StateId q, const IntVector& n,
                   const SolverConfig& cfg) {
  if (g->dim() != 3) throw PreconditionUnmet("reach3 works on 3-VASS");
  if (m.size() != 3 || n.size() != 3 || !all_nonnegative(m) || !all_nonnegative(n))
    throw std::invalid_argument("locations must be in N^3");
  ReachResult r;
  if (p == q && m == n) {
    r.decision = Decision::Reachable;
    r.witness = plain_witness({}, p, m, q, n);
  } else {
    bool decided = false;
    if (cfg.use_eff2d && cycle_space(*g).dim() <= 2) {
      try {
        Eff2dResult e = eff2d_reach(g, p, m, q, n, cfg.eff2d, cfg.limits);
        if (e.found()) {
          r.decision = Decision::Reachable;
          r.witness = plain_witness(*e.walk, p, m, q, n);
          r.via_eff2d = true;
          decided = true;
        }
      } catch (const ResourceLimit&) {
        // fall through to the decomposition
      }
    }
    if (!decided) {
      ReachResult k = klmst3(KlmSequence::single(g, p, ExtVector(m), q, ExtVector(n)), cfg);
      k.via_eff2d = false;
      r = std::move(k);
    }
  }
  if (r.decision == Decision::Reachable) {
    const Witness& w = *r.witness;
    Configuration end = run_path(*g, Configuration{p, ExtVector(m)}, w.transitions, Domain::Naturals);
    if (end.state != q || !(end.location == ExtVector(n))) throw InternalInconsistency("witness does not reach the target");
  }
  if (cfg.cross_check) {
    OracleResult o = bfs_oracle(*g, p, m, q, n, cfg.oracle_box, cfg.oracle_state_cap);
    if (o.reachable && r.decision == Decision::UnreachableProven)
      throw InternalInconsistency("oracle found a walk for a query proven unreachable");
    if (!o.reachable && o.exact && r.decision == Decision::Reachable)
      throw InternalInconsistency("witness contradicts an exact oracle refutation");
    r.oracle = std::move(o);
  }
  return r;
}

}  // namespace vass
