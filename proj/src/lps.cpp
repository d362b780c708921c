#include "vass/lps.hpp"

#include <algorithm>

namespace vass {

LinearPathScheme::LinearPathScheme(std::shared_ptr<const VassGraph> graph, StateId start, std::vector<Path> alphas,
                                   std::vector<Path> betas)
    : graph_(std::move(graph)), start_(start), alphas_(std::move(alphas)), betas_(std::move(betas)) {
  if (!graph_) throw std::invalid_argument("scheme without a graph");
  if (alphas_.size() != betas_.size() + 1) throw std::invalid_argument("a scheme with n cycles needs n + 1 paths");
  if (start_ >= graph_->num_states()) throw std::invalid_argument("scheme start state out of range");
  StateId cur = start_;
  auto walk = [&](const Path& piece, const char* what) {
    for (TransitionId t : piece) {
      if (t >= graph_->num_transitions()) throw std::invalid_argument("transition id out of range");
      const Transition& tr = graph_->transition(t);
      if (tr.source != cur) throw std::invalid_argument(std::string(what) + " does not chain at " + tr.name);
      cur = tr.target;
    }
  };
  for (std::size_t k = 0; k < alphas_.size(); ++k) {
    walk(alphas_[k], "path");
    if (k == betas_.size()) break;
    if (betas_[k].empty()) throw std::invalid_argument("empty cycle in scheme");
    StateId anchor = cur;
    walk(betas_[k], "cycle");
    if (cur != anchor) throw std::invalid_argument("cycle does not return to its anchor");
  }
}

StateId LinearPathScheme::junction(std::size_t k) const {
  StateId cur = start_;
  for (std::size_t i = 0; i <= k; ++i)
    if (!alphas_.at(i).empty()) cur = graph_->transition(alphas_[i].back()).target;
  return cur;
}

StateId LinearPathScheme::end() const { return junction(alphas_.size() - 1); }

std::size_t LinearPathScheme::length() const {
  std::size_t s = 0;
  for (const auto& a : alphas_) s += a.size();
  for (const auto& b : betas_) s += b.size();
  return s;
}

Path LinearPathScheme::instantiate(const std::vector<Integer>& counts, std::size_t max_length) const {
  if (counts.size() != betas_.size()) throw std::invalid_argument("one count per cycle expected");
  Integer total(0);
  for (const auto& a : alphas_) total += Integer(a.size());
  for (std::size_t i = 0; i < betas_.size(); ++i) {
    if (counts[i].is_negative()) throw std::invalid_argument("negative repetition count");
    total += counts[i] * Integer(betas_[i].size());
  }
  if (total > Integer(max_length)) throw ResourceLimit("instantiated path of length " + total.to_string() + " is too long");
  Path out;
  out.reserve(static_cast<std::size_t>(total.to_int64()));
  for (std::size_t k = 0; k < alphas_.size(); ++k) {
    out.insert(out.end(), alphas_[k].begin(), alphas_[k].end());
    if (k == betas_.size()) break;
    for (std::int64_t r = 0; r < counts[k].to_int64(); ++r) out.insert(out.end(), betas_[k].begin(), betas_[k].end());
  }
  return out;
}

namespace {

std::string names(const VassGraph& g, const Path& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) s += ", ";
    s += g.transition(p[i]).name;
  }
  return s + "]";
}

}  // namespace

std::string LinearPathScheme::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < alphas_.size(); ++k) {
    if (k > 0) s += " ; ";
    s += "alpha: " + names(*graph_, alphas_[k]);
    if (k < betas_.size()) s += " ; beta: " + names(*graph_, betas_[k]) + "*";
  }
  return s;
}

std::string LinearPathScheme::to_string(const std::vector<Integer>& counts) const {
  std::string s;
  for (std::size_t k = 0; k < alphas_.size(); ++k) {
    if (k > 0) s += " ; ";
    s += "alpha: " + names(*graph_, alphas_[k]);
    if (k < betas_.size()) s += " ; beta: " + names(*graph_, betas_[k]) + " x " + counts.at(k).to_string();
  }
  return s;
}

Integer PumpConstants::length_bound(const VassGraph& g, unsigned c) {
  return pow(Integer(g.num_states()) + g.norm(), c);
}

PumpConstants PumpConstants::of(const VassGraph& g, unsigned c) {
  PumpConstants k;
  k.c = c;
  k.D = g.max_norm() * length_bound(g, c);
  return k;
}

bool PumpConstants::in_region(const IntVector& m) const {
  Integer low = Integer(2) * D;
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m(i) < low) return false;
  return true;
}

bool is_zigzag_free(const LinearPathScheme& rho, const ZoneSignature& z) {
  for (const auto& b : rho.betas())
    if (!in_zone(displacement(rho.graph(), b), z)) return false;
  return true;
}

std::optional<ZoneSignature> common_zone(const LinearPathScheme& rho) {
  ZoneSignature z;
  const Eigen::Index d = rho.graph().dim();
  z.signs.assign(static_cast<std::size_t>(d), Sign::Ge);
  for (Eigen::Index i = 0; i < d; ++i) {
    bool pos = false;
    bool neg = false;
    for (const auto& b : rho.betas()) {
      Integer v = displacement(rho.graph(), b)(i);
      pos = pos || v.is_positive();
      neg = neg || v.is_negative();
    }
    if (pos && neg) return std::nullopt;
    if (neg) z.signs[static_cast<std::size_t>(i)] = Sign::Le;
  }
  return z;
}

bool zigzag_walk_guarantee(const LinearPathScheme& rho, const IntVector& m, const PumpConstants& k) {
  if (!k.in_region(m)) throw PreconditionUnmet("start location is outside [2D, oo)^d");
  if (!common_zone(rho)) throw PreconditionUnmet("cycle displacements do not share a zone");
  if (Integer(rho.length()) > PumpConstants::length_bound(rho.graph(), k.c)) {
    throw PreconditionUnmet("scheme is longer than (|Q| + |T|)^c");
  }
  return true;
}

namespace {

using Term = DiophantineSystem::Term;

IntVector path_delta(const VassGraph& g, const Path& p, std::size_t from, std::size_t to) {
  IntVector d = IntVector::Zero(g.dim());
  for (std::size_t i = from; i < to; ++i) d += g.transition(p[i]).delta;
  return d;
}

LpsSystem build(const LinearPathScheme& rho) {
  const VassGraph& g = rho.graph();
  const Eigen::Index d = g.dim();
  const std::size_t n = rho.num_cycles();
  LpsSystem out;
  LpsLayout& L = out.layout;
  DiophantineSystem& sys = out.system;
  L.dim = d;
  L.cycles = n;
  for (Eigen::Index i = 0; i < d; ++i) sys.add_variable("x" + std::to_string(i + 1));
  for (Eigen::Index i = 0; i < d; ++i) sys.add_variable("y" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i) sys.add_variable("phi" + std::to_string(i + 1));
  auto block = [&](const std::string& tag) {
    std::size_t base = sys.num_vars();
    for (Eigen::Index i = 0; i < d; ++i) sys.add_variable(tag + "." + std::to_string(i + 1));
    return base;
  };

  std::vector<IntVector> cycle_delta;
  for (const auto& b : rho.betas()) cycle_delta.push_back(path_delta(g, b, 0, b.size()));

  // target = x + sum_{i < cycles_used} phi_i Delta(beta_i) + constant
  auto emit = [&](std::size_t target_base, bool target_is_y, std::size_t cycles_used, const IntVector& constant) {
    for (Eigen::Index j = 0; j < d; ++j) {
      std::vector<Term> terms{{L.x(j), Integer(1)}};
      for (std::size_t i = 0; i < cycles_used; ++i)
        if (!cycle_delta[i](j).is_zero()) terms.emplace_back(L.phi(i), cycle_delta[i](j));
      terms.emplace_back(target_is_y ? L.y(j) : target_base + static_cast<std::size_t>(j), Integer(-1));
      sys.add_row(std::move(terms), -constant(j));
    }
  };

  IntVector alpha_total = IntVector::Zero(d);
  for (const auto& a : rho.alphas()) alpha_total += path_delta(g, a, 0, a.size());
  emit(0, true, n, alpha_total);

  IntVector before = IntVector::Zero(d);  // sum of Delta(alpha_i) for i < k
  L.z1.resize(n + 1);
  L.z2.resize(n);
  L.z3.resize(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const Path& a = rho.alphas()[k];
    for (std::size_t l = 0; l <= a.size(); ++l) {
      std::size_t base = block("z1_" + std::to_string(k) + "_" + std::to_string(l));
      L.z1[k].push_back(base);
      emit(base, false, k, before + path_delta(g, a, 0, l));
    }
    before += path_delta(g, a, 0, a.size());
    if (k == n) break;
    const Path& b = rho.betas()[k];
    for (std::size_t l = 1; l <= b.size(); ++l) {
      std::size_t base = block("z2_" + std::to_string(k + 1) + "_" + std::to_string(l));
      L.z2[k].push_back(base);
      emit(base, false, k, before + path_delta(g, b, 0, l));
    }
    for (std::size_t l = 1; l <= b.size(); ++l) {
      std::size_t base = block("z3_" + std::to_string(k + 1) + "_" + std::to_string(l));
      L.z3[k].push_back(base);
      emit(base, false, k + 1, before - path_delta(g, b, l - 1, b.size()));
    }
  }
  L.num_vars = sys.num_vars();
  return out;
}

void pin(LpsSystem& s, const ExtVector& m, const ExtVector& n) {
  const Eigen::Index d = s.layout.dim;
  if (m.dim() != d || n.dim() != d) throw std::invalid_argument("endpoint constraint has wrong dimension");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!m.is_omega(i)) s.system.fix(s.layout.x(i), m.value(i));
    if (!n.is_omega(i)) s.system.fix(s.layout.y(i), n.value(i));
  }
}

}  // namespace

LpsSystem lps_system(const LinearPathScheme& rho, const ExtVector& m, const ExtVector& n) {
  LpsSystem s = build(rho);
  pin(s, m, n);
  return s;
}

LpsSystem lps_system(const LinearPathScheme& rho) { return build(rho); }

LpsSystem lps_homogeneous_system(const LinearPathScheme& rho, const ExtVector& m, const ExtVector& n) {
  LpsSystem s = lps_system(rho, m, n);
  s.system = s.system.homogeneous();
  return s;
}

LpsSystem lps_homogeneous_system(const LinearPathScheme& rho) {
  LpsSystem s = build(rho);
  s.system = s.system.homogeneous();
  return s;
}

LpsSolution decode_solution(const LpsLayout& layout, const IntVector& values) {
  LpsSolution s;
  s.x.resize(layout.dim);
  s.y.resize(layout.dim);
  for (Eigen::Index i = 0; i < layout.dim; ++i) {
    s.x(i) = values(static_cast<Eigen::Index>(layout.x(i)));
    s.y(i) = values(static_cast<Eigen::Index>(layout.y(i)));
  }
  for (std::size_t i = 0; i < layout.cycles; ++i) s.phi.push_back(values(static_cast<Eigen::Index>(layout.phi(i))));
  return s;
}

IntVector encode_solution(const LinearPathScheme& rho, const LpsLayout& L, const IntVector& x,
                          const std::vector<Integer>& phi, bool homogeneous) {
  const VassGraph& g = rho.graph();
  const Eigen::Index d = L.dim;
  const IntVector none = IntVector::Zero(d);
  // E0 keeps only the cycle terms
  auto step = [&](TransitionId t) -> const IntVector& { return homogeneous ? none : g.transition(t).delta; };
  IntVector v = IntVector::Zero(static_cast<Eigen::Index>(L.num_vars));
  auto put = [&](std::size_t base, const IntVector& loc) {
    for (Eigen::Index j = 0; j < d; ++j) v(static_cast<Eigen::Index>(base) + j) = loc(j);
  };
  put(L.x(0), x);
  for (std::size_t i = 0; i < L.cycles; ++i) v(static_cast<Eigen::Index>(L.phi(i))) = phi[i];
  IntVector cur = x;
  for (std::size_t k = 0; k <= L.cycles; ++k) {
    const Path& a = rho.alphas()[k];
    put(L.z1[k][0], cur);
    for (std::size_t l = 1; l <= a.size(); ++l) {
      cur += step(a[l - 1]);
      put(L.z1[k][l], cur);
    }
    if (k == L.cycles) break;
    const Path& b = rho.betas()[k];
    IntVector lap = cur;
    for (std::size_t l = 1; l <= b.size(); ++l) {
      lap += step(b[l - 1]);
      put(L.z2[k][l - 1], lap);
    }
    cur += path_delta(g, b, 0, b.size()) * phi[k];
    IntVector last = cur;
    for (std::size_t l = b.size(); l >= 1; --l) {
      last -= step(b[l - 1]);
      put(L.z3[k][l - 1], last);
    }
  }
  put(L.y(0), cur);
  return v;
}

Path extract_walk(const LinearPathScheme& rho, const LpsSolution& sol) {
  Path path = rho.instantiate(sol.phi);
  Configuration end;
  try {
    end = run_path(rho.graph(), Configuration{rho.start(), ExtVector(sol.x)}, path, Domain::Naturals);
  } catch (const DomainViolation& e) {
    throw InternalInconsistency(std::string("LPS solution does not induce a walk: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InternalInconsistency(std::string("LPS solution does not induce a walk: ") + e.what());
  }
  if (end.state != rho.end() || !(end.location == ExtVector(sol.y))) {
    throw InternalInconsistency("LPS walk ends at " + end.location.to_string() + " instead of the solved endpoint");
  }
  return path;
}

namespace {

struct Enumerator {
  std::shared_ptr<const VassGraph> g;
  StateId target;
  std::size_t max_cycles;
  const std::function<bool(const LinearPathScheme&)>& visit;
  std::vector<std::size_t> dist{};  // shortest path length to target
  std::size_t count = 0;
  bool stopped = false;

  StateId start = 0;
  std::vector<Path> alphas{{}};
  std::vector<Path> betas{};

  // Closed paths at s of length at most r, in lexicographic order.
  void closed_paths(StateId s, std::size_t r, const std::function<void(const Path&)>& f) {
    Path cur;
    std::function<void(StateId)> rec = [&](StateId at) {
      if (stopped) return;
      std::vector<TransitionId> outs = g->out_edges(at);
      std::sort(outs.begin(), outs.end());
      for (TransitionId t : outs) {
        if (cur.size() + 1 > r) return;
        const Transition& tr = g->transition(t);
        cur.push_back(t);
        if (tr.target == s) f(cur);
        if (stopped) return;
        rec(tr.target);
        cur.pop_back();
      }
    };
    rec(s);
  }

  void go(StateId s, std::size_t remaining) {
    if (stopped) return;
    if (dist[s] > remaining) return;
    if (remaining == 0) {
      if (s != target) return;
      ++count;
      if (!visit(LinearPathScheme(g, start, alphas, betas))) stopped = true;
      return;
    }
    std::vector<TransitionId> outs = g->out_edges(s);
    std::sort(outs.begin(), outs.end());
    for (TransitionId t : outs) {
      alphas.back().push_back(t);
      go(g->transition(t).target, remaining - 1);
      alphas.back().pop_back();
      if (stopped) return;
    }
    if (betas.size() >= max_cycles) return;
    closed_paths(s, remaining, [&](const Path& beta) {
      betas.push_back(beta);
      alphas.emplace_back();
      go(s, remaining - beta.size());
      alphas.pop_back();
      betas.pop_back();
    });
  }
};

}  // namespace

std::size_t enumerate_lps(std::shared_ptr<const VassGraph> g, StateId p, StateId q, std::size_t length_bound,
                          std::size_t max_cycles, const std::function<bool(const LinearPathScheme&)>& visit) {
  Enumerator e{g, q, max_cycles, visit};
  e.start = p;
  e.dist.assign(g->num_states(), kNone);
  std::vector<StateId> queue{q};
  e.dist[q] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    StateId s = queue[i];
    for (TransitionId t : g->in_edges(s)) {
      StateId src = g->transition(t).source;
      if (e.dist[src] != kNone) continue;
      e.dist[src] = e.dist[s] + 1;
      queue.push_back(src);
    }
  }
  for (std::size_t len = 0; len <= length_bound && !e.stopped; ++len) e.go(p, len);
  return e.count;
}

bool is_proper_power(const Path& word) {
  const std::size_t n = word.size();
  for (std::size_t len = 1; len < n; ++len) {
    if (n % len != 0) continue;
    bool periodic = true;
    for (std::size_t i = len; i < n && periodic; ++i) periodic = word[i] == word[i - len];
    if (periodic) return true;
  }
  return false;
}

LpsSolver::LpsSolver(IntVector m, IntVector n, SolveLimits limits)
    : m_(std::move(m)), n_(std::move(n)), limits_(limits) {}

std::optional<LpsSolver::Hit> LpsSolver::solve(const LinearPathScheme& rho) {
  const VassGraph& g = rho.graph();
  for (const auto& b : rho.betas()) {
    if (is_proper_power(b)) {
      ++filtered;
      return std::nullopt;
    }
  }
  // alpha_0 runs from m before any cycle
  IntVector cur = m_;
  for (TransitionId t : rho.alphas().front()) {
    cur += g.transition(t).delta;
    if (!all_nonnegative(cur)) {
      ++filtered;
      return std::nullopt;
    }
  }
  // alpha_n ends at n after the last cycle
  cur = n_;
  const Path& last = rho.alphas().back();
  for (auto it = last.rbegin(); it != last.rend(); ++it) {
    cur -= g.transition(*it).delta;
    if (!all_nonnegative(cur)) {
      ++filtered;
      return std::nullopt;
    }
  }
  // sum phi_i Delta(beta_i) = n - m - sum Delta(alpha_k) over N
  IntVector rhs = n_ - m_;
  for (const auto& a : rho.alphas()) rhs -= displacement(g, a);
  std::vector<IntVector> cols;
  for (const auto& b : rho.betas()) cols.push_back(displacement(g, b));
  std::sort(cols.begin(), cols.end(), lex_less);
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  std::string key;
  for (Eigen::Index i = 0; i < rhs.size(); ++i) key += rhs(i).to_string() + ",";
  for (const auto& c : cols) {
    key += "|";
    for (Eigen::Index i = 0; i < c.size(); ++i) key += c(i).to_string() + ",";
  }
  auto it = displacement_cache_.find(key);
  if (it == displacement_cache_.end()) {
    bool feasible = true;
    if (cols.empty()) {
      feasible = is_zero_vector(rhs);
    } else {
      IntMatrix a(rhs.size(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) a.col(static_cast<Eigen::Index>(c)) = cols[c];
      try {
        feasible = find_solution(DiophantineSystem(a, rhs), limits_).has_value();
      } catch (const ResourceLimit&) {
        feasible = true;  // undecided here; the full system decides
      }
    }
    it = displacement_cache_.emplace(std::move(key), feasible).first;
  }
  if (!it->second) {
    ++filtered;
    return std::nullopt;
  }
  ++solved;
  LpsSystem s = lps_system(rho, ExtVector(m_), ExtVector(n_));
  std::optional<IntVector> sol;
  try {
    sol = find_solution(s.system, limits_);
  } catch (const ResourceLimit&) {
    ++limit_hits;
    return std::nullopt;
  }
  if (!sol) return std::nullopt;
  LpsSolution f = decode_solution(s.layout, *sol);
  return Hit{extract_walk(rho, f), f.phi};
}

LpsReachResult lps_reach(std::shared_ptr<const VassGraph> g, StateId p, const IntVector& m, StateId q,
                         const IntVector& n, std::size_t length_bound, std::size_t max_cycles,
                         const SolveLimits& limits) {
  LpsReachResult out;
  out.length_bound = length_bound;
  out.max_cycles = max_cycles;
  LpsSolver solver(m, n, limits);
  enumerate_lps(g, p, q, length_bound, max_cycles, [&](const LinearPathScheme& rho) {
    ++out.schemes_tried;
    auto hit = solver.solve(rho);
    if (!hit) return true;
    out.walk = std::move(hit->walk);
    out.scheme = rho;
    out.counts = std::move(hit->counts);
    return false;
  });
  out.limit_hits = solver.limit_hits;
  return out;
}

}  // namespace vass
