#pragma once

#include "vass/model.hpp"

#include <random>

namespace vass::testing {

// Two states p, q: t1 = p->q (0,-1,-2), t2 = q->p (1,1,0), t3 = q->q (0,1,2).
inline VassGraph two_state() {
  VassGraph g(3);
  StateId p = g.add_state("p");
  StateId q = g.add_state("q");
  g.add_transition(p, q, int_vector({0, -1, -2}), "t1");
  g.add_transition(q, p, int_vector({1, 1, 0}), "t2");
  g.add_transition(q, q, int_vector({0, 1, 2}), "t3");
  g.set_initial(p);
  g.set_final(p);
  return g;
}

// One state p with loops t1 = (1,0,-1), t2 = (0,1,1).
inline VassGraph two_loops() {
  VassGraph g(3);
  StateId p = g.add_state("p");
  g.add_transition(p, p, int_vector({1, 0, -1}), "t1");
  g.add_transition(p, p, int_vector({0, 1, 1}), "t2");
  return g;
}

inline Path repeat(const Path& base, int times) {
  Path out;
  for (int i = 0; i < times; ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

inline Path concat(std::initializer_list<Path> parts) {
  Path out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// t1 t3^20 t2 (t1 t2)^19 on two_state().
inline Path two_state_walk() { return concat({{0}, repeat({2}, 20), {1}, repeat({0, 1}, 19)}); }

inline Configuration at(StateId s, std::initializer_list<long long> xs) { return {s, ExtVector::of(xs)}; }

// Random graph with the given number of states and transitions; entries in [-bound, bound].
inline VassGraph random_graph(std::mt19937& rng, std::size_t states, std::size_t transitions, int bound,
                              Eigen::Index dim = 3) {
  VassGraph g(dim);
  for (std::size_t s = 0; s < states; ++s) g.add_state("s" + std::to_string(s));
  std::uniform_int_distribution<std::size_t> pick(0, states - 1);
  std::uniform_int_distribution<int> entry(-bound, bound);
  for (std::size_t t = 0; t < transitions; ++t) {
    IntVector d(dim);
    for (Eigen::Index i = 0; i < dim; ++i) d(i) = entry(rng);
    g.add_transition(pick(rng), pick(rng), d);
  }
  return g;
}

// Endpoint of a random walk of at most `steps` enabled transitions.
inline std::pair<StateId, IntVector> random_walk(std::mt19937& rng, const VassGraph& g, StateId s, IntVector v, int steps) {
  for (int i = 0; i < steps; ++i) {
    std::vector<TransitionId> ok;
    for (TransitionId t : g.out_edges(s))
      if (all_nonnegative(v + g.transition(t).delta)) ok.push_back(t);
    if (ok.empty()) break;
    std::uniform_int_distribution<std::size_t> e(0, ok.size() - 1);
    TransitionId t = ok[e(rng)];
    v += g.transition(t).delta;
    s = g.transition(t).target;
  }
  return {s, v};
}


}  // namespace vass::testing

namespace vass::testing {

// 3-VASS whose cycles all lie in one random plane: each state gets a potential
// and every displacement is pot(dst) - pot(src) plus a plane vector.
inline VassGraph random_eff2d(std::mt19937& rng, std::size_t states, std::size_t transitions, long long max_norm) {
  std::uniform_int_distribution<int> small(-2, 2);
  IntVector normal(3);
  do {
    for (Eigen::Index i = 0; i < 3; ++i) normal(i) = small(rng);
  } while (is_zero_vector(normal));
  IntMatrix row(1, 3);
  row.row(0) = normal.transpose();
  auto basis = kernel_basis(row);
  std::vector<IntVector> pot;
  for (std::size_t s = 0; s < states; ++s) {
    IntVector v(3);
    for (Eigen::Index i = 0; i < 3; ++i) v(i) = small(rng);
    pot.push_back(v);
  }
  VassGraph g(3);
  for (std::size_t s = 0; s < states; ++s) g.add_state("s" + std::to_string(s));
  std::uniform_int_distribution<std::size_t> pick(0, states - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  while (g.num_transitions() < transitions) {
    StateId a = pick(rng);
    StateId b = pick(rng);
    IntVector d = pot[b] - pot[a] + basis[0] * Integer(coef(rng)) + basis[1] * Integer(coef(rng));
    if (norm1(d) > Integer(max_norm)) continue;
    g.add_transition(a, b, d);
  }
  return g;
}

}  // namespace vass::testing
