#include "lps_fixtures.hpp"
#include "oracles.hpp"
#include "vass/errors.hpp"
#include "vass/klm.hpp"

#include <doctest.h>

#include <set>

using namespace vass;
using namespace vass::testing;

namespace {

ExtVector ext(std::initializer_list<long long> xs) { return ExtVector::of(xs); }
constexpr long long W = -1;  // omega marker for ext_w
ExtVector ext_w(std::initializer_list<long long> xs) {
  ExtVector v = ExtVector::omegas(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long long x : xs) {
    if (x != W) v.set(i, Integer(x));
    ++i;
  }
  return v;
}

KlmSequence single(VassGraph g, StateId p, ExtVector u, StateId q, ExtVector v) {
  return KlmSequence::single(shared(std::move(g)), p, std::move(u), q, std::move(v));
}

VassGraph one_loop(std::initializer_list<long long> d) {
  VassGraph g(3);
  StateId p = g.add_state("p");
  g.add_transition(p, p, int_vector(d), "loop");
  return g;
}

bool fits(const IntVector& x, const ExtVector& u) { return sqsubseteq(ExtVector(x), u); }

// Every witness of xi (as a root path) of length at most L starting from the
// finite u_0, found by exhaustive search over components and locations.
std::set<Path> brute_witnesses(const KlmSequence& xi, std::size_t L) {
  std::set<Path> out;
  const auto& first = xi.components.front();
  REQUIRE(first.u.is_finite());
  Path path;
  auto dfs = [&](auto&& self, std::size_t k, StateId s, const IntVector& loc) -> void {
    const auto& c = xi.components[k];
    if (s == c.exit && fits(loc, c.v)) {
      if (k + 1 == xi.components.size()) {
        out.insert(path);
      } else if (path.size() < L) {
        const auto& next = xi.components[k + 1];
        IntVector to = loc + xi.connectors[k].delta;
        if (all_nonnegative(to) && fits(to, next.u)) {
          path.push_back(xi.connectors[k].origin);
          self(self, k + 1, next.entry, to);
          path.pop_back();
        }
      }
    }
    if (path.size() >= L || !c.is_graph()) return;
    for (TransitionId t : c.graph->out_edges(s)) {
      const Transition& tr = c.graph->transition(t);
      IntVector to = loc + tr.delta;
      if (!all_nonnegative(to)) continue;
      path.push_back(tr.origin);
      self(self, k, tr.target, to);
      path.pop_back();
    }
  };
  dfs(dfs, 0, first.entry, first.u.finite_part());
  return out;
}

std::set<Path> union_witnesses(const std::vector<KlmSequence>& xs, std::size_t L) {
  std::set<Path> out;
  for (const auto& x : xs) {
    x.validate();
    auto w = brute_witnesses(x, L);
    out.insert(w.begin(), w.end());
  }
  return out;
}

// Small random sequence over a random 3-dim graph, finite start.
KlmSequence random_sequence(std::mt19937& rng, std::size_t states, std::size_t transitions) {
  VassGraph g = random_graph(rng, states, transitions, 1);
  std::uniform_int_distribution<int> small(0, 2);
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<StateId> pick(0, states - 1);
  ExtVector u = ExtVector::zeros(3);
  ExtVector v = ExtVector::omegas(3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    u.set(i, Integer(small(rng)));
    if (coin(rng) == 0) v.set(i, Integer(small(rng)));
  }
  return single(std::move(g), pick(rng), u, pick(rng), v);
}

}  // namespace

TEST_CASE("characteristic system of the two-state sequence") {
  auto xi = single(two_state(), 0, ext({22, 22, 22}), 0, ext({42, 42, 22}));
  CharSystem cs = char_system(xi);
  IntVector walk_parikh = parikh_vector(*xi.root, two_state_walk());
  IntVector sol = IntVector::Zero(static_cast<Eigen::Index>(cs.system.num_vars()));
  const auto& b = cs.blocks[0];
  for (Eigen::Index j = 0; j < 3; ++j) {
    sol(static_cast<Eigen::Index>(b.x[static_cast<std::size_t>(j)])) = 22;
    sol(static_cast<Eigen::Index>(b.y[static_cast<std::size_t>(j)])) = j < 2 ? 42 : 22;
  }
  for (TransitionId t = 0; t < 3; ++t) sol(static_cast<Eigen::Index>(b.phi[t])) = walk_parikh(static_cast<Eigen::Index>(t));
  CHECK(walk_parikh == int_vector({20, 20, 20}));
  CHECK(cs.system.satisfied_by(sol));

  SolutionSet all = solve_all(cs.system);
  REQUIRE(all.satisfiable);
  REQUIRE(all.minimal.particular.size() == 1);
  CHECK(all.minimal.particular[0] == sol);

  SolutionSet hom = solve_all(homogeneous_char_system(xi).system);
  CHECK(hom.minimal.particular.size() == 1);
  CHECK(is_zero_vector(hom.minimal.particular[0]));
  CHECK(hom.minimal.homogeneous.empty());
  CHECK(unbounded_vars(xi).empty());
}

TEST_CASE("edgeless component is satisfiable iff u = v") {
  VassGraph g(3);
  g.add_state("p");
  auto same = single(g, 0, ext({1, 2, 3}), 0, ext({1, 2, 3}));
  auto other = single(g, 0, ext({1, 2, 3}), 0, ext({1, 2, 4}));
  auto a = solve_all(char_system(same).system);
  REQUIRE(a.satisfiable);
  CHECK(a.minimal.particular.size() == 1);
  CHECK(char_system(same).blocks[0].phi.empty());
  CHECK_FALSE(solve_all(char_system(other).system).satisfiable);
  CHECK_THROWS_AS((void)unbounded_vars(other), Unsatisfiable);
}

TEST_CASE("composite system with a scheme component") {
  auto g = shared(two_state());
  KlmSequence xi;
  xi.root = g;
  xi.components.push_back(KlmComponent::of_scheme(two_state_scheme(g), ext({22, 22, 22}), ext({42, 42, 22})));
  xi.validate();
  CHECK_THROWS_AS((void)char_system(xi), PreconditionUnmet);
  KlmAnalysis a = analyze(xi);
  REQUIRE(a.satisfiable());
  REQUIRE(a.solutions.representatives.size() == 1);
  const auto& s = a.solutions.representatives[0];
  CHECK(s(static_cast<Eigen::Index>(a.sys.blocks[0].phi[0])) == 20);
  CHECK(s(static_cast<Eigen::Index>(a.sys.blocks[0].phi[1])) == 19);

  // without scheme components the composite system is the characteristic one
  auto plain = single(two_state(), 0, ext({22, 22, 22}), 0, ext({42, 42, 22}));
  CHECK(composite_char_system(plain).system.signature() == char_system(plain).system.signature());

  // t1 from zero balances in displacement but goes negative on the way
  KlmSequence bad;
  bad.root = g;
  bad.components.push_back(
      KlmComponent::of_scheme(LinearPathScheme(g, 0, {{0, 1}}, {}), ext({0, 0, 2}), ext({1, 0, 0})));
  CHECK_FALSE(analyze(bad).satisfiable());
}

TEST_CASE("unbounded variables") {
  auto pumped = single(one_loop({1, 1, 1}), 0, ExtVector::omegas(3), 0, ExtVector::omegas(3));
  KlmAnalysis a = analyze(pumped);
  REQUIRE(a.satisfiable());
  CHECK(a.unbounded_vars().size() == a.sys.system.num_vars());

  // u = (w,0,w): a loop that only moves the first coordinate leaves x(1) pinned
  auto mixed = single(one_loop({1, 0, 0}), 0, ext_w({W, 0, W}), 0, ExtVector::omegas(3));
  KlmAnalysis m = analyze(mixed);
  const auto& b = m.sys.blocks[0];
  CHECK(m.bounded(b.x[1]));
  CHECK_FALSE(m.bounded(b.x[0]));
  CHECK_FALSE(m.bounded(b.phi[0]));
}

TEST_CASE("saturation") {
  // edgeless with u = (w,0,0), v = (3,0,0)
  VassGraph g(3);
  g.add_state("p");
  auto xi = single(g, 0, ext_w({W, 0, 0}), 0, ext({3, 0, 0}));
  auto out = saturate(xi);
  REQUIRE(out.size() == 1);
  CHECK(out[0].components[0].u == ext({3, 0, 0}));
  CHECK(saturate(out[0]).size() == 1);
  CHECK(saturate(out[0])[0].components[0].u == ext({3, 0, 0}));

  // already saturated
  auto pumped = single(one_loop({1, 1, 1}), 0, ext({0, 0, 0}), 0, ExtVector::omegas(3));
  auto same = saturate(pumped);
  REQUIRE(same.size() == 1);
  CHECK(same[0].components[0].v == ExtVector::omegas(3));

  // a bounded omega with two attainable values branches
  VassGraph two(3);
  StateId p = two.add_state("p");
  StateId q = two.add_state("q");
  two.add_transition(p, q, int_vector({0, 0, 0}), "a");
  two.add_transition(p, q, int_vector({1, 0, 0}), "b");
  auto branchy = single(two, p, ext({0, 0, 0}), q, ExtVector::omegas(3));
  auto br = saturate(branchy);
  std::set<std::string> ends;
  for (const auto& x : br) ends.insert(x.components[0].v.to_string());
  CHECK(ends == std::set<std::string>{"(0,0,0)", "(1,0,0)"});
}

TEST_CASE("linearization of a two-SCC chain") {
  VassGraph g(3);
  StateId a = g.add_state("a");
  StateId b = g.add_state("b");
  StateId c = g.add_state("c");
  g.add_transition(a, a, int_vector({1, 0, 0}), "la");
  g.add_transition(a, b, int_vector({0, 1, 0}), "ab");
  g.add_transition(a, c, int_vector({0, 0, 1}), "ac");
  g.add_transition(b, c, int_vector({0, 0, 0}), "bc");
  g.add_transition(c, c, int_vector({-1, 0, 0}), "lc");
  auto xi = single(g, a, ext({0, 0, 0}), c, ExtVector::omegas(3));
  auto lin = linearize(xi, 0);
  REQUIRE(lin.size() == 2);  // a -ab-> b -bc-> c and a -ac-> c
  std::set<std::size_t> shapes;
  for (const auto& x : lin) {
    x.validate();
    shapes.insert(x.components.size());
    CHECK(klm_rank(x) < klm_rank(xi));
    for (const auto& comp : x.components) CHECK(is_strongly_connected(*comp.graph));
  }
  CHECK(shapes == std::set<std::size_t>{2, 3});
  CHECK(union_witnesses(lin, 7) == brute_witnesses(xi, 7));

  // the exit cannot be reached at all
  auto stuck = single(g, c, ext({0, 0, 0}), a, ExtVector::omegas(3));
  CHECK(standardize(stuck).empty());

  // strongly connected and saturated already
  auto sc = single(one_loop({1, 1, 1}), 0, ext({0, 0, 0}), 0, ExtVector::omegas(3));
  auto st = standardize(sc);
  REQUIRE(st.size() == 1);
  CHECK(st[0].to_string() == sc.to_string());
}

TEST_CASE("bounded decomposition of the two-state sequence") {
  auto xi = single(two_state(), 0, ext({22, 22, 22}), 0, ext({42, 42, 22}));
  KlmAnalysis a = analyze(xi);
  CHECK(a.component_bounded(0));
  CHECK(klm_rank(xi).to_string() == "(0,3,0,0)");
  CHECK_FALSE(is_3normal(xi, a));
  std::size_t seen = 0;
  decompose_bounded(xi, 0, a, [&](const KlmSequence& b) {
    b.validate();
    CHECK(b.components.size() == 61);
    CHECK(b.connectors.size() == 60);
    for (const auto& c : b.components) CHECK(c.graph->num_transitions() == 0);
    CHECK(klm_rank(b) < klm_rank(xi));
    // a branch is a single explicit path; it must be a witness
    Path p;
    for (const auto& conn : b.connectors) p.push_back(conn.origin);
    CHECK_NOTHROW((void)run_path(*xi.root, Configuration{0, ext({22, 22, 22})}, p, Domain::Naturals));
    return ++seen < 50;
  });
  CHECK(seen == 50);

  auto free = single(one_loop({1, 1, 1}), 0, ext({0, 0, 0}), 0, ExtVector::omegas(3));
  CHECK_THROWS_AS((void)decompose_bounded(free, 0, analyze(free), [](const KlmSequence&) { return true; }),
                  PreconditionUnmet);
}

TEST_CASE("bounded edge inside a 3-dimensional SCC splits it") {
  // z only drops when crossing back, so the crossings are bounded by u(z)
  VassGraph g(3);
  StateId p = g.add_state("p");
  StateId q = g.add_state("q");
  g.add_transition(p, p, int_vector({1, 0, 0}), "lp");
  g.add_transition(p, q, int_vector({0, 0, 0}), "go");
  g.add_transition(q, q, int_vector({0, 1, 0}), "lq");
  g.add_transition(q, p, int_vector({0, 0, -1}), "back");
  auto xi = single(g, p, ext({0, 0, 2}), p, ExtVector::omegas(3));
  CHECK(cycle_space(*xi.root).dim() == 3);
  auto sat = standardize(xi);
  REQUIRE(!sat.empty());
  std::vector<KlmSequence> pieces;
  for (const auto& s : sat) {
    KlmAnalysis a = analyze(s);
    REQUIRE(a.component_bounded(0));
    CHECK_FALSE(a.bounded(a.sys.blocks[0].phi[0]));
    decompose_bounded(s, 0, a, [&](const KlmSequence& b) {
      pieces.push_back(b);
      return true;
    });
  }
  // 0, 1 or 2 round trips
  std::set<std::size_t> lengths;
  for (const auto& b : pieces) {
    lengths.insert(b.components.size());
    CHECK(klm_rank(b) < klm_rank(xi));
    for (const auto& c : b.components) CHECK(c.effective_dim() <= 2);
  }
  CHECK(lengths == std::set<std::size_t>{1, 3, 5});
  CHECK(union_witnesses(pieces, 9) == brute_witnesses(xi, 9));
}

TEST_CASE("pumpability") {
  auto up = single(one_loop({1, 1, 1}), 0, ext({0, 0, 0}), 0, ExtVector::omegas(3));
  CHECK(pumpable(up.components[0]).status == PumpStatus::Pumpable);

  auto flat = single(one_loop({1, 0, 0}), 0, ext({0, 0, 0}), 0, ext({3, 0, 0}));
  PumpResult r = pumpable(flat.components[0]);
  CHECK(r.status == PumpStatus::NotForward);
  CHECK(r.dims == std::vector<Eigen::Index>{1, 2});
  // modulo the rigid coordinates it pumps forward, but reversed it only lowers x below 3
  PumpResult mod = pumpable(flat.components[0], rigid_dims(*flat.root));
  CHECK(mod.status == PumpStatus::NotBackward);
  CHECK(mod.dims == std::vector<Eigen::Index>{0});

  auto open = single(one_loop({1, 0, 0}), 0, ExtVector::omegas(3), 0, ExtVector::omegas(3));
  CHECK(pumpable(open.components[0]).status == PumpStatus::Pumpable);

  // backward runs the loop in reverse
  auto down = single(one_loop({-1, 0, 0}), 0, ExtVector::omegas(3), 0, ext_w({0, W, W}));
  CHECK(pumpable(down.components[0]).status == PumpStatus::Pumpable);
  auto stuck = single(one_loop({1, 0, 0}), 0, ExtVector::omegas(3), 0, ext_w({0, W, W}));
  PumpResult s = pumpable(stuck.components[0]);
  CHECK(s.status == PumpStatus::NotBackward);
  CHECK(s.dims == std::vector<Eigen::Index>{0});
}

TEST_CASE("karp-miller labels and bounded dimensions") {
  VassGraph g(2);
  StateId p = g.add_state("p");
  StateId q = g.add_state("q");
  g.add_transition(p, p, int_vector({1, 0}), "inc");
  g.add_transition(p, q, int_vector({0, 1}), "go");
  g.add_transition(q, p, int_vector({0, -1}), "back");
  Coverability cov = karp_miller(g, p, ext({0, 0}));
  CHECK(cov.covers(p, ext({100, 0})));
  CHECK(cov.covers(q, ext({5, 1})));
  CHECK_FALSE(cov.covers(q, ext({0, 2})));
  auto bd = bounded_dim(cov, ext({0, 0}));
  REQUIRE(bd.has_value());
  CHECK(bd->dim == 1);
  CHECK(bd->bound == 1);
  CHECK_THROWS_AS((void)karp_miller(g, p, ext({0, 0}), 2), ResourceLimit);
}

TEST_CASE("reduction into a band") {
  auto flat = single(one_loop({1, 0, 0}), 0, ext({0, 0, 0}), 0, ext({3, 0, 0}));
  auto comps = reduce(flat.components[0], 1, Integer(0));
  REQUIRE(comps.size() == 1);
  const auto& c = comps[0];
  CHECK(c.graph->num_states() == 1);
  CHECK(c.graph->state_name(0) == "p_0");
  REQUIRE(c.graph->num_transitions() == 1);
  CHECK(c.graph->transition(0).delta == int_vector({1, 0, 0}));
  CHECK(c.u == ext({0, 0, 0}));
  CHECK(c.v == ext({3, 0, 0}));

  auto half = single(one_loop({0, 1, 0}), 0, ext({0, 2, 0}), 0, ext_w({0, W, 0}));
  CHECK(reduce(half.components[0], 1, Integer(4)).size() == 5);
  // entry level out of the band: no branch
  CHECK(reduce(half.components[0], 1, Integer(1)).empty());

  auto both = single(one_loop({0, 1, 0}), 0, ext({0, 2, 0}), 0, ext({0, 3, 0}));
  auto one = reduce(both.components[0], 1, Integer(5));
  REQUIRE(one.size() == 1);
  CHECK(one[0].graph->state_name(one[0].entry) == "p_2");
  CHECK(one[0].graph->state_name(one[0].exit) == "p_3");
}

TEST_CASE("reduction with the coverability bound preserves witnesses") {
  // y is bounded by 2 through the p <-> q gadget
  VassGraph g(3);
  StateId p = g.add_state("p");
  StateId q = g.add_state("q");
  g.add_transition(p, p, int_vector({1, 0, 1}), "inc");
  g.add_transition(p, q, int_vector({0, 1, 0}), "up");
  g.add_transition(q, q, int_vector({0, 1, -1}), "more");
  g.add_transition(q, p, int_vector({-1, -1, 0}), "down");
  auto xi = single(g, p, ext({0, 0, 0}), p, ExtVector::omegas(3));
  Coverability cov = karp_miller(*xi.root, p, ext({0, 0, 0}));
  auto bd = bounded_dim(cov, ext({0, 0, 0}));
  CHECK_FALSE(bd.has_value());

  // y climbs only by spending z, which never grows: y <= 2 though cycles move it
  VassGraph h(3);
  StateId a = h.add_state("a");
  h.add_transition(a, a, int_vector({0, 1, -1}), "spend");
  h.add_transition(a, a, int_vector({0, -1, 0}), "drop");
  h.add_transition(a, a, int_vector({1, 0, 0}), "inc");
  auto yi = single(h, a, ext({0, 0, 2}), a, ExtVector::omegas(3));
  Coverability c2 = karp_miller(*yi.root, a, ext({0, 0, 2}));
  auto bd2 = bounded_dim(c2, ext({0, 0, 2}), rigid_dims(*yi.root));
  REQUIRE(bd2.has_value());
  CHECK(bd2->dim == 1);
  CHECK(bd2->bound == 2);
  auto reduced = reduce(yi, 0, bd2->dim, bd2->bound);
  CHECK(reduced.size() == 3);
  for (const auto& r : reduced) CHECK(klm_rank(r) < klm_rank(yi));
  CHECK(union_witnesses(reduced, 9) == brute_witnesses(yi, 9));
}

TEST_CASE("rigid pruning") {
  // z goes down on p -> q and back up on q -> p; starting at z = 0 q is unusable
  VassGraph g(3);
  StateId p = g.add_state("p");
  StateId q = g.add_state("q");
  g.add_transition(p, p, int_vector({1, 0, 0}), "lp");
  g.add_transition(p, q, int_vector({0, 0, -1}), "go");
  g.add_transition(q, p, int_vector({0, 0, 1}), "back");
  g.add_transition(q, q, int_vector({0, 1, 0}), "lq");
  auto xi = single(g, p, ext({0, 0, 0}), p, ExtVector::omegas(3));
  auto pruned = prune_rigid(xi);
  REQUIRE(pruned.has_value());
  CHECK(pruned->components[0].graph->num_transitions() == 1);
  CHECK(brute_witnesses(*pruned, 8) == brute_witnesses(xi, 8));
  CHECK_FALSE(prune_rigid(*pruned).has_value());

  auto high = single(g, p, ext({0, 0, 1}), p, ExtVector::omegas(3));
  CHECK_FALSE(prune_rigid(high).has_value());
}

TEST_CASE("3-normality and ranks") {
  auto g = shared(two_state());
  KlmSequence lps_only;
  lps_only.root = g;
  lps_only.components.push_back(KlmComponent::of_scheme(two_state_scheme(g), ext({22, 22, 22}), ext({42, 42, 22})));
  CHECK(klm_rank(lps_only).total() == 0);
  CHECK(is_3normal(lps_only));

  auto up = single(one_loop({1, 1, 1}), 0, ext({0, 0, 0}), 0, ExtVector::omegas(3));
  CHECK(is_3normal(up));
  // y and z are rigid, so only x has to grow
  auto flat = single(one_loop({1, 0, 0}), 0, ext({0, 0, 0}), 0, ext_w({W, 0, 0}));
  CHECK(is_3normal(flat));
  // unbounded (the two loops cancel) but nothing can fire from zero
  VassGraph swap(3);
  swap.add_state("p");
  swap.add_transition(0, 0, int_vector({1, -1, 0}), "a");
  swap.add_transition(0, 0, int_vector({-1, 1, 0}), "b");
  auto nonpump = single(swap, 0, ext({0, 0, 0}), 0, ext({0, 0, 0}));
  KlmAnalysis na = analyze(nonpump);
  CHECK(is_saturated(nonpump, na));
  CHECK_FALSE(na.component_bounded(0));
  CHECK(pumpable(nonpump.components[0], rigid_dims(swap)).status == PumpStatus::NotForward);
  CHECK_FALSE(is_3normal(nonpump, na));
}

TEST_CASE("witness from a single pumpable component") {
  auto up = single(one_loop({1, 1, 1}), 0, ext({0, 0, 0}), 0, ExtVector::omegas(3));
  KlmAnalysis a = analyze(up);
  Witness w = witness_from_normal(up, a);
  CHECK_NOTHROW(validate_witness(up, w));
  REQUIRE_FALSE(w.transitions.empty());
  for (TransitionId t : w.transitions) CHECK(t == 0);
  CHECK(within_size_bound(w, up, 1.0));

  // the same loop as a scheme between finite ends: exactly five laps
  auto g = shared(one_loop({1, 1, 1}));
  KlmSequence s;
  s.root = g;
  s.components.push_back(
      KlmComponent::of_scheme(LinearPathScheme(g, 0, {{}, {}}, {{0}}), ext({0, 0, 0}), ext({5, 5, 5})));
  KlmAnalysis sa = analyze(s);
  Witness ws = witness_from_normal(s, sa);
  CHECK(ws.transitions == Path(5, 0));
  CHECK(ws.end == int_vector({5, 5, 5}));

  auto bounded = single(two_state(), 0, ext({22, 22, 22}), 0, ext({42, 42, 22}));
  CHECK_THROWS_AS((void)witness_from_normal(bounded, analyze(bounded)), PreconditionUnmet);
}

TEST_CASE("witness from the two-state scheme") {
  auto g = shared(two_state());
  KlmSequence xi;
  xi.root = g;
  xi.components.push_back(KlmComponent::of_scheme(two_state_scheme(g), ext({22, 22, 22}), ext({42, 42, 22})));
  Witness w = witness_from_normal(xi, analyze(xi));
  CHECK(parikh_vector(*g, w.transitions) == parikh_vector(*g, two_state_walk()));
  CHECK(w.transitions == two_state_walk());
  CHECK(within_size_bound(w, xi, 1.0));
}

TEST_CASE("witness through connectors and several graph components") {
  // p: loop (1,0,0); connector p -> q (-1,0,0); q: loop (0,1,1) and (0,-1,0)
  VassGraph g(3);
  StateId p = g.add_state("p");
  StateId q = g.add_state("q");
  g.add_transition(p, p, int_vector({1, 0, 0}), "lp");
  g.add_transition(p, q, int_vector({-1, 0, 0}), "go");
  g.add_transition(q, q, int_vector({0, 1, 1}), "lq");
  g.add_transition(q, q, int_vector({0, -1, 0}), "dq");
  auto xi = single(g, p, ext({0, 0, 0}), q, ExtVector::omegas(3));
  auto std_branches = standardize(xi);
  std::size_t built = 0;
  for (const auto& s : std_branches) {
    KlmAnalysis a = analyze(s);
    if (!is_3normal(s, a)) continue;
    Witness w = witness_from_normal(s, a);
    CHECK_NOTHROW(validate_witness(s, w));
    CHECK(w.segment_end.size() == s.components.size());
    CHECK(within_size_bound(w, s, 1.0));
    ++built;
  }
  CHECK(built >= 1);
}

TEST_CASE("euler paths") {
  VassGraph g = two_state();
  Path p = euler_path(g, 0, 0, {Integer(2), Integer(2), Integer(3)});
  CHECK(p.size() == 7);
  CHECK(parikh_vector(g, p) == int_vector({2, 2, 3}));
  CHECK(is_chained(g, p));
  CHECK_THROWS_AS((void)euler_path(g, 0, 0, {Integer(2), Integer(1), Integer(0)}), InternalInconsistency);
  CHECK(euler_path(g, 1, 1, {Integer(0), Integer(0), Integer(0)}).empty());
}

TEST_CASE("sequence size and text form") {
  auto xi = single(two_state(), 0, ext({22, 22, 22}), 0, ext_w({42, W, 22}));
  // 2 * 4^4 * (0 + 66 + |G| + 65)
  Integer g_size = xi.root->size();
  CHECK(xi.size() == Integer(512) * (Integer(66 + 65) + g_size));
  CHECK(xi.to_string() == "((22,22,22) G0[p->p, 2q/3t] (42,w,22))");
  KlmSequence broken = xi;
  broken.connectors.push_back(Connector{0, int_vector({0, -1, -2})});
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("property: constructions preserve witness sets") {
  std::mt19937 rng(20261016);
  std::size_t checked_sat = 0, checked_lin = 0, checked_dec = 0, checked_red = 0;
  for (int trial = 0; trial < 60; ++trial) {
    KlmSequence xi = random_sequence(rng, 2 + static_cast<std::size_t>(trial % 2), 4);
    const std::size_t L = 7;
    auto expect = brute_witnesses(xi, L);

    auto branches = standardize(xi);
    CHECK(union_witnesses(branches, L) == expect);
    if (!is_strongly_connected(*xi.root)) {
      ++checked_lin;
      SccDecomposition scc = scc_condense(*xi.root);
      bool crossing = false;
      for (const auto& t : xi.root->transitions()) crossing = crossing || scc.component_of[t.source] != scc.component_of[t.target];
      for (const auto& b : branches) CHECK((crossing ? klm_rank(b) < klm_rank(xi) : klm_rank(b) <= klm_rank(xi)));
    } else {
      ++checked_sat;
    }

    for (const auto& b : branches) {
      // idempotence of saturation
      auto again = saturate(b);
      REQUIRE(again.size() == 1);
      CHECK(again[0].to_string() == b.to_string());

      KlmAnalysis a = analyze(b);
      auto local = brute_witnesses(b, L);
      for (std::size_t i = 0; i < b.components.size(); ++i) {
        if (!a.component_bounded(i)) continue;
        std::vector<KlmSequence> pieces;
        decompose_bounded(b, i, a, [&](const KlmSequence& piece) {
          pieces.push_back(piece);
          return true;
        });
        for (const auto& piece : pieces) CHECK(klm_rank(piece) < klm_rank(b));
        CHECK(union_witnesses(pieces, L) == local);
        ++checked_dec;
        break;
      }
      for (std::size_t i = 0; i < b.components.size(); ++i) {
        const auto& c = b.components[i];
        if (!c.u.is_finite()) continue;
        Coverability cov = karp_miller(*c.graph, c.entry, c.u);
        auto bd = bounded_dim(cov, c.u, rigid_dims(*c.graph));
        if (!bd || bd->bound > 6) continue;
        auto reduced = reduce(b, i, bd->dim, bd->bound);
        for (const auto& r : reduced) CHECK(klm_rank(r) < klm_rank(b));
        CHECK(union_witnesses(reduced, L) == local);
        ++checked_red;
        break;
      }
    }
  }
  MESSAGE("saturate " << checked_sat << " linearize " << checked_lin << " decompose " << checked_dec << " reduce "
                      << checked_red);
  CHECK(checked_lin >= 5);
  CHECK(checked_dec >= 5);
  CHECK(checked_red >= 5);
}

TEST_CASE("property: boundedness from h0 agrees with brute force") {
  std::mt19937 rng(7);
  int systems = 0;
  while (systems < 50) {
    KlmSequence xi = random_sequence(rng, 2, 3);
    KlmAnalysis a = analyze(xi);
    if (!a.satisfiable()) continue;
    ++systems;
    const auto& sys = a.sys.system;
    const auto n = static_cast<Eigen::Index>(sys.num_vars());
    IntVector top = IntVector::Zero(n);
    for (const auto& s : a.solutions.representatives)
      for (Eigen::Index v = 0; v < n; ++v) top(v) = max(top(v), s(v));
    // unbounded: pumping h0 keeps solving and grows the variable
    const IntVector& s0 = a.solutions.representatives.front();
    IntVector once = s0 + a.solutions.h0;
    IntVector many = s0 + a.solutions.h0 * Integer(40);
    CHECK(sys.satisfied_by(once));
    CHECK(sys.satisfied_by(many));
    for (Eigen::Index v = 0; v < n; ++v)
      if (!a.bounded(static_cast<std::size_t>(v))) CHECK(many(v) > once(v));
    // bounded: no solution reachable by adding homogeneous elements moves it
    CHECK(sys.homogeneous().satisfied_by(a.solutions.h0));
    for (Eigen::Index v = 0; v < n; ++v)
      CHECK(a.solutions.h0(v).is_zero() == a.bounded(static_cast<std::size_t>(v)));
    // every walk found by direct search stays within the bounded values
    const auto& c = xi.components[0];
    const auto& blk = a.sys.blocks[0];
    for (const auto& w : brute_witnesses(xi, 6)) {
      IntVector ph = parikh_vector(*c.graph, w);
      for (TransitionId t = 0; t < c.graph->num_transitions(); ++t)
        if (a.bounded(blk.phi[t])) CHECK(ph(static_cast<Eigen::Index>(t)) <= top(static_cast<Eigen::Index>(blk.phi[t])));
      IntVector end = run_path(*c.graph, ZConfiguration{c.entry, c.u.finite_part()}, w).location;
      for (Eigen::Index j = 0; j < 3; ++j)
        if (a.bounded(blk.y[static_cast<std::size_t>(j)])) CHECK(end(j) <= top(static_cast<Eigen::Index>(blk.y[static_cast<std::size_t>(j)])));
    }
  }
  CHECK(systems == 50);
}
