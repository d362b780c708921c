#include "lps_fixtures.hpp"

#include <doctest.h>

#include <set>

using namespace vass;
using namespace vass::testing;

namespace {

ExtVector ext(std::initializer_list<long long> xs) { return ExtVector::of(xs); }

// Item sequences over steps (0, t) and cycles (1, beta), built without the
// enumerator: every closed path of length <= bound at every state is a cycle
// token, every transition a step token; keep the chained sequences.
std::set<std::pair<std::size_t, std::vector<std::vector<long long>>>> brute_schemes(const VassGraph& g, StateId p,
                                                                                   StateId q, std::size_t bound,
                                                                                   std::size_t max_cycles) {
  struct Token {
    bool cycle;
    Path path;
    StateId from, to;
  };
  std::vector<Token> tokens;
  for (const auto& t : g.transitions()) tokens.push_back({false, {t.id}, t.source, t.target});
  // all paths up to the bound, keep the closed ones
  std::vector<Path> frontier;
  if (bound > 0)
    for (const auto& t : g.transitions()) frontier.push_back({t.id});
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const auto& path : frontier) {
      if (g.transition(path.front()).source == g.transition(path.back()).target)
        tokens.push_back({true, path, g.transition(path.front()).source, g.transition(path.front()).source});
      if (path.size() >= bound) continue;
      for (TransitionId t : g.out_edges(g.transition(path.back()).target)) {
        Path longer = path;
        longer.push_back(t);
        next.push_back(longer);
      }
    }
    frontier = std::move(next);
  }
  std::set<std::pair<std::size_t, std::vector<std::vector<long long>>>> out;
  std::vector<std::vector<long long>> seq;
  std::function<void(StateId, std::size_t, std::size_t)> rec = [&](StateId s, std::size_t len, std::size_t cyc) {
    if (s == q) out.insert({len, seq});
    for (const auto& tok : tokens) {
      if (tok.from != s || len + tok.path.size() > bound) continue;
      if (tok.cycle && cyc == max_cycles) continue;
      std::vector<long long> key{tok.cycle ? 1 : 0};
      for (TransitionId t : tok.path) key.push_back(static_cast<long long>(t));
      seq.push_back(key);
      rec(tok.to, len + tok.path.size(), cyc + (tok.cycle ? 1 : 0));
      seq.pop_back();
    }
  };
  rec(p, 0, 0);
  return out;
}

std::vector<std::vector<long long>> items_of(const LinearPathScheme& rho) {
  std::vector<std::vector<long long>> items;
  for (std::size_t k = 0; k < rho.alphas().size(); ++k) {
    for (TransitionId t : rho.alphas()[k]) items.push_back({0, static_cast<long long>(t)});
    if (k == rho.num_cycles()) break;
    std::vector<long long> c{1};
    for (TransitionId t : rho.betas()[k]) c.push_back(static_cast<long long>(t));
    items.push_back(c);
  }
  return items;
}

}  // namespace

TEST_CASE("scheme construction checks chaining") {
  auto g = shared(two_state());
  auto rho = two_state_scheme(g);
  CHECK(rho.length() == 5);
  CHECK(rho.num_cycles() == 2);
  CHECK(rho.junction(0) == 1);
  CHECK(rho.end() == 0);
  CHECK(rho.to_string() == "alpha: [t1] ; beta: [t3]* ; alpha: [t2] ; beta: [t1, t2]* ; alpha: []");
  CHECK_THROWS_AS(LinearPathScheme(g, 0, {{1}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(LinearPathScheme(g, 0, {{0}, {}}, {{1}}), std::invalid_argument);
  CHECK_THROWS_AS(LinearPathScheme(g, 0, {{}, {}}, {{}}), std::invalid_argument);
}

TEST_CASE("zigzag freeness") {
  auto g = shared(two_state());
  auto rho = two_state_scheme(g);
  CHECK_FALSE(is_zigzag_free(rho, ZoneSignature{{Sign::Ge, Sign::Ge, Sign::Ge}}));
  CHECK_FALSE(is_zigzag_free(rho, ZoneSignature{{Sign::Ge, Sign::Ge, Sign::Le}}));
  CHECK_FALSE(common_zone(rho).has_value());
  LinearPathScheme plain(g, 0, {{0, 1}}, {});
  for (const auto& z : zone_of(IntVector::Zero(3))) CHECK(is_zigzag_free(plain, z));

  VassGraph zero(3);
  zero.add_state("p");
  zero.add_transition(0, 0, int_vector({0, 0, 0}));
  LinearPathScheme still(shared(zero), 0, {{}, {}}, {{0}});
  for (const auto& z : zone_of(IntVector::Zero(3))) CHECK(is_zigzag_free(still, z));
}

TEST_CASE("zigzag walk guarantee preconditions") {
  auto g = shared(two_state());
  auto k0 = PumpConstants::of(*g, 0);
  CHECK(k0.D == Integer(3));
  CHECK(PumpConstants::of(*g, 3).D == Integer(3000));
  CHECK_THROWS_AS((void)zigzag_walk_guarantee(two_state_scheme(g), int_vector({22, 22, 22}), PumpConstants::of(*g, 1)),
                  PreconditionUnmet);

  VassGraph zero(3);
  zero.add_state("p");
  zero.add_transition(0, 0, int_vector({0, 0, 0}));
  auto z = shared(zero);
  LinearPathScheme still(z, 0, {{}, {}}, {{0}});
  auto k = PumpConstants::of(*z, 1);
  CHECK(zigzag_walk_guarantee(still, int_vector({50, 50, 50}), k));
  LinearPathScheme plain(g, 0, {{0, 1}}, {});
  CHECK(zigzag_walk_guarantee(plain, int_vector({60, 60, 60}), PumpConstants::of(*g, 1)));
  CHECK_THROWS_AS((void)zigzag_walk_guarantee(plain, int_vector({0, 0, 0}), PumpConstants::of(*g, 1)),
                  PreconditionUnmet);
}

TEST_CASE("LPS system on the worked example forces the repetition counts") {
  auto g = shared(two_state());
  auto rho = two_state_scheme(g);
  auto s = lps_system(rho, ext({22, 22, 22}), ext({42, 42, 22}));
  auto all = solve_all(s.system);
  REQUIRE(all.satisfiable);
  REQUIRE(all.minimal.particular.size() == 1);
  CHECK(all.minimal.homogeneous.empty());
  auto f = decode_solution(s.layout, all.minimal.particular[0]);
  CHECK(f.phi == std::vector<Integer>{Integer(20), Integer(19)});
  CHECK(extract_walk(rho, f) == two_state_walk());
}

TEST_CASE("LPS systems without cycles") {
  auto g = shared(two_state());
  LinearPathScheme just_t1(g, 0, {{0}}, {});
  auto ok = find_solution(lps_system(just_t1, ext({5, 6, 7}), ext({5, 5, 5})).system);
  REQUIRE(ok.has_value());
  CHECK_FALSE(find_solution(lps_system(just_t1, ext({0, 0, 0}), ExtVector::omegas(3)).system).has_value());

  LinearPathScheme empty(g, 0, {{}}, {});
  auto s = lps_system(empty, ext({3, 1, 4}), ExtVector::omegas(3));
  auto sol = find_solution(s.system);
  REQUIRE(sol.has_value());
  auto f = decode_solution(s.layout, *sol);
  CHECK(f.y == int_vector({3, 1, 4}));
  CHECK(extract_walk(empty, f).empty());
}

TEST_CASE("homogeneous LPS system") {
  auto g = shared(two_state());
  auto rho = two_state_scheme(g);
  auto h = lps_homogeneous_system(rho, ext({0, 0, 0}), ExtVector::omegas(3));
  IntVector f0 = encode_solution(rho, h.layout, int_vector({0, 0, 0}), {Integer(1), Integer(1)}, true);
  CHECK(h.system.satisfied_by(f0));
  CHECK(decode_solution(h.layout, f0).y == int_vector({1, 1, 0}));

  // without cycles x0 = y0 = every z0 block
  LinearPathScheme plain(g, 0, {{0, 1}}, {});
  auto hp = lps_homogeneous_system(plain);
  auto basis = hilbert_basis(hp.system).elements;
  CHECK(basis.size() == 3);
  for (const auto& b : basis) {
    auto f = decode_solution(hp.layout, b);
    CHECK(f.x == f.y);
    for (Eigen::Index i = 0; i < b.size(); ++i) CHECK(b(i) == f.x(i % 3));
  }
}

TEST_CASE("extract_walk on the single-state example") {
  auto g = shared(two_loops());
  LinearPathScheme rho(g, 0, {{}, {}, {}}, {{0, 1}, {1}});
  LpsSolution f{int_vector({50, 50, 50}), int_vector({150, 200, 100}), {Integer(100), Integer(50)}};
  Path w = extract_walk(rho, f);
  CHECK(w.size() == 250);
  auto s = lps_system(rho, ext({50, 50, 50}), ext({150, 200, 100}));
  CHECK(s.system.satisfied_by(encode_solution(rho, s.layout, f.x, f.phi)));
  LpsSolution wrong{int_vector({50, 50, 50}), int_vector({150, 200, 101}), {Integer(100), Integer(50)}};
  CHECK_THROWS_AS((void)extract_walk(rho, wrong), InternalInconsistency);
}

TEST_CASE("enumeration matches exhaustive generation") {
  auto g = shared(two_state());
  for (std::size_t bound : {0U, 1U, 3U, 5U}) {
    for (StateId p : {0U, 1U}) {
      for (StateId q : {0U, 1U}) {
        std::set<std::pair<std::size_t, std::vector<std::vector<long long>>>> got;
        std::pair<std::size_t, std::vector<std::vector<long long>>> prev{0, {}};
        bool first = true;
        std::size_t n = enumerate_lps(g, p, q, bound, 2, [&](const LinearPathScheme& rho) {
          auto key = std::make_pair(rho.length(), items_of(rho));
          if (!first) CHECK(prev < key);
          prev = key;
          first = false;
          got.insert(key);
          return true;
        });
        auto want = brute_schemes(*g, p, q, bound, 2);
        CHECK(n == got.size());
        CHECK(got == want);
      }
    }
  }
  CHECK(enumerate_lps(g, 0, 0, 0, 2, [](const LinearPathScheme&) { return true; }) == 1);
  CHECK(enumerate_lps(g, 0, 1, 0, 2, [](const LinearPathScheme&) { return true; }) == 0);

  bool seen = false;
  enumerate_lps(g, 0, 0, 6, 2, [&](const LinearPathScheme& rho) {
    seen = seen || rho == two_state_scheme(g);
    return true;
  });
  CHECK(seen);

  VassGraph loop(1);
  loop.add_state("p");
  loop.add_transition(0, 0, int_vector({1}), "t");
  std::vector<std::string> names;
  enumerate_lps(shared(loop), 0, 0, 1, 1, [&](const LinearPathScheme& rho) {
    names.push_back(rho.to_string());
    return true;
  });
  CHECK(names == std::vector<std::string>{"alpha: []", "alpha: [t]", "alpha: [] ; beta: [t]* ; alpha: []"});
}

TEST_CASE("enumeration is deterministic") {
  auto g = shared(two_state());
  auto collect = [&] {
    std::vector<std::string> out;
    enumerate_lps(g, 0, 0, 6, 2, [&](const LinearPathScheme& rho) {
      out.push_back(rho.to_string());
      return true;
    });
    return out;
  };
  CHECK(collect() == collect());
}

TEST_CASE("lps_reach") {
  auto g = shared(two_state());
  auto r = lps_reach(g, 0, int_vector({22, 22, 22}), 0, int_vector({42, 42, 22}), 5, 2);
  REQUIRE(r.found());
  CHECK(displacement(*g, *r.walk) == int_vector({20, 20, 0}));
  CHECK(run_path(*g, at(0, {22, 22, 22}), *r.walk, Domain::Naturals).location == ExtVector::of({42, 42, 22}));

  auto same = lps_reach(g, 0, int_vector({1, 2, 3}), 0, int_vector({1, 2, 3}), 0, 0);
  REQUIRE(same.found());
  CHECK(same.walk->empty());

  VassGraph diag(2);
  diag.add_state("p");
  diag.add_transition(0, 0, int_vector({1, 1}));
  auto miss = lps_reach(shared(diag), 0, int_vector({0, 0}), 0, int_vector({3, 4}), 6, 3);
  CHECK_FALSE(miss.found());
  CHECK(miss.schemes_tried > 0);

  auto two = shared(two_loops());
  auto w = lps_reach(two, 0, int_vector({50, 50, 50}), 0, int_vector({150, 200, 100}), 2, 2);
  REQUIRE(w.found());
  auto counts = parikh(*w.walk);
  CHECK(counts[0] == Integer(100));
  CHECK(counts[1] == Integer(150));
}

TEST_CASE("round trip and homogeneous shift on random schemes") {
  std::mt19937 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 200; ++trial) {
    auto g = shared(random_graph(rng, 2, 4, 2, 2));
    auto rho = random_scheme(rng, g, 4, 2);
    if (!rho) continue;
    ExtVector m(random_location(rng, 2, 6));
    auto s = lps_system(*rho, m, ExtVector::omegas(2));
    SolutionSet all;
    try {
      all = solve_all(s.system);
    } catch (const ResourceLimit&) {
      continue;
    }
    if (!all.satisfiable) continue;
    ++checked;
    for (const auto& f : all.minimal.particular) {
      CHECK_NOTHROW((void)extract_walk(*rho, decode_solution(s.layout, f)));
      for (const auto& f0 : all.minimal.homogeneous) {
        for (int h : {1, 2, 5}) {
          IntVector shifted = f + f0 * Integer(h);
          CHECK(s.system.satisfied_by(shifted));
          CHECK_NOTHROW((void)extract_walk(*rho, decode_solution(s.layout, shifted)));
        }
      }
    }
  }
  CHECK(checked == 200);
}

TEST_CASE("walks of flat shape solve the LPS system") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> exp(0, 6);
  int checked = 0;
  for (int trial = 0; trial < 3000 && checked < 200; ++trial) {
    auto g = shared(random_graph(rng, 2, 4, 2, 2));
    auto rho = random_scheme(rng, g, 4, 2);
    if (!rho) continue;
    IntVector x = random_location(rng, 2, 8);
    std::vector<Integer> e;
    for (std::size_t i = 0; i < rho->num_cycles(); ++i) e.emplace_back(exp(rng));
    Path pi = rho->instantiate(e);
    if (first_violation(*g, Configuration{rho->start(), ExtVector(x)}, pi)) continue;
    ++checked;
    IntVector y = x + displacement(*g, pi);
    auto s = lps_system(*rho, ExtVector(x), ExtVector(y));
    bool laps_nonempty = true;
    for (const auto& c : e) laps_nonempty = laps_nonempty && c.is_positive();
    // with a zero count the lap equations still ask one lap to fit
    if (laps_nonempty) CHECK(s.system.satisfied_by(encode_solution(*rho, s.layout, x, e)));
  }
  CHECK(checked == 200);
}

TEST_CASE("zigzag guarantee holds on fuzzed instantiations") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> exp(0, 50);
  int certified = 0;
  for (int trial = 0; trial < 4000 && certified < 150; ++trial) {
    auto g = shared(random_graph(rng, 2, 3, 2, 2));
    auto rho = random_scheme(rng, g, 4, 2);
    if (!rho) continue;
    auto k = PumpConstants::of(*g, 1);
    IntVector m = random_location(rng, 2, 10) + IntVector::Constant(2, Integer(2) * k.D);
    try {
      if (!zigzag_walk_guarantee(*rho, m, k)) continue;
    } catch (const PreconditionUnmet&) {
      continue;
    }
    std::vector<Integer> e;
    for (std::size_t i = 0; i < rho->num_cycles(); ++i) e.emplace_back(exp(rng));
    Path pi = rho->instantiate(e);
    IntVector end = m + displacement(*g, pi);
    if (!k.in_region(end)) continue;
    ++certified;
    CHECK_FALSE(first_violation(*g, Configuration{rho->start(), ExtVector(m)}, pi).has_value());
  }
  CHECK(certified == 150);
}
