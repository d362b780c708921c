#include "fixtures.hpp"
#include "vass/errors.hpp"
#include "vass/io.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace vass;
using namespace vass::testing;

namespace {

constexpr const char* kTwoState = R"(# two-state example
dim 3
state p
state q
init p
final p
trans t1 p q 0 -1 -2
trans t2 q p 1 1 0   # back
trans t3 q q 0 1 2
)";

std::size_t error_line(const std::string& text) {
  try {
    (void)parse_vass(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

bool same_graph(const VassGraph& a, const VassGraph& b) {
  if (a.dim() != b.dim() || a.num_states() != b.num_states() || a.num_transitions() != b.num_transitions()) return false;
  if (a.initial() != b.initial() || a.final() != b.final()) return false;
  for (StateId s = 0; s < a.num_states(); ++s)
    if (a.state_name(s) != b.state_name(s)) return false;
  for (TransitionId t = 0; t < a.num_transitions(); ++t) {
    const auto& x = a.transition(t);
    const auto& y = b.transition(t);
    if (x.source != y.source || x.target != y.target || x.delta != y.delta || x.name != y.name) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("two-state file") {
  auto g = parse_vass(kTwoState);
  CHECK(g->num_states() == 2);
  CHECK(g->num_transitions() == 3);
  CHECK(g->transition(0).delta == int_vector({0, -1, -2}));
  CHECK(g->transition(1).name == "t2");
  CHECK(g->initial() == 0);
  CHECK(same_graph(*g, two_state()));
  std::ifstream in(VASS_DATA_DIR "/two_state.vass");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(same_graph(*parse_vass(buf.str()), two_state()));
}

TEST_CASE("edgeless VASS") {
  auto g = parse_vass("dim 3\nstate only\n");
  CHECK(g->num_states() == 1);
  CHECK(g->num_transitions() == 0);
}

TEST_CASE("parse errors carry positions") {
  try {
    (void)parse_vass("dim 3\nstate p\ntrans t p p 1 2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 16);
  }
  try {
    (void)parse_vass("dim 3\nstate p\ntrans t p r 1 2 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 11);
  }
  CHECK(error_line("state p\n") == 1);
  CHECK(error_line("dim 3\nstate p\nstate p\n") == 3);
  CHECK(error_line("dim 3\nstate p\ntrans t p p 1 2 3 4\n") == 3);
  CHECK(error_line("dim 3\nstate p\ntrans t p p 1 x 3\n") == 3);
  CHECK(error_line("dim 3\nstate p\nfoo\n") == 3);
  CHECK(error_line("dim 3\nstate p\ninit q\n") == 3);
  CHECK(error_line("") == 1);
  CHECK(error_line("dim 3\n") == 1);
}

TEST_CASE("queries") {
  auto g = parse_vass(kTwoState);
  Query q = parse_query("q 1 2 3", *g);
  CHECK(q.state == 1);
  CHECK(q.location == int_vector({1, 2, 3}));
  CHECK_THROWS_AS((void)parse_query("p 1 2", *g), ParseError);
  CHECK_THROWS_AS((void)parse_query("r 1 2 3", *g), ParseError);
  CHECK_THROWS_AS((void)parse_query("p 1 -2 3", *g), ParseError);
}

TEST_CASE("property: parse after emit is the identity on canonical text") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    VassGraph g = random_graph(rng, 1 + trial % 3, 1 + trial % 6, 3);
    g.set_initial(static_cast<StateId>(trial % g.num_states()));
    std::string text = emit_vass(g);
    auto back = parse_vass(text);
    CHECK(emit_vass(*back) == text);
    CHECK(back->num_transitions() == g.num_transitions());
    for (TransitionId t = 0; t < g.num_transitions(); ++t) CHECK(back->transition(t).delta == g.transition(t).delta);
  }
}

TEST_CASE("witness JSON") {
  auto g = parse_vass(kTwoState);
  Query from = parse_query("p 22 22 22", *g);
  Query to = parse_query("p 42 42 22", *g);
  ReachResult r = reach3(g, from.state, from.location, to.state, to.location);
  REQUIRE(r.decision == Decision::Reachable);
  auto j = result_json(r, *g, from, to, true);
  CHECK(j["decision"] == "Reachable");
  CHECK(j["bound_relative"] == false);
  CHECK(j["witness"]["start"] == nlohmann::json::array({22, 22, 22}));
  CHECK(j["witness"]["end"] == nlohmann::json::array({42, 42, 22}));
  CHECK(j["witness"]["transitions"].size() == r.witness->transitions.size());
  CHECK(j["witness"]["transitions"][0] == "t1");
  CHECK(j["witness"]["locations"].size() == r.witness->transitions.size() + 1);
  CHECK(j["witness"]["locations"].back() == nlohmann::json::array({42, 42, 22}));
  CHECK(j.contains("stats"));
  CHECK(j["stats"]["nodes"].is_number());

  ReachResult no = reach3(g, 0, int_vector({0, 0, 0}), 1, int_vector({0, 0, 0}));
  auto k = result_json(no, *g, Query{0, int_vector({0, 0, 0})}, Query{1, int_vector({0, 0, 0})});
  CHECK(k["decision"] == "UnreachableProven");
  CHECK(k["witness"].is_null());
  CHECK(to_json(Integer::parse("123456789012345678901234567890")) == "123456789012345678901234567890");
}
