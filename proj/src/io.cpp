#include "vass/io.hpp"

#include "vass/errors.hpp"

#include <set>
#include <sstream>
#include <vector>

namespace vass {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char ch = line[i];
    if (ch == '#') break;
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back(Token{std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

Integer integer_token(const Token& t, std::size_t line) {
  try {
    return Integer::parse(t.text);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, t.column, "expected an integer, got '" + t.text + "'");
  }
}

std::size_t end_column(std::string_view line) { return line.size() + 1; }

}  // namespace

std::shared_ptr<VassGraph> parse_vass(std::string_view text) {
  std::shared_ptr<VassGraph> g;
  std::optional<std::pair<std::string, std::size_t>> init, fin;  // name, line
  std::set<std::string> trans_ids;
  std::size_t line_no = 0;
  std::size_t dim_line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;
    auto expect_args = [&](std::size_t n) {
      if (toks.size() < n + 1) throw ParseError(line_no, end_column(line), "'" + kw + "' needs " + std::to_string(n) + " arguments");
      if (toks.size() > n + 1) throw ParseError(line_no, toks[n + 1].column, "unexpected token '" + toks[n + 1].text + "'");
    };
    if (!g) {
      if (kw != "dim") throw ParseError(line_no, toks[0].column, "the first directive must be 'dim'");
      expect_args(1);
      Integer d = integer_token(toks[1], line_no);
      if (!d.is_positive() || d > Integer(64)) throw ParseError(line_no, toks[1].column, "dimension must be in 1..64");
      g = std::make_shared<VassGraph>(static_cast<Eigen::Index>(d.to_int64()));
      dim_line = line_no;
      continue;
    }
    auto state_of = [&](const Token& t) {
      auto s = g->find_state(t.text);
      if (!s) throw ParseError(line_no, t.column, "unknown state '" + t.text + "'");
      return *s;
    };
    if (kw == "dim") {
      throw ParseError(line_no, toks[0].column, "duplicate 'dim'");
    } else if (kw == "state") {
      expect_args(1);
      if (g->find_state(toks[1].text)) throw ParseError(line_no, toks[1].column, "duplicate state '" + toks[1].text + "'");
      (void)g->add_state(toks[1].text);
    } else if (kw == "init" || kw == "final") {
      expect_args(1);
      auto& slot = kw == "init" ? init : fin;
      if (slot) throw ParseError(line_no, toks[0].column, "duplicate '" + kw + "'");
      (void)state_of(toks[1]);
      slot = std::make_pair(toks[1].text, line_no);
    } else if (kw == "trans") {
      const auto d = static_cast<std::size_t>(g->dim());
      if (toks.size() != 4 + d) {
        const std::size_t col = toks.size() < 4 + d ? end_column(line) : toks[4 + d].column;
        throw ParseError(line_no, col,
                         "'trans' needs an id, two states and " + std::to_string(d) + " displacement entries, got " +
                             std::to_string(toks.size() < 4 ? 0 : toks.size() - 4) + " entries");
      }
      if (!trans_ids.insert(toks[1].text).second)
        throw ParseError(line_no, toks[1].column, "duplicate transition '" + toks[1].text + "'");
      StateId src = state_of(toks[2]);
      StateId dst = state_of(toks[3]);
      IntVector delta(static_cast<Eigen::Index>(d));
      for (std::size_t j = 0; j < d; ++j) delta(static_cast<Eigen::Index>(j)) = integer_token(toks[4 + j], line_no);
      (void)g->add_transition(src, dst, std::move(delta), toks[1].text);
    } else {
      throw ParseError(line_no, toks[0].column, "unknown directive '" + kw + "'");
    }
  }
  if (!g) throw ParseError(line_no == 0 ? 1 : line_no, 1, "missing 'dim'");
  if (g->num_states() == 0) throw ParseError(dim_line, 1, "no states declared");
  if (init) g->set_initial(*g->find_state(init->first));
  if (fin) g->set_final(*g->find_state(fin->first));
  return g;
}

std::string emit_vass(const VassGraph& g) {
  std::ostringstream os;
  os << "dim " << g.dim() << '\n';
  for (StateId s = 0; s < g.num_states(); ++s) os << "state " << g.state_name(s) << '\n';
  if (g.num_states() > 0) {
    os << "init " << g.state_name(g.initial()) << '\n';
    os << "final " << g.state_name(g.final()) << '\n';
  }
  for (TransitionId t = 0; t < g.num_transitions(); ++t) {
    const Transition& tr = g.transition(t);
    os << "trans " << (tr.name.empty() ? "t" + std::to_string(t) : tr.name) << ' ' << g.state_name(tr.source) << ' '
       << g.state_name(tr.target);
    for (Eigen::Index j = 0; j < tr.delta.size(); ++j) os << ' ' << tr.delta(j);
    os << '\n';
  }
  return os.str();
}

Query parse_query(std::string_view text, const VassGraph& g) {
  const auto toks = tokenize(text);
  const auto d = static_cast<std::size_t>(g.dim());
  if (toks.size() != d + 1)
    throw ParseError(1, toks.size() > d + 1 ? toks[d + 1].column : end_column(text),
                     "a query is a state followed by " + std::to_string(d) + " counters");
  Query q;
  auto s = g.find_state(toks[0].text);
  if (!s) throw ParseError(1, toks[0].column, "unknown state '" + toks[0].text + "'");
  q.state = *s;
  q.location = IntVector(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    Integer v = integer_token(toks[j + 1], 1);
    if (v.is_negative()) throw ParseError(1, toks[j + 1].column, "counters must be nonnegative");
    q.location(static_cast<Eigen::Index>(j)) = v;
  }
  return q;
}

nlohmann::json to_json(const Integer& x) {
  if (x.fits_int64()) return x.to_int64();
  return x.to_string();
}

nlohmann::json to_json(const IntVector& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

nlohmann::json stats_json(const SolverStats& s) {
  nlohmann::json normals = nlohmann::json::array();
  for (const auto& n : s.normals)
    normals.push_back({{"witness_length", n.witness_length}, {"size_log2", n.size_log2}, {"within_bound", n.within_bound}});
  return {{"nodes", s.nodes},
          {"systems_solved", s.systems_solved},
          {"max_size_log2", s.max_size_log2},
          {"linearizations", s.linearizations},
          {"saturations", s.saturations},
          {"prunings", s.prunings},
          {"decompositions", s.decompositions},
          {"reductions", s.reductions},
          {"schemes_tried", s.schemes_tried},
          {"normal_sequences", s.normal_sequences},
          {"tower_max", s.tower_max},
          {"rank_checks", s.rank_checks},
          {"normals", normals},
          {"cap_reasons", s.cap_reasons}};
}

namespace {

nlohmann::json path_json(const VassGraph& g, const Path& p) {
  auto out = nlohmann::json::array();
  for (TransitionId t : p) {
    const std::string& n = g.transition(t).name;
    out.push_back(n.empty() ? "t" + std::to_string(t) : n);
  }
  return out;
}

}  // namespace

nlohmann::json result_json(const ReachResult& r, const VassGraph& g, const Query& from, const Query& to,
                           bool with_locations) {
  nlohmann::json out{{"decision", to_string(r.decision)},
                     {"bound_relative", r.bound_relative},
                     {"via_eff2d", r.via_eff2d},
                     {"from", {{"state", g.state_name(from.state)}, {"location", to_json(from.location)}}},
                     {"to", {{"state", g.state_name(to.state)}, {"location", to_json(to.location)}}},
                     {"stats", stats_json(r.stats)}};
  if (r.witness) {
    nlohmann::json w{{"transitions", path_json(g, r.witness->transitions)},
                     {"length", r.witness->transitions.size()},
                     {"start", to_json(r.witness->start)},
                     {"end", to_json(r.witness->end)},
                     {"start_state", g.state_name(r.witness->start_state)},
                     {"end_state", g.state_name(r.witness->end_state)}};
    if (with_locations) {
      auto locs = nlohmann::json::array();
      ZConfiguration c{r.witness->start_state, r.witness->start};
      locs.push_back(to_json(c.location));
      for (TransitionId t : r.witness->transitions) {
        c = step(g, c, t);
        locs.push_back(to_json(c.location));
      }
      w["locations"] = std::move(locs);
    }
    out["witness"] = std::move(w);
  } else {
    out["witness"] = nullptr;
  }
  if (r.oracle) out["oracle"] = oracle_json(*r.oracle, g);
  return out;
}

nlohmann::json oracle_json(const OracleResult& r, const VassGraph& g) {
  nlohmann::json out{{"reachable", r.reachable}, {"exact", r.exact}, {"states_explored", r.states_explored}};
  out["walk"] = r.walk ? path_json(g, *r.walk) : nlohmann::json(nullptr);
  return out;
}

}  // namespace vass
