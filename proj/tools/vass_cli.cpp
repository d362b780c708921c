#include "vass/diophantine.hpp"
#include "vass/errors.hpp"
#include "vass/io.hpp"
#include "vass/lps.hpp"
#include "vass/solver.hpp"
#include "vass/structure.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace vass;

namespace {

enum Exit { kReachable = 0, kUnreachable = 1, kUnknown = 2, kError = 3 };

std::shared_ptr<VassGraph> load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_vass(buf.str());
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Query query(const std::string& text, const VassGraph& g, const char* which) {
  try {
    return parse_query(text, g);
  } catch (const ParseError& e) {
    throw std::runtime_error(std::string(which) + " query: " + e.what());
  }
}

// "1 -1 0; 0 1 -1"
IntMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<Integer>> rows;
  std::stringstream all(text);
  std::string row;
  while (std::getline(all, row, ';')) {
    std::stringstream r(row);
    std::vector<Integer> cur;
    std::string tok;
    while (r >> tok) cur.push_back(Integer::parse(tok));
    if (!cur.empty()) rows.push_back(std::move(cur));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix");
  IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::runtime_error("ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::string row_string(const IntVector& v) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << v(i);
  return os.str();
}

int exit_for(Decision d) {
  switch (d) {
    case Decision::Reachable:
      return kReachable;
    case Decision::UnreachableProven:
      return kUnreachable;
    case Decision::Unknown:
      break;
  }
  return kUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reachability in 3-dimensional VASS"};
  app.require_subcommand(1);

  std::string input, from, to;
  bool json = false;

  SolverConfig cfg;
  bool locations = false;
  auto* reach = app.add_subcommand("reach", "decide p(m) -> q(n)");
  reach->add_option("--input", input, "VASS file")->required();
  reach->add_option("--from", from, "\"p m1 m2 m3\"")->required();
  reach->add_option("--to", to, "\"q n1 n2 n3\"")->required();
  reach->add_option("--c", cfg.lps_c, "exponent of the scheme length bound")->capture_default_str();
  reach->add_option("--max-depth", cfg.max_depth, "branch depth cap")->capture_default_str();
  reach->add_option("--max-nodes", cfg.max_nodes, "search node cap")->capture_default_str();
  reach->add_option("--band-cap", cfg.band_cap, "largest reduction band")->capture_default_str();
  reach->add_option("--coverability-cap", cfg.coverability_cap, "Karp-Miller node cap")->capture_default_str();
  reach->add_option("--oracle-box", cfg.oracle_box, "box for --cross-check")->capture_default_str();
  reach->add_option("--seed", cfg.seed, "branch order seed, 0 keeps the natural order")->capture_default_str();
  reach->add_flag("--cross-check", cfg.cross_check, "compare with the BFS oracle");
  reach->add_flag("--no-eff2d", [&](std::int64_t) { cfg.use_eff2d = false; }, "skip the planar fast path");
  reach->add_flag("--locations", locations, "include every intermediate location in the JSON witness");
  reach->add_flag("--json", json, "JSON output");

  long long box = 40;
  std::size_t state_cap = 4000000;
  auto* oracle = app.add_subcommand("oracle", "breadth-first search in a box");
  oracle->add_option("--input", input)->required();
  oracle->add_option("--from", from)->required();
  oracle->add_option("--to", to)->required();
  oracle->add_option("--box", box)->capture_default_str();
  oracle->add_option("--state-cap", state_cap)->capture_default_str();
  oracle->add_flag("--json", json);

  std::string matrix, rhs;
  auto* hilbert = app.add_subcommand("hilbert", "minimal solutions of A x = r over N");
  hilbert->add_option("--matrix", matrix, "rows separated by ';'")->required();
  hilbert->add_option("--rhs", rhs, "right-hand side, zero when omitted");
  hilbert->add_flag("--json", json);

  std::string p_name, q_name;
  std::size_t max_length = 4, max_cycles = 2, limit = 50;
  auto* lps = app.add_subcommand("lps-enum", "enumerate linear path schemes");
  lps->add_option("--input", input)->required();
  lps->add_option("--from-state", p_name)->required();
  lps->add_option("--to-state", q_name)->required();
  lps->add_option("--max-length", max_length)->capture_default_str();
  lps->add_option("--max-cycles", max_cycles)->capture_default_str();
  lps->add_option("--limit", limit)->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "standardize and decompose the sequence of one query");
  decompose->add_option("--input", input)->required();
  decompose->add_option("--from", from)->required();
  decompose->add_option("--to", to)->required();
  decompose->add_option("--limit", limit)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*reach) {
      auto g = load(input);
      if (g->dim() != 3) throw std::runtime_error("reach needs a 3-dimensional VASS");
      Query a = query(from, *g, "--from");
      Query b = query(to, *g, "--to");
      ReachResult r = reach3(g, a.state, a.location, b.state, b.location, cfg);
      if (json) {
        std::cout << result_json(r, *g, a, b, locations).dump(2) << '\n';
      } else {
        std::cout << to_string(r.decision) << (r.bound_relative ? " (relative to search bounds)" : "") << '\n';
        if (r.witness) {
          std::cout << "witness length " << r.witness->transitions.size() << '\n';
          for (std::size_t i = 0; i < r.witness->transitions.size(); ++i)
            std::cout << (i ? " " : "") << g->transition(r.witness->transitions[i]).name;
          std::cout << '\n';
        }
        for (const auto& reason : r.stats.cap_reasons) std::cout << "cap hit: " << reason << '\n';
        std::cout << "nodes " << r.stats.nodes << ", systems " << r.stats.systems_solved << '\n';
      }
      return exit_for(r.decision);
    }
    if (*oracle) {
      auto g = load(input);
      Query a = query(from, *g, "--from");
      Query b = query(to, *g, "--to");
      OracleResult r = bfs_oracle(*g, a.state, a.location, b.state, b.location, box, state_cap);
      if (json) {
        std::cout << oracle_json(r, *g).dump(2) << '\n';
      } else if (r.reachable) {
        std::cout << "reachable, walk length " << r.walk->size() << '\n';
      } else {
        std::cout << "not reachable within the box" << (r.exact ? " (exact)" : " (advisory)") << '\n';
      }
      if (r.reachable) return kReachable;
      return r.exact ? kUnreachable : kUnknown;
    }
    if (*hilbert) {
      IntMatrix a = parse_matrix(matrix);
      IntVector r = rhs.empty() ? IntVector::Zero(a.rows()) : parse_matrix(rhs).row(0).transpose().eval();
      if (r.size() != a.rows()) throw std::runtime_error("rhs length differs from the row count");
      MinimalSolutions ms = minimal_solutions(a, r);
      if (json) {
        nlohmann::json out{{"particular", nlohmann::json::array()}, {"homogeneous", nlohmann::json::array()}};
        for (const auto& v : ms.particular) out["particular"].push_back(to_json(v));
        for (const auto& v : ms.homogeneous) out["homogeneous"].push_back(to_json(v));
        std::cout << out.dump(2) << '\n';
      } else {
        for (const auto& v : ms.particular) std::cout << "particular  " << row_string(v) << '\n';
        for (const auto& v : ms.homogeneous) std::cout << "homogeneous " << row_string(v) << '\n';
      }
      return 0;
    }
    if (*lps) {
      auto g = load(input);
      auto p = g->find_state(p_name);
      auto q = g->find_state(q_name);
      if (!p || !q) throw std::runtime_error("unknown state");
      std::size_t shown = 0;
      (void)enumerate_lps(g, *p, *q, max_length, max_cycles, [&](const LinearPathScheme& rho) {
        std::cout << rho.to_string() << '\n';
        return ++shown < limit;
      });
      return 0;
    }
    if (*decompose) {
      auto g = load(input);
      Query a = query(from, *g, "--from");
      Query b = query(to, *g, "--to");
      auto xi = KlmSequence::single(g, a.state, ExtVector(a.location), b.state, ExtVector(b.location));
      std::cout << "input " << xi.to_string() << "  rank " << klm_rank(xi).to_string() << '\n';
      std::size_t shown = 0;
      for (const auto& s : standardize(xi)) {
        KlmAnalysis an = analyze(s);
        std::cout << "standard " << s.to_string() << "  rank " << klm_rank(s).to_string() << '\n';
        for (std::size_t i = 0; i < s.components.size(); ++i) {
          if (!s.components[i].is_graph() || !an.component_bounded(i)) {
            std::cout << "  component " << i << " has no bounded edge\n";
            continue;
          }
          std::size_t n = decompose_bounded(s, i, an, [&](const KlmSequence& d) {
            std::cout << "  branch " << d.to_string() << "  rank " << klm_rank(d).to_string() << '\n';
            return ++shown < limit;
          });
          std::cout << "  component " << i << ": " << n << " branch(es) stay in N^3\n";
        }
        if (shown >= limit) break;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
