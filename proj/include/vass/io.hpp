#pragma once

#include "vass/solver.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <string_view>

namespace vass {

// Text format, '#' starts a comment:
//   dim <d>
//   state <name>            one per state
//   init <name>             optional, defaults to the first state
//   final <name>            optional, defaults to the first state
//   trans <id> <src> <dst> <delta_1> ... <delta_d>
// Throws ParseError with 1-based line and column.
[[nodiscard]] std::shared_ptr<VassGraph> parse_vass(std::string_view text);
// Canonical text; unnamed transitions are written as t<index>.
[[nodiscard]] std::string emit_vass(const VassGraph& g);

struct Query {
  StateId state = 0;
  IntVector location;
};

// "<state> <m_1> ... <m_d>"
[[nodiscard]] Query parse_query(std::string_view text, const VassGraph& g);

[[nodiscard]] nlohmann::json to_json(const Integer& x);
[[nodiscard]] nlohmann::json to_json(const IntVector& v);
[[nodiscard]] nlohmann::json stats_json(const SolverStats& s);
// {decision, witness{transitions, start, end[, locations]}, bound_relative, stats, ...}
[[nodiscard]] nlohmann::json result_json(const ReachResult& r, const VassGraph& g, const Query& from, const Query& to,
                                         bool with_locations = false);
[[nodiscard]] nlohmann::json oracle_json(const OracleResult& r, const VassGraph& g);

}  // namespace vass
