#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hubway/embed.h"
#include "hubway/solvers.h"
#include "hubway/towns.h"

namespace hubway {

/// File or stream failures (missing files, unwritable outputs).
struct IoError : Error {
  using Error::Error;
};

/// Edge list: first data line "n m", then m lines "u v length". Tokens are
/// whitespace separated; '#' starts a comment; blank lines are ignored.
/// Malformed input throws Error("line N: ...").
WeightedGraph parse_edge_list(std::istream& in);
WeightedGraph read_graph(const std::string& path);
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void write_graph(const std::string& path, const WeightedGraph& g);

/// Whitespace-separated vertex ids with '#' comments.
VertexSet read_vertex_list(const std::string& path);

/// Lines "v open_cost [phi]"; unspecified vertices keep open cost 0 and phi 1.
void read_costs(const std::string& path, int n, std::vector<double>& open_cost, std::vector<double>& phi);

nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);
void write_text(const std::string& path, const std::string& text);

void to_json(nlohmann::json& j, const WeightedGraph& g);
void from_json(const nlohmann::json& j, WeightedGraph& g);
void to_json(nlohmann::json& j, const HdConfig& c);
void from_json(const nlohmann::json& j, HdConfig& c);
void to_json(nlohmann::json& j, const CoverLadder& l);
void from_json(const nlohmann::json& j, CoverLadder& l);
void to_json(nlohmann::json& j, const TownsDecomposition& td);
void from_json(const nlohmann::json& j, TownsDecomposition& td);
void to_json(nlohmann::json& j, const TreeDecomposition& d);
void from_json(const nlohmann::json& j, TreeDecomposition& d);
void to_json(nlohmann::json& j, const EmbeddedGraph& g);
void from_json(const nlohmann::json& j, EmbeddedGraph& g);
void to_json(nlohmann::json& j, const Embedding& e);
void from_json(const nlohmann::json& j, Embedding& e);
void to_json(nlohmann::json& j, const SolveResult& r);
void from_json(const nlohmann::json& j, SolveResult& r);
void to_json(nlohmann::json& j, const HdResult& r);
void from_json(const nlohmann::json& j, HdResult& r);
void to_json(nlohmann::json& j, const ValidationReport& r);

}  // namespace hubway
