#pragma once

#include <string>

#include "json.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

using json = nlohmann::json;

// {num_vertices, edges: [[x, y, [re, im]], ...], terminals: [...]}
json to_json(const Graph& g, const std::vector<int>& terminals = {});
Graph graph_from_json(const json& j);
json to_json(const ScatteringRegion& r);
ScatteringRegion region_from_json(const json& j);

// Parses text, reporting syntax errors with line and column.
json parse_json_text(const std::string& text, const std::string& what);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// 64-bit FNV-1a of the compact dump, hex encoded.
std::string config_hash(const json& j);

}  // namespace qwalk
