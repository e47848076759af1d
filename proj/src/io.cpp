#include "qwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qwalk {

json to_json(const Graph& g, const std::vector<int>& terminals) {
    json edges = json::array();
    for (const Edge& e : g.edges()) {
        const auto [re, im] = weight_to_pair(e.w);
        edges.push_back({e.x, e.y, {re, im}});
    }
    return {{"num_vertices", g.num_vertices()}, {"edges", edges}, {"terminals", terminals}};
}

Graph graph_from_json(const json& j) {
    try {
        Graph g(j.at("num_vertices").get<int>());
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) throw ValidationError("edge entries must be [x, y, [re, im]]");
            g.add_edge(e[0].get<int>(), e[1].get<int>(), weight_from_pair(e[2].at(0).get<int>(), e[2].at(1).get<int>()));
        }
        return g;
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("malformed graph: ") + ex.what());
    }
}

json to_json(const ScatteringRegion& r) { return to_json(r.graph, r.terminals); }

ScatteringRegion region_from_json(const json& j) {
    ScatteringRegion r{graph_from_json(j), {}};
    try {
        r.terminals = j.at("terminals").get<std::vector<int>>();
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("malformed terminals: ") + ex.what());
    }
    r.validate();
    return r;
}

json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& ex) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < ex.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ValidationError(what + ": syntax error at line " + std::to_string(line) + ", column " +
                              std::to_string(col));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << content;
}

std::string config_hash(const json& j) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qwalk
