#include "qwalk/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qwalk {

Weight weight_from_pair(int re, int im) {
    if (re == 1 && im == 0) return Weight::One;
    if (re == 0 && im == 1) return Weight::PlusI;
    if (re == 0 && im == -1) return Weight::MinusI;
    throw ValidationError("edge weight must be one of 1, i, -i; got (" + std::to_string(re) + ", " +
                          std::to_string(im) + ")");
}

std::pair<int, int> weight_to_pair(Weight w) {
    switch (w) {
        case Weight::PlusI: return {0, 1};
        case Weight::MinusI: return {0, -1};
        default: return {1, 0};
    }
}

Graph::Graph(int num_vertices) {
    if (num_vertices < 0) throw ValidationError("negative vertex count");
    n_ = num_vertices;
    nbrs_.resize(n_);
}

int Graph::add_vertices(int count) {
    if (count < 0) throw ValidationError("negative vertex count");
    const int first = n_;
    n_ += count;
    nbrs_.resize(n_);
    return first;
}

std::uint64_t Graph::key(int x, int y) {
    const auto lo = static_cast<std::uint64_t>(std::min(x, y));
    const auto hi = static_cast<std::uint64_t>(std::max(x, y));
    return (lo << 32) | hi;
}

void Graph::add_edge(int x, int y, Weight w) {
    if (x < 0 || y < 0 || x >= n_ || y >= n_)
        throw ValidationError("edge (" + std::to_string(x) + ", " + std::to_string(y) + ") out of range");
    if (x == y) throw ValidationError("self-loop at vertex " + std::to_string(x));
    const auto k = key(x, y);
    if (index_.count(k))
        throw ValidationError("duplicate edge {" + std::to_string(x) + ", " + std::to_string(y) + "}");
    index_.emplace(k, edges_.size());
    edges_.push_back({x, y, w});
    nbrs_[x].push_back(y);
    nbrs_[y].push_back(x);
}

bool Graph::has_edge(int x, int y) const { return x != y && index_.count(key(x, y)) > 0; }

std::optional<Weight> Graph::weight(int x, int y) const {
    if (x == y) return std::nullopt;
    auto it = index_.find(key(x, y));
    if (it == index_.end()) return std::nullopt;
    const Edge& e = edges_[it->second];
    return e.x == x ? e.w : conj(e.w);
}

int Graph::degree(int v) const { return static_cast<int>(nbrs_.at(v).size()); }

Graph Graph::induced(const std::vector<int>& vertices) const {
    std::vector<int> relabel(n_, -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (relabel.at(vertices[i]) >= 0) throw ValidationError("repeated vertex in induced subgraph");
        relabel[vertices[i]] = static_cast<int>(i);
    }
    Graph g(static_cast<int>(vertices.size()));
    for (const Edge& e : edges_) {
        const int a = relabel[e.x], b = relabel[e.y];
        if (a >= 0 && b >= 0) g.add_edge(a, b, e.w);
    }
    return g;
}

bool Graph::operator==(const Graph& o) const {
    if (n_ != o.n_ || edges_.size() != o.edges_.size()) return false;
    for (const Edge& e : edges_) {
        if (o.weight(e.x, e.y) != e.w) return false;
    }
    return true;
}

Graph conjugate(const Graph& g) {
    Graph out(g.num_vertices());
    for (const Edge& e : g.edges()) out.add_edge(e.x, e.y, conj(e.w));
    return out;
}

std::vector<int> component_labels(const Graph& g) {
    std::vector<int> label(g.num_vertices(), -1);
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.num_vertices(); ++s) {
        if (label[s] >= 0) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int u : g.neighbors(v)) {
                if (label[u] < 0) {
                    label[u] = next;
                    stack.push_back(u);
                }
            }
        }
        ++next;
    }
    return label;
}

std::vector<int> ScatteringRegion::internal() const {
    std::vector<bool> is_terminal(graph.num_vertices(), false);
    for (int t : terminals) is_terminal.at(t) = true;
    std::vector<int> out;
    for (int v = 0; v < graph.num_vertices(); ++v)
        if (!is_terminal[v]) out.push_back(v);
    return out;
}

std::vector<int> ScatteringRegion::ordering() const {
    std::vector<int> order = terminals;
    const auto in = internal();
    order.insert(order.end(), in.begin(), in.end());
    return order;
}

void ScatteringRegion::validate() const {
    if (terminals.empty()) throw ValidationError("scattering region needs at least one terminal");
    std::vector<bool> seen(graph.num_vertices(), false);
    for (int t : terminals) {
        if (t < 0 || t >= graph.num_vertices()) throw ValidationError("terminal out of range");
        if (seen[t]) throw ValidationError("repeated terminal " + std::to_string(t));
        seen[t] = true;
    }
}

ScatteringRegion conjugate(const ScatteringRegion& r) { return {conjugate(r.graph), r.terminals}; }

ScatteringRegion roundabout_region(int variant, Orientation orientation) {
    ScatteringRegion r;
    switch (variant) {
        case 1:
            // Triangle with flux on the three internal vertices.
            r.graph = Graph(6);
            for (int j = 0; j < 3; ++j) r.graph.add_edge(j, 3 + j, Weight::One);
            for (int j = 0; j < 3; ++j) r.graph.add_edge(3 + j, 3 + (j + 1) % 3, Weight::MinusI);
            break;
        case 2:
        case 3: {
            // Terminals 0 and 1 sit on a flux triangle 3-4-6; terminal 2 reaches
            // vertex 6 through vertex 5. Variant 3 moves phases onto the other edges.
            const Weight side = variant == 2 ? Weight::One : Weight::PlusI;
            r.graph = Graph(7);
            r.graph.add_edge(0, 3, Weight::One);
            r.graph.add_edge(1, 4, Weight::One);
            r.graph.add_edge(2, 5, Weight::One);
            r.graph.add_edge(3, 4, Weight::PlusI);
            r.graph.add_edge(3, 6, side);
            r.graph.add_edge(4, 6, side);
            r.graph.add_edge(5, 6, side);
            break;
        }
        default:
            throw ValidationError("unknown roundabout variant " + std::to_string(variant));
    }
    r.terminals = {0, 1, 2};
    if (orientation == Orientation::Right) r.graph = conjugate(r.graph);
    return r;
}

}  // namespace qwalk

namespace qwalk {

ScatteringRegion random_region(std::mt19937_64& rng, int vertices, int terminals) {
    if (terminals < 1 || terminals > vertices) throw ValidationError("need 1 <= terminals <= vertices");
    std::uniform_int_distribution<int> coin(0, 1), pick(0, 2);
    const Weight ws[] = {Weight::One, Weight::PlusI, Weight::MinusI};
    ScatteringRegion r{Graph(vertices), {}};
    for (int x = 0; x < vertices; ++x)
        for (int y = x + 1; y < vertices; ++y)
            if (coin(rng)) r.graph.add_edge(x, y, ws[pick(rng)]);
    for (int t = 0; t < terminals; ++t) r.terminals.push_back(t);
    return r;
}

}  // namespace qwalk
