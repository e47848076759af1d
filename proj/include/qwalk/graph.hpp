#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"

namespace qwalk {

using cplx = std::complex<double>;

template <class T>
using CMat = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using CVec = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;

using MatrixXc = CMat<double>;
using VectorXc = CVec<double>;

// Edge weights are kept symbolic so that Hermiticity is exact.
enum class Weight : std::uint8_t { One, PlusI, MinusI };

inline Weight conj(Weight w) {
    switch (w) {
        case Weight::PlusI: return Weight::MinusI;
        case Weight::MinusI: return Weight::PlusI;
        default: return Weight::One;
    }
}

template <class T = double>
std::complex<T> value(Weight w) {
    switch (w) {
        case Weight::PlusI: return {T(0), T(1)};
        case Weight::MinusI: return {T(0), T(-1)};
        default: return {T(1), T(0)};
    }
}

// Parses a unit weight given as an integer (re, im) pair.
Weight weight_from_pair(int re, int im);
std::pair<int, int> weight_to_pair(Weight w);

struct Edge {
    int x;
    int y;
    Weight w;  // adjacency (x, y) = w, (y, x) = conj(w)
};

class Graph {
public:
    Graph() = default;
    explicit Graph(int num_vertices);

    int num_vertices() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Returns the id of the first new vertex.
    int add_vertices(int count);
    void add_edge(int x, int y, Weight w);

    bool has_edge(int x, int y) const;
    // Adjacency entry a_xy, if an edge joins x and y.
    std::optional<Weight> weight(int x, int y) const;
    int degree(int v) const;
    const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }

    template <class T = double>
    CMat<T> adjacency() const {
        CMat<T> a = CMat<T>::Zero(n_, n_);
        for (const Edge& e : edges_) {
            a(e.x, e.y) = value<T>(e.w);
            a(e.y, e.x) = value<T>(conj(e.w));
        }
        return a;
    }

    // Subgraph on `vertices`, renumbered in the given order.
    Graph induced(const std::vector<int>& vertices) const;

    bool operator==(const Graph& o) const;

private:
    static std::uint64_t key(int x, int y);

    int n_ = 0;
    std::vector<Edge> edges_;
    std::map<std::uint64_t, std::size_t> index_;
    std::vector<std::vector<int>> nbrs_;
};

Graph conjugate(const Graph& g);

// Connected components as lists of vertex ids; label[v] gives the component index.
std::vector<int> component_labels(const Graph& g);

struct ScatteringRegion {
    Graph graph;
    std::vector<int> terminals;

    int num_terminals() const { return static_cast<int>(terminals.size()); }
    std::vector<int> internal() const;
    // Terminals first, then internal vertices in increasing id.
    std::vector<int> ordering() const;
    void validate() const;
};

ScatteringRegion conjugate(const ScatteringRegion& r);

enum class Orientation { Left, Right };

// The three roundabout regions. Terminals are vertices 0, 1, 2 and carry the
// path labels; internal vertices follow. Right orientation is the conjugate.
ScatteringRegion roundabout_region(int variant, Orientation orientation);

// Each vertex pair joined with probability 1/2, weight drawn from {1, i, -i};
// terminals are vertices 0..terminals-1.
ScatteringRegion random_region(std::mt19937_64& rng, int vertices, int terminals);

template <class T = double>
struct Partition {
    CMat<T> A;  // N x N, terminals
    CMat<T> B;  // M x N, internal <- terminal
    CMat<T> D;  // M x M, internal
};

template <class T = double>
Partition<T> partition(const ScatteringRegion& r) {
    r.validate();
    const std::vector<int> order = r.ordering();
    const CMat<T> a = r.graph.adjacency<T>();
    const int n = r.num_terminals();
    const int m = static_cast<int>(order.size()) - n;
    Eigen::VectorXi idx(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) idx[i] = order[i];
    const CMat<T> p = a(idx, idx);
    return {p.topLeftCorner(n, n), p.bottomLeftCorner(m, n), p.bottomRightCorner(m, m)};
}

// Inverse of partition: block matrix [[A, B^dagger], [B, D]].
template <class T>
CMat<T> assemble(const Partition<T>& p) {
    const auto n = p.A.rows();
    const auto m = p.D.rows();
    CMat<T> out(n + m, n + m);
    out.topLeftCorner(n, n) = p.A;
    out.topRightCorner(n, m) = p.B.adjoint();
    out.bottomLeftCorner(m, n) = p.B;
    out.bottomRightCorner(m, m) = p.D;
    return out;
}

}  // namespace qwalk
