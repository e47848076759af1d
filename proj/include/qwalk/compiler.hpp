#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qwalk/dynamics.hpp"
#include "qwalk/gates.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/io.hpp"
#include "qwalk/two_particle.hpp"

namespace qwalk {

struct GateOp {
    std::string name;
    std::vector<int> targets;
    std::vector<double> params;
};

struct CircuitIR {
    int n = 0;
    std::vector<GateOp> gates;
};

// {"n": int, "gates": [{"g": name, "t": [...], "p": [...]}]}
CircuitIR parse_circuit(const std::string& text);
CircuitIR circuit_from_json(const json& j);
json to_json(const CircuitIR& ir);

// "cp" takes an optional phase angle p[0] (default pi, i.e. CP(-1)).
IdealGate ideal_gate(const GateOp& op);

inline constexpr int kMaxIdealQubits = 10;
MatrixXc ideal_unitary(const CircuitIR& ir);

enum class BlockType { Single = 1, Pair = 2 };

// One primitive after CNOT expansion. `source` is the IR gate it came from.
struct PlannedOp {
    std::string name;
    std::vector<int> targets;
    MatrixXc matrix;
    int source = -1;
};

struct Block {
    BlockType type = BlockType::Single;
    std::vector<int> op_of_qubit;  // index into ops, -1 for identity
    std::vector<int> pair_ops;     // type 2: disjoint CP ops
};

struct BlockPlan {
    int n = 0;
    std::vector<PlannedOp> ops;
    std::vector<Block> blocks;
    int num_blocks() const { return static_cast<int>(blocks.size()); }
};

// Greedy ASAP packing; CNOT(c, t) expands to H(t), CP(c, t), H(t).
BlockPlan schedule_blocks(const CircuitIR& ir);

struct LowerOptions {
    int L = 8;
    int Lprime = 0;  // 0 selects 4L
    int variant = 2;
    Statistics statistics = Statistics::Fermion;
    double u = -2.0;
    double h_max = kDefaultFieldMax;
    // Route identity slots of type-1 blocks through encoder and decoder too.
    bool encode_identities = false;
};

struct BlockGeometry {
    BlockType type = BlockType::Single;
    int pair_index = -1;  // m for the m-th type-2 block
    int path_length = 0;  // vertical path length L' + m (type 2)
    std::vector<std::vector<int>> input;   // per rail, by distance from the block
    std::vector<std::vector<int>> output;  // per rail, by distance from the block
    std::vector<int> interior;
    int hops = 0;  // input x = 0 to output x = 0, roundabouts counted by effective length
    double tau = 0;
    std::vector<int> devices;
    std::vector<std::array<int, 2>> cp_rails;
    // Per rail: two-particle advance when both CP walkers are present.
    std::vector<double> two_particle_shift;
};

struct CoverageEntry {
    int ir_gate = -1;
    int op = -1;
    int block = -1;
    std::string element;
};

struct PhysicalLayout {
    int n = 0;
    LowerOptions options;
    int roundabout_length = 0;
    Graph graph;
    std::vector<std::array<double, 2>> coords;
    std::vector<Device> devices;
    std::vector<std::string> device_labels;
    std::vector<BlockGeometry> blocks;
    std::vector<std::vector<std::vector<int>>> segments;  // [rail][s], west to east
    std::vector<CoverageEntry> coverage;

    int num_rails() const { return 2 * n; }
};

// Effective length of every roundabout traversal the layout uses, checked to
// be one common integer.
int roundabout_traversal_length(int variant);

PhysicalLayout lower(const BlockPlan& plan, const LowerOptions& options);
json layout_to_json(const PhysicalLayout& layout);

}  // namespace qwalk
