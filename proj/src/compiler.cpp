#include "qwalk/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "qwalk/errors.hpp"
#include "qwalk/scattering.hpp"

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;

struct GateShape {
    int targets;
    int min_params;
    int max_params;
};

GateShape gate_shape(const std::string& name) {
    if (name == "x" || name == "h" || name == "id") return {1, 0, 0};
    if (name == "ry" || name == "rz") return {1, 1, 1};
    if (name == "u3") return {1, 3, 3};
    if (name == "cp") return {2, 0, 1};
    if (name == "cnot") return {2, 0, 0};
    throw ValidationError("unknown gate '" + name + "'");
}

void validate_gate(const GateOp& op, int n, std::size_t index) {
    const std::string where = "gate " + std::to_string(index) + " (" + op.name + "): ";
    GateShape shape;
    try {
        shape = gate_shape(op.name);
    } catch (const ValidationError& e) {
        throw ValidationError(where + e.what());
    }
    if (static_cast<int>(op.targets.size()) != shape.targets)
        throw ValidationError(where + "expects " + std::to_string(shape.targets) + " target(s)");
    for (int t : op.targets)
        if (t < 0 || t >= n) throw ValidationError(where + "target " + std::to_string(t) + " out of range");
    if (shape.targets == 2 && op.targets[0] == op.targets[1]) throw ValidationError(where + "duplicate targets");
    const int np = static_cast<int>(op.params.size());
    if (np < shape.min_params || np > shape.max_params)
        throw ValidationError(where + "wrong number of parameters");
    for (double p : op.params)
        if (!std::isfinite(p)) throw ValidationError(where + "non-finite parameter");
}

Mat2 single_matrix(const GateOp& op) {
    if (op.name == "x") return pauli_x();
    if (op.name == "h") return hadamard();
    if (op.name == "id") return Mat2::Identity();
    if (op.name == "ry") return ry(op.params[0]);
    if (op.name == "rz") return rz(op.params[0]);
    if (op.name == "u3") return u3(op.params[0], op.params[1], op.params[2]);
    throw ValidationError("not a single-qubit gate: " + op.name);
}

double cp_angle(const GateOp& op) { return op.params.empty() ? kPi : op.params[0]; }

}  // namespace

CircuitIR circuit_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("circuit must be a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer()) throw ValidationError("circuit needs integer field 'n'");
    CircuitIR ir;
    ir.n = j["n"].get<int>();
    if (ir.n < 1) throw ValidationError("circuit needs n >= 1");
    if (j.contains("gates")) {
        if (!j["gates"].is_array()) throw ValidationError("'gates' must be an array");
        for (std::size_t i = 0; i < j["gates"].size(); ++i) {
            const json& g = j["gates"][i];
            const std::string where = "gate " + std::to_string(i) + ": ";
            if (!g.is_object() || !g.contains("g") || !g["g"].is_string())
                throw ValidationError(where + "needs string field 'g'");
            GateOp op;
            op.name = g["g"].get<std::string>();
            if (!g.contains("t") || !g["t"].is_array()) throw ValidationError(where + "needs array field 't'");
            for (const json& t : g["t"]) {
                if (!t.is_number_integer()) throw ValidationError(where + "targets must be integers");
                op.targets.push_back(t.get<int>());
            }
            if (g.contains("p")) {
                if (!g["p"].is_array()) throw ValidationError(where + "'p' must be an array");
                for (const json& p : g["p"]) {
                    if (!p.is_number()) throw ValidationError(where + "parameters must be numbers");
                    op.params.push_back(p.get<double>());
                }
            }
            validate_gate(op, ir.n, i);
            ir.gates.push_back(std::move(op));
        }
    }
    return ir;
}

CircuitIR parse_circuit(const std::string& text) { return circuit_from_json(parse_json_text(text, "circuit")); }

json to_json(const CircuitIR& ir) {
    json gates = json::array();
    for (const GateOp& op : ir.gates) {
        json g = {{"g", op.name}, {"t", op.targets}};
        if (!op.params.empty()) g["p"] = op.params;
        gates.push_back(g);
    }
    return {{"n", ir.n}, {"gates", gates}};
}

IdealGate ideal_gate(const GateOp& op) {
    if (op.name == "cp") return {"cp", op.targets, cp_ideal(std::polar(1.0, cp_angle(op)))};
    if (op.name == "cnot") return {"cnot", op.targets, cnot_ideal()};
    return {op.name, op.targets, single_matrix(op)};
}

MatrixXc ideal_unitary(const CircuitIR& ir) {
    if (ir.n < 1 || ir.n > kMaxIdealQubits)
        throw CapacityError("ideal unitary limited to 1.." + std::to_string(kMaxIdealQubits) + " qubits");
    std::vector<IdealGate> gates;
    for (std::size_t i = 0; i < ir.gates.size(); ++i) {
        validate_gate(ir.gates[i], ir.n, i);
        gates.push_back(ideal_gate(ir.gates[i]));
    }
    const int dim = 1 << ir.n;
    MatrixXc u(dim, dim);
    for (int c = 0; c < dim; ++c) u.col(c) = gate_model_apply(ir.n, gates, basis_state(ir.n, c));
    return u;
}

BlockPlan schedule_blocks(const CircuitIR& ir) {
    BlockPlan plan;
    plan.n = ir.n;
    std::vector<int> frontier(ir.n, -1);

    auto place_single = [&](int q, const std::string& name, const Mat2& m, int source) {
        const int op = static_cast<int>(plan.ops.size());
        plan.ops.push_back({name, {q}, m, source});
        int b = frontier[q] + 1;
        while (b < plan.num_blocks() && plan.blocks[b].type != BlockType::Single) ++b;
        if (b == plan.num_blocks()) plan.blocks.push_back({BlockType::Single, std::vector<int>(ir.n, -1), {}});
        plan.blocks[b].op_of_qubit[q] = op;
        frontier[q] = b;
    };
    auto place_pair = [&](int q0, int q1, const MatrixXc& m, int source) {
        const int op = static_cast<int>(plan.ops.size());
        plan.ops.push_back({"cp", {q0, q1}, m, source});
        int b = std::max(frontier[q0], frontier[q1]) + 1;
        while (b < plan.num_blocks() && plan.blocks[b].type != BlockType::Pair) ++b;
        if (b == plan.num_blocks()) plan.blocks.push_back({BlockType::Pair, std::vector<int>(ir.n, -1), {}});
        plan.blocks[b].pair_ops.push_back(op);
        plan.blocks[b].op_of_qubit[q0] = op;
        plan.blocks[b].op_of_qubit[q1] = op;
        frontier[q0] = frontier[q1] = b;
    };

    for (std::size_t i = 0; i < ir.gates.size(); ++i) {
        const GateOp& g = ir.gates[i];
        validate_gate(g, ir.n, i);
        const int src = static_cast<int>(i);
        if (g.name == "cnot") {
            const int c = g.targets[0], t = g.targets[1];
            place_single(t, "h", hadamard(), src);
            place_pair(c, t, cp_ideal(-1.0), src);
            place_single(t, "h", hadamard(), src);
        } else if (g.name == "cp") {
            place_pair(g.targets[0], g.targets[1], cp_ideal(std::polar(1.0, cp_angle(g))), src);
        } else {
            place_single(g.targets[0], g.name, single_matrix(g), src);
        }
    }
    return plan;
}

namespace {

struct TraversalTable {
    // [orientation][color][from][to]
    double len[2][2][3][3];
};

TraversalTable traversal_table(int variant) {
    TraversalTable t{};
    const double k = -kPi / 2;
    for (int o = 0; o < 2; ++o) {
        const ScatteringRegion r = roundabout_region(variant, o == 0 ? Orientation::Left : Orientation::Right);
        for (int c = 0; c < 2; ++c) {
            const Eigen::MatrixXd tab = effective_length_table(r, k, static_cast<Color>(c));
            for (int from = 0; from < 3; ++from)
                for (int to = 0; to < 3; ++to) t.len[o][c][from][to] = tab(to, from);
        }
    }
    return t;
}

}  // namespace

int roundabout_traversal_length(int variant) {
    const TraversalTable t = traversal_table(variant);
    constexpr int L = 0, R = 1, red = 0, blue = 1;
    // Encoder (right): red 0 -> 2, blue 1 -> 2. Decoder (left): red 2 -> 0,
    // blue 2 -> 1. CP roundabouts (left, red): 1 -> 2 and 2 -> 0.
    const double used[] = {t.len[R][red][0][2], t.len[R][blue][1][2], t.len[L][red][2][0],
                           t.len[L][blue][2][1], t.len[L][red][1][2]};
    const double l = used[0];
    if (!std::isfinite(l) || std::abs(l - std::round(l)) > 1e-5)
        throw NumericalError("roundabout effective length is not an integer");
    for (double v : used)
        if (!std::isfinite(v) || std::abs(v - l) > 1e-5)
            throw NumericalError("roundabout traversals have unequal effective lengths");
    return static_cast<int>(std::lround(l));
}

namespace {

class Builder {
public:
    Builder(PhysicalLayout& out) : lay_(out) {}

    int vertex(double x, double y) {
        const int v = lay_.graph.add_vertices(1);
        lay_.coords.push_back({x, y});
        return v;
    }

    // count new vertices between `from` and `to` (either may be -1 for none),
    // linked in order; coordinates interpolated.
    std::vector<int> chain(int count, std::array<double, 2> p0, std::array<double, 2> p1) {
        std::vector<int> vs;
        for (int i = 0; i < count; ++i) {
            const double s = (i + 1.0) / (count + 1.0);
            vs.push_back(vertex(p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])));
            if (i > 0) lay_.graph.add_edge(vs[i - 1], vs[i], Weight::One);
        }
        return vs;
    }

    void link(int a, int b) { lay_.graph.add_edge(a, b, Weight::One); }

    // Joins a -> chain -> b; returns the chain.
    std::vector<int> path(int a, int b, int interior) {
        std::vector<int> vs = chain(interior, lay_.coords[a], lay_.coords[b]);
        if (vs.empty()) {
            link(a, b);
        } else {
            link(a, vs.front());
            link(vs.back(), b);
        }
        return vs;
    }

    // Inlines a roundabout. Terminals found in `fixed` reuse existing vertices;
    // the rest are created at the given positions. Returns region-to-layout ids.
    std::vector<int> roundabout(const ScatteringRegion& r, const std::array<int, 3>& fixed,
                                const std::array<std::array<double, 2>, 3>& pos) {
        std::vector<int> map(r.graph.num_vertices(), -1);
        for (int t = 0; t < 3; ++t) map[t] = fixed[t] >= 0 ? fixed[t] : vertex(pos[t][0], pos[t][1]);
        const double cx = (pos[0][0] + pos[1][0] + pos[2][0]) / 3, cy = (pos[0][1] + pos[1][1] + pos[2][1]) / 3;
        for (int v = 3; v < r.graph.num_vertices(); ++v) {
            const double a = 2 * kPi * (v - 3) / (r.graph.num_vertices() - 3);
            map[v] = vertex(cx + 0.5 * std::cos(a), cy + 0.5 * std::sin(a));
        }
        for (const Edge& e : r.graph.edges()) lay_.graph.add_edge(map[e.x], map[e.y], e.w);
        return map;
    }

    int device(const DeviceSpec& spec, std::vector<int> vertices, std::string label) {
        lay_.devices.push_back({spec, std::move(vertices)});
        lay_.device_labels.push_back(std::move(label));
        return static_cast<int>(lay_.devices.size()) - 1;
    }

private:
    PhysicalLayout& lay_;
};

std::string fmt_angle(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", a);
    return buf;
}

}  // namespace

PhysicalLayout lower(const BlockPlan& plan, const LowerOptions& options) {
    LowerOptions o = options;
    if (plan.n < 1) throw ValidationError("plan needs at least one qubit");
    if (o.L < 2) throw ValidationError("L must be at least 2");
    if (o.Lprime != 0 && o.Lprime < 4 * o.L) throw ValidationError("L' must be at least 4L");
    if (o.variant < 1 || o.variant > 3) throw ValidationError("roundabout variant must be 1, 2 or 3");
    if (!(o.h_max > 0) || !std::isfinite(o.h_max)) throw ValidationError("field bound must be positive");
    if (o.Lprime == 0) o.Lprime = 4 * o.L;

    bool has_pairs = false;
    for (const Block& b : plan.blocks) has_pairs = has_pairs || b.type == BlockType::Pair;
    if (has_pairs) {
        const double need = o.statistics == Statistics::Fermion ? 2.0 : 4.0;
        if (std::abs(std::abs(o.u) - need) > 1e-12)
            throw ValidationError("u = " + fmt_angle(o.u) + " does not give a CP scattering phase of +-i for " +
                                  to_string(o.statistics) + "s (need u = +-" + fmt_angle(need) + ")");
        for (const Block& b : plan.blocks)
            for (int op : b.pair_ops) {
                const MatrixXc& m = plan.ops[op].matrix;
                if (std::abs(m(3, 3) + 1.0) > 1e-12)
                    throw ValidationError("only CP(-1) is compilable; got phase " + fmt_angle(std::arg(m(3, 3))));
            }
    }

    PhysicalLayout lay;
    lay.n = plan.n;
    lay.options = o;
    const int lr = roundabout_traversal_length(o.variant);
    lay.roundabout_length = lr;
    const TraversalTable table = traversal_table(o.variant);
    Builder b(lay);

    const int rails = 2 * plan.n;
    const int nb = plan.num_blocks();
    const int seg_len = 3 * o.L;
    const double rail_dy = 10.0;

    // Per-block hop counts determine horizontal extents, so compute them first.
    const DeviceSpec x_dev = device_spec(Axis::Y, kPi, o.h_max);
    const DeviceSpec x_undo = device_spec(Axis::Y, -kPi, o.h_max);
    const int px = x_dev.length + 4;

    struct SingleInfo {
        std::vector<std::vector<DeviceSpec>> chains;  // per qubit
        std::vector<bool> encoded;
        int pmid = 0;
    };
    std::vector<SingleInfo> single(nb);
    std::vector<int> hops(nb), pair_index(nb, -1), path_len(nb, 0);
    int m = 0;
    for (int bi = 0; bi < nb; ++bi) {
        const Block& blk = plan.blocks[bi];
        if (blk.type == BlockType::Single) {
            SingleInfo& s = single[bi];
            s.chains.resize(plan.n);
            s.encoded.assign(plan.n, false);
            int longest = 0;
            for (int q = 0; q < plan.n; ++q) {
                const int op = blk.op_of_qubit[q];
                if (op >= 0) {
                    const Mat2 u = plan.ops[op].matrix;
                    s.chains[q] = rotation_chain(single_qubit_decompose(u), o.h_max);
                }
                s.encoded[q] = !s.chains[q].empty() || o.encode_identities;
                int len = 0;
                for (const DeviceSpec& d : s.chains[q]) len += d.length;
                longest = std::max(longest, len);
            }
            s.pmid = longest + 4;
            hops[bi] = 2 * px + s.pmid + 2 * lr + 3;
        } else {
            pair_index[bi] = m;
            path_len[bi] = o.Lprime + (o.statistics == Statistics::Fermion ? m : 0);
            hops[bi] = 2 * path_len[bi] + 4 * lr + 1;
            ++m;
        }
    }

    // Horizontal coordinate of each segment start.
    std::vector<double> seg_x(nb + 1);
    seg_x[0] = 0;
    for (int bi = 0; bi < nb; ++bi) seg_x[bi + 1] = seg_x[bi] + (seg_len - 1) + hops[bi];

    lay.segments.assign(rails, {});
    for (int r = 0; r < rails; ++r)
        for (int s = 0; s <= nb; ++s) {
            const double y = r * rail_dy;
            lay.segments[r].push_back(b.chain(seg_len, {seg_x[s] - 1, y}, {seg_x[s] + seg_len, y}));
        }

    auto input_of = [&](int r, int bi) {
        std::vector<int> v = lay.segments[r][bi];
        std::reverse(v.begin(), v.end());
        return v;
    };

    for (int bi = 0; bi < nb; ++bi) {
        const Block& blk = plan.blocks[bi];
        BlockGeometry geo;
        geo.type = blk.type;
        geo.pair_index = pair_index[bi];
        geo.path_length = path_len[bi];
        geo.hops = hops[bi];
        geo.tau = (seg_len - 1 + hops[bi]) / 2.0;
        geo.two_particle_shift.assign(rails, 0.0);
        for (int r = 0; r < rails; ++r) {
            geo.input.push_back(input_of(r, bi));
            geo.output.push_back(lay.segments[r][bi + 1]);
        }
        const int v_begin = lay.graph.num_vertices();
        const double x0 = seg_x[bi] + seg_len - 1;  // x of input x = 0 vertices
        // Effective length along each rail's route, with roundabouts counted by
        // the traversal table for the color the walker has inside them.
        std::vector<double> sync(rails, 0.0);

        if (blk.type == BlockType::Single) {
            const SingleInfo& s = single[bi];
            for (int q = 0; q < plan.n; ++q) {
                const int r0 = 2 * q, r1 = 2 * q + 1;
                const int in0 = geo.input[r0][0], in1 = geo.input[r1][0];
                const int out0 = geo.output[r0][0], out1 = geo.output[r1][0];
                const int op = blk.op_of_qubit[q];
                if (!s.encoded[q]) {
                    b.path(in0, out0, hops[bi] - 1);
                    b.path(in1, out1, hops[bi] - 1);
                    sync[r0] = sync[r1] = hops[bi];
                    if (op >= 0) lay.coverage.push_back({plan.ops[op].source, op, bi, "identity rails " +
                                                        std::to_string(r0) + "," + std::to_string(r1)});
                    continue;
                }
                const double y0 = r0 * rail_dy, y1 = r1 * rail_dy, ym = (y0 + y1) / 2;
                const double xe = x0 + px + 1, xd = xe + lr + s.pmid + 1;
                const std::array<std::array<double, 2>, 3> enc_pos{{{xe, y0}, {xe, y1}, {xe + lr, ym}}};
                const std::array<std::array<double, 2>, 3> dec_pos{{{xd + lr, y0}, {xd + lr, y1}, {xd, ym}}};
                const auto enc = b.roundabout(roundabout_region(o.variant, Orientation::Right), {-1, -1, -1}, enc_pos);
                const auto dec = b.roundabout(roundabout_region(o.variant, Orientation::Left), {-1, -1, -1}, dec_pos);
                const auto pre0 = b.path(in0, enc[0], px);
                const auto pre1 = b.path(in1, enc[1], px);
                const auto mid = b.path(enc[2], dec[2], s.pmid);
                const auto post0 = b.path(dec[0], out0, px);
                const auto post1 = b.path(dec[1], out1, px);

                std::vector<std::string> parts;
                const std::string tag = "block " + std::to_string(bi) + " qubit " + std::to_string(q);
                geo.devices.push_back(b.device(x_dev, {pre1.begin() + 2, pre1.begin() + 2 + x_dev.length},
                                               tag + " encoder X"));
                parts.push_back("encoder X device " + std::to_string(geo.devices.back()));
                int at = 2;
                for (const DeviceSpec& d : s.chains[q]) {
                    const std::string name = (d.axis == Axis::Y ? "Ry(" : "Rz(") + fmt_angle(d.theta) + ")";
                    geo.devices.push_back(
                        b.device(d, {mid.begin() + at, mid.begin() + at + d.length}, tag + " " + name));
                    parts.push_back(name + " device " + std::to_string(geo.devices.back()));
                    at += d.length;
                }
                geo.devices.push_back(b.device(x_undo, {post1.begin() + 2, post1.begin() + 2 + x_undo.length},
                                               tag + " decoder X"));
                parts.push_back("decoder X device " + std::to_string(geo.devices.back()));

                constexpr int L_ = 0, R_ = 1;
                const double lr0 = table.len[R_][0][0][2] + table.len[L_][0][2][0];
                const double lr1 = table.len[R_][1][1][2] + table.len[L_][1][2][1];
                sync[r0] = (px + 1) + lr0 + (s.pmid + 1) + (px + 1);
                sync[r1] = (px + 1) + lr1 + (s.pmid + 1) + (px + 1);
                if (op >= 0) {
                    std::string el = "encoder/decoder on rails " + std::to_string(r0) + "," + std::to_string(r1);
                    for (const std::string& p : parts) el += "; " + p;
                    lay.coverage.push_back({plan.ops[op].source, op, bi, el});
                }
            }
        } else {
            const int lp = path_len[bi];
            std::vector<bool> on_route(rails, false);
            for (int op : blk.pair_ops) {
                const int qa = std::min(plan.ops[op].targets[0], plan.ops[op].targets[1]);
                const int qb = std::max(plan.ops[op].targets[0], plan.ops[op].targets[1]);
                const int ra = 2 * qa + 1, rb = 2 * qb + 1;
                on_route[ra] = on_route[rb] = true;
                geo.cp_rails.push_back({ra, rb});
                const double ya = ra * rail_dy, yb = rb * rail_dy;
                const double xa = x0, xc = x0 + 2 * lr + lp + 1;
                // Left roundabouts: west = 1, vertical = 2, east = 0.
                const auto left = roundabout_region(o.variant, Orientation::Left);
                const auto ra1 = b.roundabout(left, {-1, geo.input[ra][0], -1},
                                              {{{xa + lr, ya}, {xa, ya}, {xa + lr / 2.0, ya + 2}}});
                const auto ra2 = b.roundabout(left, {-1, geo.input[rb][0], -1},
                                              {{{xa + lr, yb}, {xa, yb}, {xa + lr / 2.0, yb - 2}}});
                const auto ra3 = b.roundabout(left, {geo.output[ra][0], -1, -1},
                                              {{{xc + 2 * lr, ya}, {xc, ya}, {xc + lr, ya + 2}}});
                const auto ra4 = b.roundabout(left, {geo.output[rb][0], -1, -1},
                                              {{{xc + 2 * lr, yb}, {xc, yb}, {xc + lr, yb - 2}}});
                b.path(ra1[2], ra2[2], lp - 1);
                b.path(ra4[2], ra3[2], lp - 1);
                b.link(ra1[0], ra3[1]);
                b.link(ra2[0], ra4[1]);
                constexpr int L_ = 0;
                const double route = table.len[L_][0][1][2] + lp + table.len[L_][0][2][0] + 1 +
                                     table.len[L_][0][1][2] + lp + table.len[L_][0][2][0];
                sync[ra] = sync[rb] = route;
                const double shift = 2 * two_particle_effective_length(o.statistics, o.u);
                geo.two_particle_shift[ra] = geo.two_particle_shift[rb] = shift;
                lay.coverage.push_back({plan.ops[op].source, op, bi,
                                        "CP(-1) between rails " + std::to_string(ra) + "," + std::to_string(rb) +
                                            "; vertical paths of length " + std::to_string(lp)});
            }
            for (int r = 0; r < rails; ++r) {
                if (on_route[r]) continue;
                b.path(geo.input[r][0], geo.output[r][0], hops[bi] - 1);
                sync[r] = hops[bi];
            }
        }

        for (int r = 0; r < rails; ++r)
            if (std::abs(sync[r] - hops[bi]) > 1e-4)
                throw NumericalError("block " + std::to_string(bi) + " rail " + std::to_string(r) +
                                     " is out of sync: " + std::to_string(sync[r]) + " vs " +
                                     std::to_string(hops[bi]));
        for (int v = v_begin; v < lay.graph.num_vertices(); ++v) geo.interior.push_back(v);
        lay.blocks.push_back(std::move(geo));
    }

    // Every planned op must have produced layout elements.
    std::set<int> covered;
    for (const CoverageEntry& c : lay.coverage) covered.insert(c.op);
    for (int op = 0; op < static_cast<int>(plan.ops.size()); ++op)
        if (!covered.count(op)) throw NumericalError("op " + std::to_string(op) + " missing from the layout");
    return lay;
}

json layout_to_json(const PhysicalLayout& lay) {
    json j = to_json(lay.graph);
    j["n_qubits"] = lay.n;
    const LowerOptions& o = lay.options;
    j["parameters"] = {{"L", o.L},
                       {"Lprime", o.Lprime},
                       {"variant", o.variant},
                       {"statistics", to_string(o.statistics)},
                       {"u", o.u},
                       {"H_field_max", o.h_max},
                       {"encode_identities", o.encode_identities},
                       {"roundabout_length", lay.roundabout_length}};
    j["coords"] = lay.coords;
    j["rails"] = lay.segments;
    json devs = json::array();
    for (std::size_t i = 0; i < lay.devices.size(); ++i) {
        const Device& d = lay.devices[i];
        devs.push_back({{"vertices", d.vertices},
                        {"axis", d.spec.axis == Axis::Y ? "y" : "z"},
                        {"H_field", d.spec.field},
                        {"theta", d.spec.theta},
                        {"label", lay.device_labels[i]}});
    }
    j["devices"] = devs;
    json blocks = json::array();
    for (std::size_t i = 0; i < lay.blocks.size(); ++i) {
        const BlockGeometry& g = lay.blocks[i];
        json bj = {{"type", static_cast<int>(g.type)},
                   {"bounds", {{"input", g.input}, {"output", g.output}}},
                   {"interior_vertices", g.interior.size()},
                   {"hops", g.hops},
                   {"tau", g.tau},
                   {"devices", g.devices},
                   {"two_particle_shift", g.two_particle_shift}};
        if (g.type == BlockType::Pair) {
            bj["m"] = g.pair_index;
            bj["vertical_path_length"] = g.path_length;
            bj["cp_rails"] = g.cp_rails;
        }
        blocks.push_back(bj);
    }
    j["blocks"] = blocks;
    json packets = json::array();
    for (int r = 0; r < lay.num_rails(); ++r)
        packets.push_back({{"rail", r},
                           {"segment", lay.blocks.empty() ? lay.segments[r][0] : lay.blocks[0].input[r]},
                           {"L", o.L},
                           {"sign", "input"},
                           {"color", "red"}});
    j["packets"] = packets;
    json cov = json::array();
    for (const CoverageEntry& c : lay.coverage)
        cov.push_back({{"ir_gate", c.ir_gate}, {"op", c.op}, {"block", c.block}, {"element", c.element}});
    j["coverage"] = cov;
    return j;
}

}  // namespace qwalk
