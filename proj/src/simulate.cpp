#include "qwalk/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

// One connected component of a block's graph. Components never exchange
// amplitude, so each is evolved on its own.
struct Component {
    SpMat h;
    std::vector<int> in_state;   // red states on input segments
    std::vector<int> out_state;  // red states on output segments
    MatrixXc transfer;           // out x in, single walker
    std::unique_ptr<PairPropagator> pair;
};

struct BlockModel {
    double tau = 0;
    std::vector<Component> comps;
    std::vector<int> comp_of;  // global vertex -> component, -1 outside the block
    std::vector<int> in_pos;   // global vertex -> index into its component's in_state
    std::vector<int> out_pos;  // global vertex -> index into its component's out_state
    std::vector<std::vector<int>> carry_in;   // per qubit: input[2q] then input[2q+1]
    std::vector<std::vector<int>> carry_out;  // per qubit: output[2q] then output[2q+1]
};

std::vector<int> rail_pair(const std::vector<std::vector<int>>& segs, int q) {
    std::vector<int> v = segs[2 * q];
    v.insert(v.end(), segs[2 * q + 1].begin(), segs[2 * q + 1].end());
    return v;
}

BlockModel build_block(const PhysicalLayout& lay, int bi, Statistics stat, double u, double tol,
                       std::size_t capacity, std::size_t& max_dimension) {
    const BlockGeometry& geo = lay.blocks[bi];
    const int n = lay.n;
    const int vg = lay.graph.num_vertices();

    std::vector<int> verts;
    for (const auto& s : geo.input) verts.insert(verts.end(), s.begin(), s.end());
    verts.insert(verts.end(), geo.interior.begin(), geo.interior.end());
    for (const auto& s : geo.output) verts.insert(verts.end(), s.begin(), s.end());
    std::vector<int> local(vg, -1);
    for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);

    const Graph g = lay.graph.induced(verts);
    const bool devices = !geo.devices.empty();
    const int colors = devices ? 2 : 1;
    SpMat h;
    if (devices) {
        std::vector<Device> devs;
        for (int d : geo.devices) {
            Device dev = lay.devices[d];
            for (int& v : dev.vertices) v = local[v];
            devs.push_back(std::move(dev));
        }
        h = build_hamiltonian_1p(g, devs).matrix;
    } else {
        h = kinetic_matrix(g, Color::Red);
    }
    const std::vector<int> label = component_labels(g);
    const int nc = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;

    BlockModel m;
    m.tau = geo.tau;
    m.comps.resize(nc);
    m.comp_of.assign(vg, -1);
    m.in_pos.assign(vg, -1);
    m.out_pos.assign(vg, -1);
    for (int q = 0; q < n; ++q) {
        m.carry_in.push_back(rail_pair(geo.input, q));
        m.carry_out.push_back(rail_pair(geo.output, q));
    }

    // Component-local state index of each local vertex (red = colors * i).
    std::vector<int> members(nc, 0), slot(g.num_vertices());
    for (int lv = 0; lv < g.num_vertices(); ++lv) slot[lv] = members[label[lv]]++;
    std::vector<std::vector<Eigen::Triplet<double>>> sel(nc);
    for (int lv = 0; lv < g.num_vertices(); ++lv) {
        m.comp_of[verts[lv]] = label[lv];
        for (int c = 0; c < colors; ++c) sel[label[lv]].emplace_back(colors * slot[lv] + c, colors * lv + c, 1.0);
    }
    for (const auto& s : geo.input)
        for (int v : s) {
            Component& k = m.comps[label[local[v]]];
            m.in_pos[v] = static_cast<int>(k.in_state.size());
            k.in_state.push_back(colors * slot[local[v]]);
        }
    for (const auto& s : geo.output)
        for (int v : s) {
            Component& k = m.comps[label[local[v]]];
            m.out_pos[v] = static_cast<int>(k.out_state.size());
            k.out_state.push_back(colors * slot[local[v]]);
        }

    // Components holding rails of both qubits interact.
    std::vector<int> qubit_mask(nc, 0);
    for (int r = 0; r < lay.num_rails(); ++r) qubit_mask[label[local[geo.input[r][0]]]] |= 1 << (r / 2);

    for (int c = 0; c < nc; ++c) {
        Component& k = m.comps[c];
        const int dim = colors * members[c];
        Eigen::SparseMatrix<double> p(dim, h.rows());
        p.setFromTriplets(sel[c].begin(), sel[c].end());
        const SpMat pc = p.cast<cplx>();
        k.h = pc * h * SpMat(pc.transpose());
        k.h.makeCompressed();

        MatrixXc e = MatrixXc::Zero(dim, k.in_state.size());
        for (std::size_t j = 0; j < k.in_state.size(); ++j) e(k.in_state[j], j) = 1.0;
        const SpMat& hk = k.h;
        auto apply = [&hk](const MatrixXc& in, MatrixXc& out) { out.noalias() = hk * in; };
        const MatrixXc evolved = chebyshev_evolve(apply, e, gershgorin(hk), m.tau, tol);
        k.transfer.resize(k.out_state.size(), k.in_state.size());
        for (std::size_t i = 0; i < k.out_state.size(); ++i) k.transfer.row(i) = evolved.row(k.out_state[i]);

        if (n == 2 && u != 0 && qubit_mask[c] == 3) {
            const std::size_t size = static_cast<std::size_t>(dim) * dim;
            if (size > capacity)
                throw CapacityError("block " + std::to_string(bi) + " needs a " + std::to_string(dim) + " x " +
                                    std::to_string(dim) + " pair state, above the capacity of " +
                                    std::to_string(capacity));
            max_dimension = std::max(max_dimension, size);
            std::vector<PairInteraction> inter;
            for (int lv = 0; lv < g.num_vertices(); ++lv) {
                if (label[lv] != c) continue;
                std::vector<int> partners;
                if (stat == Statistics::Boson) {
                    partners.push_back(lv);
                } else {
                    for (int lw : g.neighbors(lv)) partners.push_back(lw);
                }
                for (int pw : partners)
                    for (int c0 = 0; c0 < colors; ++c0)
                        for (int c1 = 0; c1 < colors; ++c1)
                            inter.push_back({colors * slot[lv] + c0, colors * slot[pw] + c1, u});
            }
            k.pair = std::make_unique<PairPropagator>(k.h, k.h, std::move(inter));
        }
    }
    return m;
}

// Advances the carried amplitude through one block. `carry` is indexed by the
// vertex lists `at` (walker 0 rows, walker 1 columns); the result is indexed by
// the block's output carry lists, combined over walker labels with `sign`.
MatrixXc step(const BlockModel& m, const MatrixXc& carry, const std::vector<std::vector<int>>& at, int n,
              double sign, double tol) {
    const int nc = static_cast<int>(m.comps.size());
    const auto& out0 = m.carry_out[0];
    if (n == 1) {
        std::vector<VectorXc> cin(nc);
        for (int c = 0; c < nc; ++c) cin[c] = VectorXc::Zero(m.comps[c].in_state.size());
        for (std::size_t i = 0; i < at[0].size(); ++i) cin[m.comp_of[at[0][i]]](m.in_pos[at[0][i]]) = carry(i, 0);
        MatrixXc next = MatrixXc::Zero(out0.size(), 1);
        std::vector<VectorXc> y(nc);
        for (int c = 0; c < nc; ++c)
            if (cin[c].squaredNorm() > 0) y[c] = m.comps[c].transfer * cin[c];
        for (std::size_t i = 0; i < out0.size(); ++i) {
            const int c = m.comp_of[out0[i]];
            if (y[c].size()) next(i, 0) = y[c](m.out_pos[out0[i]]);
        }
        return next;
    }

    const auto& out1 = m.carry_out[1];
    MatrixXc next = MatrixXc::Zero(out0.size(), out1.size());
    std::vector<std::vector<int>> rows(nc), cols(nc);
    for (std::size_t i = 0; i < at[0].size(); ++i) rows[m.comp_of[at[0][i]]].push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < at[1].size(); ++j) cols[m.comp_of[at[1][j]]].push_back(static_cast<int>(j));
    std::vector<std::vector<int>> out_rows(nc), out_cols(nc);
    for (std::size_t i = 0; i < out0.size(); ++i) out_rows[m.comp_of[out0[i]]].push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < out1.size(); ++j) out_cols[m.comp_of[out1[j]]].push_back(static_cast<int>(j));

    for (int c0 = 0; c0 < nc; ++c0)
        for (int c1 = 0; c1 < nc; ++c1) {
            if (rows[c0].empty() || cols[c1].empty()) continue;
            const Component &k0 = m.comps[c0], &k1 = m.comps[c1];
            MatrixXc cin = MatrixXc::Zero(k0.in_state.size(), k1.in_state.size());
            bool any = false;
            for (int i : rows[c0])
                for (int j : cols[c1]) {
                    const cplx v = carry(i, j);
                    if (v != cplx(0)) any = true;
                    cin(m.in_pos[at[0][i]], m.in_pos[at[1][j]]) = v;
                }
            if (!any) continue;

            // Amplitude with walker 0 on out(k0) and walker 1 on out(k1).
            MatrixXc y;
            if (c0 == c1 && k0.pair) {
                MatrixXc psi = MatrixXc::Zero(k0.h.rows(), k0.h.rows());
                for (std::size_t a = 0; a < k0.in_state.size(); ++a)
                    for (std::size_t b = 0; b < k0.in_state.size(); ++b)
                        psi(k0.in_state[a], k0.in_state[b]) = cin(a, b);
                psi = k0.pair->evolve(psi, m.tau, tol);
                y.resize(k0.out_state.size(), k0.out_state.size());
                for (std::size_t a = 0; a < k0.out_state.size(); ++a)
                    for (std::size_t b = 0; b < k0.out_state.size(); ++b)
                        y(a, b) = psi(k0.out_state[a], k0.out_state[b]);
            } else {
                y = k0.transfer * cin * k1.transfer.transpose();
            }
            for (int i : out_rows[c0])
                for (int j : out_cols[c1]) next(i, j) += y(m.out_pos[out0[i]], m.out_pos[out1[j]]);
            // Exchanged labels: walker 0 on a qubit-1 rail, walker 1 on a qubit-0 rail.
            for (int i : out_rows[c1])
                for (int j : out_cols[c0]) next(i, j) += sign * y(m.out_pos[out1[j]], m.out_pos[out0[i]]);
        }
    return next;
}

// Packet of one walker over its carry list (rail 2q first, then 2q+1).
VectorXc carry_packet(std::size_t rail_len, int bit, int L, PacketSign sign) {
    VectorXc p = VectorXc::Zero(2 * rail_len);
    for (int x = L; x < 2 * L; ++x) p(bit * rail_len + x) = packet_amplitude(x, L, sign);
    return p;
}

}  // namespace

CircuitRun simulate_circuit(const CircuitIR& ir_in, const CircuitRunOptions& opt) {
    if (ir_in.n < 1 || ir_in.n > kMaxMicroscopicQubits)
        throw CapacityError("microscopic circuit runs support 1 or 2 qubits, got " + std::to_string(ir_in.n));
    if (opt.threads < 1) throw ValidationError("threads must be at least 1");
    CircuitIR ir = ir_in;
    if (ir.gates.empty())
        for (int q = 0; q < ir.n; ++q) ir.gates.push_back({"id", {q}, {}});

    const int n = ir.n;
    const int dim = 1 << n;
    std::vector<int> inputs = opt.inputs;
    if (inputs.empty())
        for (int c = 0; c < dim; ++c) inputs.push_back(c);
    for (int c : inputs)
        if (c < 0 || c >= dim) throw ValidationError("basis input " + std::to_string(c) + " out of range");

    CircuitRun run;
    run.layout = lower(schedule_blocks(ir), opt.lower);
    const PhysicalLayout& lay = run.layout;
    const MatrixXc ideal = ideal_unitary(ir);
    const int L = opt.lower.L;
    const double sign = opt.lower.statistics == Statistics::Boson ? 1.0 : -1.0;

    std::vector<BlockModel> models;
    for (int b = 0; b < static_cast<int>(lay.blocks.size()); ++b)
        models.push_back(
            build_block(lay, b, opt.lower.statistics, opt.lower.u, opt.tol, opt.capacity, run.max_dimension));

    const std::size_t rail_len = lay.segments[0][0].size();
    auto run_one = [&](int input) {
        BasisRun r;
        r.input = input;
        r.ideal = ideal.col(input);
        MatrixXc carry;
        {
            const VectorXc p0 = carry_packet(rail_len, input & 1, L, PacketSign::Input);
            if (n == 1) {
                carry = p0;
            } else {
                const VectorXc p1 = carry_packet(rail_len, (input >> 1) & 1, L, PacketSign::Input);
                carry = p0 * p1.transpose();
            }
        }
        for (std::size_t b = 0; b < models.size(); ++b) {
            const auto& at = b == 0 ? models[0].carry_in : models[b - 1].carry_out;
            carry = step(models[b], carry, at, n, sign, opt.tol);
            r.block_retained.push_back(carry.squaredNorm());
        }
        r.retained = carry.squaredNorm();
        r.output = carry;
        r.logical = VectorXc::Zero(dim);
        r.rail_populations = Eigen::VectorXd::Zero(dim);
        for (int c = 0; c < dim; ++c) {
            const int bit0 = c & 1, bit1 = (c >> 1) & 1;
            const VectorXc p0 = carry_packet(rail_len, bit0, L, PacketSign::Output);
            if (n == 1) {
                r.logical(c) = p0.dot(carry.col(0));
                r.rail_populations(c) = carry.col(0).segment(bit0 * rail_len, rail_len).squaredNorm();
            } else {
                const VectorXc p1 = carry_packet(rail_len, bit1, L, PacketSign::Output);
                r.logical(c) = p0.dot(carry * p1.conjugate());
                r.rail_populations(c) =
                    carry.block(bit0 * rail_len, bit1 * rail_len, rail_len, rail_len).squaredNorm();
            }
        }
        const double overlap = std::norm(r.ideal.dot(r.logical));
        r.fidelity = overlap;
        const double norm2 = r.logical.squaredNorm();
        r.logical_fidelity = norm2 > 0 ? overlap / norm2 : 0.0;
        return r;
    };

    run.runs.resize(inputs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) {
            try {
                run.runs[i] = run_one(inputs[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int nt = std::min<int>(opt.threads, static_cast<int>(inputs.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    run.min_fidelity = 1;
    for (const BasisRun& r : run.runs) {
        run.mean_fidelity += r.fidelity / run.runs.size();
        run.mean_logical_fidelity += r.logical_fidelity / run.runs.size();
        run.min_fidelity = std::min(run.min_fidelity, r.fidelity);
    }
    return run;
}

}  // namespace qwalk
