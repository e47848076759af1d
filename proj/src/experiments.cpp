#include "qwalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

#include "qwalk/errors.hpp"
#include "qwalk/scattering.hpp"
#include "qwalk/two_particle.hpp"

#ifndef QWALK_VERSION
#define QWALK_VERSION "unknown"
#endif

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;

json metric_json(const Metric& m) {
    json j = {{"name", m.name}, {"value", m.value}, {"kind", m.kind}};
    if (m.checked()) {
        j["reference"] = m.reference;
        if (m.kind == "abs") j["tolerance"] = m.tolerance;
        j["passed"] = m.passed();
    }
    return j;
}

VectorXc x_profile(int L, PacketSign sign) {
    VectorXc p(3 * L);
    for (int x = 0; x < 3 * L; ++x) p(x) = packet_amplitude(x, L, sign);
    return p;
}

double population(const VectorXc& psi, const std::vector<int>& vertices, int color = -1) {
    double p = 0;
    for (int v : vertices)
        for (int c = 0; c < 2; ++c)
            if (color < 0 || color == c) p += std::norm(psi(2 * v + c));
    return p;
}

std::vector<int> chain_after(Graph& g, int from, int count) {
    std::vector<int> vs;
    int prev = from;
    for (int i = 0; i < count; ++i) {
        const int v = g.add_vertices(1);
        if (prev >= 0) g.add_edge(prev, v, Weight::One);
        vs.push_back(v);
        prev = v;
    }
    return vs;
}

// Inlines region r into g; returns region-to-graph ids.
std::vector<int> inline_region(Graph& g, const ScatteringRegion& r) {
    const int first = g.add_vertices(r.graph.num_vertices());
    std::vector<int> map(r.graph.num_vertices());
    for (int v = 0; v < r.graph.num_vertices(); ++v) map[v] = first + v;
    for (const Edge& e : r.graph.edges()) g.add_edge(map[e.x], map[e.y], e.w);
    return map;
}

}  // namespace

std::string version() { return QWALK_VERSION; }

bool Metric::passed() const {
    if (kind == "abs") return std::abs(value - reference) <= tolerance;
    if (kind == "min") return value >= reference;
    if (kind == "max") return value <= reference;
    return true;
}

std::string Table::to_csv() const {
    std::ostringstream out;
    out.precision(12);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

SimResult::SimResult(std::string name, json cfg)
    : experiment(std::move(name)), config(std::move(cfg)), config_hash(qwalk::config_hash(config)),
      version(qwalk::version()) {}

Metric& SimResult::add(Metric m) {
    metrics.push_back(std::move(m));
    return metrics.back();
}

const Metric& SimResult::metric(const std::string& name) const {
    for (const Metric& m : metrics)
        if (m.name == name) return m;
    throw ValidationError("no metric named '" + name + "'");
}

bool SimResult::passed() const {
    for (const Metric& m : metrics)
        if (!m.passed()) return false;
    return true;
}

json SimResult::to_json() const {
    json ms = json::array();
    for (const Metric& m : metrics) ms.push_back(metric_json(m));
    json tabs = json::object();
    for (const auto& [name, t] : tables) tabs[name] = {{"header", t.header}, {"rows", t.rows}};
    return {{"experiment", experiment}, {"config", config}, {"config_hash", config_hash}, {"version", version},
            {"metrics", ms},          {"tables", tabs}};
}

void require_provenance(const json& r) {
    if (!r.is_object() || !r.contains("experiment") || !r["experiment"].is_string())
        throw ValidationError("result lacks an experiment name");
    if (!r.contains("config") || !r.contains("config_hash") || !r["config_hash"].is_string())
        throw ValidationError("result lacks a config hash");
    if (r["config_hash"].get<std::string>() != config_hash(r["config"]))
        throw ValidationError("result config hash does not match its config");
    if (!r.contains("version") || !r["version"].is_string() || r["version"].get<std::string>().empty())
        throw ValidationError("result lacks a code version");
}

LeadedRegion attach_leads(const ScatteringRegion& r, int length) {
    if (length < 1) throw ValidationError("lead length must be positive");
    r.validate();
    LeadedRegion out{r.graph, {}};
    for (int t : r.terminals) {
        std::vector<int> lead{t};
        const auto rest = chain_after(out.graph, t, length - 1);
        lead.insert(lead.end(), rest.begin(), rest.end());
        out.leads.push_back(std::move(lead));
    }
    return out;
}

double packet_averaged_transmission(const ScatteringRegion& r, int l, int j, Color color, int L) {
    const VectorXc prof = x_profile(L, PacketSign::Input);
    const int grid = 4096;
    double acc = 0;
    for (int i = 0; i < grid; ++i) {
        const double k = -kPi + (i + 0.5) * 2 * kPi / grid;
        // Outgoing components (k > 0) never reach the region.
        const double p = k < 0 ? std::norm(s_matrix(r, k, color)(l, j)) : (l == j ? 1.0 : 0.0);
        acc += momentum_density(prof, k) * p;
    }
    return acc * 2 * kPi / grid;
}

SimResult run_roundabout_check(const RoundaboutCheck& c) {
    if (c.L < 8) throw ValidationError("roundabout check needs L >= 8");
    if (c.from < 0 || c.from > 2) throw ValidationError("input path must be 0, 1 or 2");
    const json cfg = {{"variant", c.variant},
                      {"L", c.L},
                      {"orientation", c.orientation == Orientation::Left ? "left" : "right"},
                      {"color", c.color == Color::Red ? "red" : "blue"},
                      {"from", c.from},
                      {"tol", c.tol}};
    SimResult res("roundabout-check", cfg);

    const ScatteringRegion region = roundabout_region(c.variant, c.orientation);
    const MatrixXc s = s_matrix(region, -kPi / 2, c.color);
    int target = 0;
    s.col(c.from).cwiseAbs().maxCoeff(&target);
    const double ell = effective_length(region, -kPi / 2, target, c.from, c.color);

    const int lead_len = 10 * c.L + 64;
    const LeadedRegion lr = attach_leads(region, lead_len);
    const int nv = lr.graph.num_vertices();
    const auto h = build_hamiltonian_1p(lr.graph);
    const VectorXc psi0 = make_packet({lr.leads[c.from], c.L, PacketSign::Input, c.color}, nv);
    const double t = (3 * c.L - 1 + ell) / 2 + 2 * c.L;
    const VectorXc psi = propagate(psi0, h.matrix, t, c.tol);

    Table row{{"path", "s_abs2", "packet_average", "population"}, {}};
    for (int l = 0; l < 3; ++l) {
        const std::vector<int> outer(lr.leads[l].begin() + 1, lr.leads[l].end());
        const double pop = population(psi, outer);
        const double avg = packet_averaged_transmission(region, l, c.from, c.color, c.L);
        row.rows.push_back({double(l), std::norm(s(l, c.from)), avg, pop});
        res.add({"population_path_" + std::to_string(l), pop});
    }
    const std::vector<int> far(lr.leads[target].begin() + 1, lr.leads[target].end());
    res.add({"target_path", double(target)});
    res.add({"transmission", population(psi, far), "min", 0.98});
    res.add({"analytic_transmission", std::norm(s(target, c.from)), "abs", 1.0, 1e-10});
    res.add({"packet_average", row.rows[target][2]});
    res.add({"effective_length", ell});
    res.add({"time", t});
    double ends = 0;
    for (const auto& lead : lr.leads) ends += population(psi, {lead.back()});
    res.add({"lead_end_population", ends, "max", 1e-8});
    res.tables["analytic_row"] = row;
    return res;
}

cplx cp_phase_oracle(Statistics s, double u, int L, double dt) {
    const VectorXc prof = x_profile(L, PacketSign::Input);
    const int grid = 1024;
    const double dk = 2 * kPi / grid;
    std::vector<double> ks(grid), wa(grid), wb(grid);
    for (int i = 0; i < grid; ++i) {
        ks[i] = -kPi + (i + 0.5) * dk;
        wa[i] = momentum_density(prof, ks[i]);
        wb[i] = momentum_density(prof, -ks[i]);
    }
    cplx acc = 0;
    for (int i = 0; i < grid; ++i) {
        if (wa[i] < 1e-14) continue;
        for (int j = 0; j < grid; ++j) {
            if (wb[j] < 1e-14) continue;
            const double e = 2 * std::cos(ks[i]) + 2 * std::cos(ks[j]);
            // Only walkers heading towards each other scatter.
            const cplx amp = ks[i] < 0 && ks[j] > 0 ? two_particle_amplitude(s, ks[i], ks[j], u) : cplx(1);
            acc += wa[i] * wb[j] * amp * std::polar(1.0, e * dt);
        }
    }
    return acc * dk * dk;
}

SimResult run_cp_phase(const CpPhaseCheck& c) {
    if (c.L < 2) throw ValidationError("L must be at least 2");
    if (c.Lprime < 4 * c.L) throw ValidationError("L' must be at least 4L");
    const json cfg = {{"statistics", to_string(c.statistics)}, {"u", c.u}, {"L", c.L}, {"Lprime", c.Lprime},
                      {"tol", c.tol}};
    SimResult res("cp-phase", cfg);

    const int n = 6 * c.L + c.Lprime - 1;
    const Graph g = path_graph(n);
    const int a0 = 3 * c.L - 1, b0 = 3 * c.L - 1 + c.Lprime;
    VectorXc fa = VectorXc::Zero(n), fb = VectorXc::Zero(n);
    for (int x = 0; x < 3 * c.L; ++x) {
        fa(a0 - x) = packet_amplitude(x, c.L, PacketSign::Input);
        fb(b0 + x) = packet_amplitude(x, c.L, PacketSign::Input);
    }
    const Hamiltonian2P h = build_hamiltonian_2p(g, c.statistics, c.u);
    const Hamiltonian2P h0 = build_hamiltonian_2p(g, c.statistics, 0.0);
    const VectorXc start = pair_state(h, fa, fb);
    const double tau = (3 * c.L - 1 + c.Lprime) / 2.0;
    // Each walker comes out ahead by -ell sites; the free reference runs that
    // much longer at group velocity 2.
    const double ell = c.u == 0 ? 0.0 : two_particle_effective_length(c.statistics, c.u);
    const double dt = -ell / 2;
    const VectorXc psi = propagate(start, h.matrix, tau, c.tol);
    const VectorXc ref = propagate(start, h0.matrix, tau + dt, c.tol);
    const cplx overlap = ref.dot(psi);
    const double phase = std::arg(extract_phase(psi, ref, 0.5));
    const cplx oracle = cp_phase_oracle(c.statistics, c.u, c.L, dt);
    const double ideal = std::arg(two_particle_amplitude(c.statistics, -kPi / 2, kPi / 2, c.u));

    res.add({"phase", phase, "abs", ideal, c.u == 0 ? 0.02 : 0.05});
    res.add({"oracle_phase", std::arg(oracle)});
    res.add({"phase_minus_oracle", std::remainder(phase - std::arg(oracle), 2 * kPi), "abs", 0.0, 0.05});
    res.add({"overlap", std::abs(overlap)});
    res.add({"oracle_magnitude", std::abs(oracle)});
    res.add({"two_particle_effective_length", ell});
    res.add({"reference_delay", dt});
    res.add({"tau", tau});
    res.add({"dimension", double(h.dimension())});
    return res;
}

SimResult run_encoder_check(const EncoderCheck& c) {
    if (c.L < 2) throw ValidationError("L must be at least 2");
    if (c.input != 0 && c.input != 1) throw ValidationError("encoder input must be 0 or 1");
    const json cfg = {{"variant", c.variant}, {"L", c.L}, {"input", c.input}, {"decode", c.decode}, {"tol", c.tol}};
    SimResult res(c.decode ? "encoder-roundtrip" : "encoder", cfg);

    const int lr_len = roundabout_traversal_length(c.variant);
    const DeviceSpec x_dev = device_spec(Axis::Y, kPi), x_undo = device_spec(Axis::Y, -kPi);
    const int px = x_dev.length + 4, pmid = 4;
    const int lead_len = 10 * c.L + 64;

    Graph g;
    std::vector<Device> devices;
    std::vector<std::vector<int>> in(2);
    for (int q = 0; q < 2; ++q) {
        in[q] = chain_after(g, -1, lead_len);
        std::reverse(in[q].begin(), in[q].end());  // x = 0 last created, nearest the encoder
    }
    const auto enc = inline_region(g, roundabout_region(c.variant, Orientation::Right));
    const auto pre0 = chain_after(g, in[0][0], px);
    g.add_edge(pre0.back(), enc[0], Weight::One);
    const auto pre1 = chain_after(g, in[1][0], px);
    g.add_edge(pre1.back(), enc[1], Weight::One);
    devices.push_back({x_dev, {pre1.begin() + 2, pre1.begin() + 2 + x_dev.length}});

    std::vector<std::vector<int>> out;
    int hops = (px + 1) + lr_len;
    if (!c.decode) {
        out.push_back(chain_after(g, enc[2], lead_len));
        hops += 1;
    } else {
        const auto dec = inline_region(g, roundabout_region(c.variant, Orientation::Left));
        const auto mid = chain_after(g, enc[2], pmid);
        g.add_edge(mid.back(), dec[2], Weight::One);
        const auto post0 = chain_after(g, dec[0], px);
        const auto post1 = chain_after(g, dec[1], px);
        devices.push_back({x_undo, {post1.begin() + 2, post1.begin() + 2 + x_undo.length}});
        out.push_back(chain_after(g, post0.back(), lead_len));
        out.push_back(chain_after(g, post1.back(), lead_len));
        hops += (pmid + 1) + lr_len + (px + 1);
    }

    const int nv = g.num_vertices();
    const auto h = build_hamiltonian_1p(g, devices);
    const VectorXc psi0 = make_packet({in[c.input], c.L, PacketSign::Input, Color::Red}, nv);
    const double t = (3 * c.L - 1 + hops) / 2.0 + 2 * c.L;
    const VectorXc psi = propagate(psi0, h.matrix, t, c.tol);

    if (!c.decode) {
        const double red = population(psi, out[0], 0), blue = population(psi, out[0], 1);
        res.add({"red_on_joint_path", red});
        res.add({"blue_on_joint_path", blue});
        res.add({"target_population", c.input == 0 ? red : blue, "min", 0.97});
        res.add({"wrong_color_population", c.input == 0 ? blue : red});
    } else {
        const double p0 = population(psi, out[0], 0), p1 = population(psi, out[1], 0);
        const double blue = population(psi, out[0], 1) + population(psi, out[1], 1);
        res.add({"red_on_rail_0", p0});
        res.add({"red_on_rail_1", p1});
        res.add({"blue_on_output_rails", blue});
        res.add({"target_population", c.input == 0 ? p0 : p1, "min", 0.95});
    }
    res.add({"hops", double(hops)});
    res.add({"time", t});
    return res;
}

SimResult run_dispersion(const std::vector<int>& Ls, double tol) {
    if (Ls.size() < 2) throw ValidationError("dispersion needs at least two packet lengths");
    SimResult res("dispersion", {{"L", Ls}, {"tol", tol}});
    Table tab{{"L", "velocity", "deviation", "momentum_average"}, {}};
    std::vector<double> lx, ly;
    for (int L : Ls) {
        if (L < 2) throw ValidationError("L must be at least 2");
        const double window = 2.0 * L;
        const int margin = static_cast<int>(2 * window) + 30;
        const int n = 2 * margin + 3 * L;
        const Graph g = path_graph(n);
        const auto h = build_hamiltonian_1p(g);
        const Eigen::VectorXd coord = Eigen::VectorXd::LinSpaced(n, 0, n - 1);
        std::vector<int> seg;
        for (int x = 0; x < 3 * L; ++x) seg.push_back(margin + 3 * L - 1 - x);
        const VectorXc psi = make_packet({seg, L, PacketSign::Input, Color::Red}, n);
        std::vector<double> ts;
        std::vector<VectorXc> states;
        for (int i = 0; i <= 8; ++i) {
            ts.push_back(window * i / 8);
            states.push_back(propagate(psi, h.matrix, ts.back(), tol));
        }
        const double v = centroid_velocity(ts, states, coord, {0, n - 1});
        double avg = 0;
        const VectorXc prof = x_profile(L, PacketSign::Input);
        const int grid = 8192;
        for (int i = 0; i < grid; ++i) {
            const double k = -kPi + (i + 0.5) * 2 * kPi / grid;
            avg += momentum_density(prof, k) * (-2 * std::sin(k)) * 2 * kPi / grid;
        }
        tab.rows.push_back({double(L), v, std::abs(2 - v), avg});
        lx.push_back(std::log(double(L)));
        ly.push_back(std::log(std::abs(2 - v)));
        if (L == 32) res.add({"velocity_L32", v, "abs", 2.0, 0.01});
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    res.add({"loglog_slope", sxy / sxx, "max", -1.5});
    res.tables["velocity"] = tab;
    return res;
}

namespace {

// Ideal physical model of one type-1 slot: encoder, rotation devices as color
// rotations on the joint path, decoder; the red rail-to-rail block.
Mat2 slot_model(const Mat2& u, double h_max) {
    MatrixXc chain = MatrixXc::Identity(6, 6);
    for (const DeviceSpec& d : rotation_chain(single_qubit_decompose(u), h_max)) {
        const Mat2 r = d.axis == Axis::Y ? ry(d.theta) : rz(d.theta);
        MatrixXc step = MatrixXc::Identity(6, 6);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) step(3 * a + 2, 3 * b + 2) = r(a, b);
        chain = step * chain;
    }
    const MatrixXc full = decoder_unitary() * chain * encoder_unitary();
    Mat2 m;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m(a, b) = full(a, b);
    return m;
}

}  // namespace

MatrixXc physical_gate_model(const BlockPlan& plan, const LowerOptions& o) {
    const cplx s = two_particle_amplitude(o.statistics, -kPi / 2, kPi / 2, o.u);
    std::vector<IdealGate> gates;
    for (const Block& b : plan.blocks) {
        if (b.type == BlockType::Single) {
            for (int q = 0; q < plan.n; ++q)
                if (b.op_of_qubit[q] >= 0) gates.push_back({"slot", {q}, slot_model(plan.ops[b.op_of_qubit[q]].matrix, o.h_max)});
        } else {
            for (int op : b.pair_ops) {
                Mat4 cp = Mat4::Identity();
                cp(3, 3) = s * s;  // two sequential scatterings
                gates.push_back({"cp", plan.ops[op].targets, cp});
            }
        }
    }
    const int dim = 1 << plan.n;
    MatrixXc u(dim, dim);
    for (int c = 0; c < dim; ++c) u.col(c) = gate_model_apply(plan.n, gates, basis_state(plan.n, c));
    return u;
}

json to_json(const CircuitRun& run) {
    json runs = json::array();
    for (const BasisRun& r : run.runs) {
        std::vector<double> pops(r.rail_populations.data(), r.rail_populations.data() + r.rail_populations.size());
        runs.push_back({{"input", r.input},
                        {"fidelity", r.fidelity},
                        {"logical_fidelity", r.logical_fidelity},
                        {"retained", r.retained},
                        {"rail_populations", pops},
                        {"block_retained", r.block_retained}});
    }
    return {{"runs", runs},
            {"mean_fidelity", run.mean_fidelity},
            {"min_fidelity", run.min_fidelity},
            {"mean_logical_fidelity", run.mean_logical_fidelity},
            {"max_pair_dimension", run.max_dimension}};
}

SimResult run_circuit(const CircuitCheck& c) {
    if (c.Ls.empty()) throw ValidationError("run_circuit needs at least one L");
    const LowerOptions& lo = c.run.lower;
    const json cfg = {{"circuit", to_json(c.circuit)},
                      {"L", c.Ls},
                      {"Lprime", lo.Lprime},
                      {"variant", lo.variant},
                      {"statistics", to_string(lo.statistics)},
                      {"u", lo.u},
                      {"tol", c.run.tol},
                      {"capacity", c.run.capacity}};
    SimResult res("run-circuit", cfg);

    const int dim = 1 << c.circuit.n;
    const MatrixXc ideal = ideal_unitary(c.circuit);
    const MatrixXc model = physical_gate_model(schedule_blocks(c.circuit), lo);
    res.add({"ideal_model_fidelity", std::abs((ideal.adjoint() * model).trace()) / dim, "abs", 1.0, 1e-12});

    Table runs{{"L", "input", "fidelity", "logical_fidelity", "retained"}, {}};
    for (int k = 0; k < dim; ++k) runs.header.push_back("population_" + std::to_string(k));
    Table trend{{"L", "mean_infidelity", "mean_logical_infidelity", "min_fidelity"}, {}};
    bool dominant = true;
    std::vector<double> infid;
    for (int L : c.Ls) {
        CircuitRunOptions o = c.run;
        o.lower.L = L;
        const CircuitRun run = simulate_circuit(c.circuit, o);
        for (const BasisRun& r : run.runs) {
            std::vector<double> row{double(L), double(r.input), r.fidelity, r.logical_fidelity, r.retained};
            for (int k = 0; k < dim; ++k) row.push_back(r.rail_populations(k));
            runs.rows.push_back(row);
            Eigen::Index best = 0, expect = 0;
            r.rail_populations.maxCoeff(&best);
            r.ideal.cwiseAbs2().maxCoeff(&expect);
            // Only meaningful when the ideal output is a single basis state.
            if (r.ideal.cwiseAbs2().maxCoeff() > 1 - 1e-9 && best != expect) dominant = false;
        }
        trend.rows.push_back({double(L), 1 - run.mean_fidelity, 1 - run.mean_logical_fidelity, run.min_fidelity});
        infid.push_back(1 - run.mean_fidelity);
        res.add({"mean_fidelity_L" + std::to_string(L), run.mean_fidelity});
        res.add({"mean_logical_fidelity_L" + std::to_string(L), run.mean_logical_fidelity});
        res.add({"max_pair_dimension_L" + std::to_string(L), double(run.max_dimension)});
    }
    bool monotone = true;
    for (std::size_t i = 1; i < infid.size(); ++i) monotone = monotone && infid[i] < infid[i - 1];
    res.add({"dominant_population_correct", dominant ? 1.0 : 0.0, "min", 1.0});
    res.add({"infidelity_decreasing", monotone ? 1.0 : 0.0, "min", 1.0});
    res.tables["runs"] = runs;
    res.tables["trend"] = trend;
    return res;
}

}  // namespace qwalk
