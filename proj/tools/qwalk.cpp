#include <cmath>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwalk/compiler.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/experiments.hpp"
#include "qwalk/io.hpp"
#include "qwalk/scattering.hpp"
#include "qwalk/simulate.hpp"
#include "qwalk/two_particle.hpp"

namespace {

using namespace qwalk;
constexpr double kPi = std::numbers::pi;

// Config files: JSON objects map keys to options and nested objects to
// subcommands, e.g. {"threads": 2, "cp-phase": {"L": 16}}. Anything else is
// read as TOML.
class JsonOrTomlConfig : public CLI::ConfigTOML {
  public:
    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || text[first] != '{') {
            std::istringstream toml(text);
            return CLI::ConfigTOML::from_config(toml);
        }
        std::vector<CLI::ConfigItem> items;
        flatten(parse_json_text(text, "config"), {}, items);
        return items;
    }

  private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }
    static void flatten(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
        for (const auto& el : j.items()) {
            if (el.value().is_object()) {
                auto p = parents;
                p.push_back(el.key());
                flatten(el.value(), p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = el.key();
            if (el.value().is_array())
                for (const json& v : el.value()) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(el.value()));
            out.push_back(std::move(item));
        }
    }
};

struct Globals {
    std::string out_dir = ".";
    int threads = 1;
    std::uint64_t seed = 20240521;
};

namespace fs = std::filesystem;

std::string out_path(const Globals& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

// Writes <experiment>.json and one CSV per table into the output directory,
// and prints the JSON to stdout. `table_paths` overrides CSV locations.
void emit(const Globals& g, const SimResult& r, const std::map<std::string, std::string>& table_paths = {}) {
    const json j = r.to_json();
    write_file(out_path(g, r.experiment + ".json"), j.dump(2) + "\n");
    for (const auto& [name, t] : r.tables) {
        const auto it = table_paths.find(name);
        write_file(it != table_paths.end() ? it->second : out_path(g, r.experiment + "_" + name + ".csv"), t.to_csv());
    }
    std::cout << j.dump(2) << "\n";
}

Orientation orientation_of(const std::string& s) { return s == "right" ? Orientation::Right : Orientation::Left; }
Color color_of(const std::string& s) { return s == "blue" ? Color::Blue : Color::Red; }
double default_u(Statistics s, const std::optional<double>& u) {
    return u ? *u : (s == Statistics::Fermion ? -2.0 : -4.0);
}

const std::vector<std::string> kStatistics{"fermion", "boson"};

// Shared layout flags for compile and run-circuit.
struct LayoutFlags {
    int Lprime = 0;
    int variant = 2;
    std::string statistics = "fermion";
    std::optional<double> u;
    double h_max = kDefaultFieldMax;
    bool encode_identities = false;

    void add_to(CLI::App* sub) {
        sub->add_option("--Lprime", Lprime, "CP vertical path length (0: 4L)")->check(CLI::NonNegativeNumber);
        sub->add_option("--variant", variant, "roundabout variant")->check(CLI::Range(1, 3));
        sub->add_option("--statistics", statistics)->check(CLI::IsMember(kStatistics));
        sub->add_option("--u", u, "interaction strength (default -2 fermion, -4 boson)");
        sub->add_option("--h-max", h_max, "largest device field")->check(CLI::PositiveNumber);
        sub->add_flag("--encode-identities", encode_identities, "route idle qubits through encoder/decoder");
    }
    LowerOptions options(int L) const {
        LowerOptions o;
        o.L = L;
        o.Lprime = Lprime;
        o.variant = variant;
        o.statistics = statistics_from_string(statistics);
        o.u = default_u(o.statistics, u);
        o.h_max = h_max;
        o.encode_identities = encode_identities;
        return o;
    }
    json to_json(int L) const {
        const LowerOptions o = options(L);
        return {{"L", L},           {"Lprime", o.Lprime},  {"variant", o.variant},
                {"statistics", statistics}, {"u", o.u}, {"h_max", o.h_max},
                {"encode_identities", o.encode_identities}};
    }
};

// ---- sweep-smatrix ----

struct SweepArgs {
    int variant = 2;
    std::string region_file;
    std::string orientation = "left";
    std::string color = "red";
    int from = 0;
    double kmin = -kPi + 0.01, kmax = -0.01;
    int points = 100;
    std::string out;
};

int run_sweep(const Globals& g, const SweepArgs& a) {
    const ScatteringRegion r = a.region_file.empty()
                                   ? roundabout_region(a.variant, orientation_of(a.orientation))
                                   : region_from_json(parse_json_text(read_file(a.region_file), a.region_file));
    const int n = static_cast<int>(r.terminals.size());
    if (a.from < 0 || a.from >= n) throw ValidationError("--from must name a terminal");
    json cfg = {{"orientation", a.orientation}, {"color", a.color}, {"from", a.from},
                {"kmin", a.kmin},               {"kmax", a.kmax},   {"points", a.points}};
    if (a.region_file.empty())
        cfg["variant"] = a.variant;
    else
        cfg["region"] = to_json(r);
    SimResult res("sweep-smatrix", cfg);

    Table t{{"k"}, {}};
    for (int l = 0; l < n; ++l) t.header.push_back("S" + std::to_string(l) + std::to_string(a.from) + "_abs2");
    for (int l = 0; l < n; ++l) t.header.push_back("S" + std::to_string(l) + std::to_string(a.from) + "_phase");
    double worst = 0;
    for (const SweepRow& row : transmission_sweep(r, k_grid(a.kmin, a.kmax, a.points), color_of(a.color))) {
        std::vector<double> line{row.k};
        for (int l = 0; l < n; ++l) line.push_back(row.transmission(l, a.from));
        for (int l = 0; l < n; ++l) line.push_back(std::arg(row.s(l, a.from)));
        t.rows.push_back(line);
        worst = std::max(worst, (row.s.adjoint() * row.s - MatrixXc::Identity(n, n)).norm());
    }
    res.add({"unitarity_error", worst, "max", 1e-10});
    res.tables["smatrix"] = t;
    std::map<std::string, std::string> paths;
    if (!a.out.empty()) paths["smatrix"] = a.out;
    emit(g, res, paths);
    return 0;
}

// ---- cp-amplitude ----

struct AmplitudeArgs {
    std::string statistics = "fermion";
    std::optional<double> u;
    double k0 = -kPi / 2, k1 = kPi / 2;
};

int run_amplitude(const Globals& g, const AmplitudeArgs& a) {
    const Statistics s = statistics_from_string(a.statistics);
    const double u = default_u(s, a.u);
    SimResult res("cp-amplitude", {{"statistics", a.statistics}, {"u", u}, {"k0", a.k0}, {"k1", a.k1}});
    const cplx amp = two_particle_amplitude(s, a.k0, a.k1, u);
    res.add({"amplitude_re", amp.real()});
    res.add({"amplitude_im", amp.imag()});
    res.add({"amplitude_abs", std::abs(amp)});
    res.add({"amplitude_arg", std::arg(amp)});
    res.add({"effective_length", two_particle_effective_length_at(s, a.k0, a.k1, u)});
    emit(g, res);
    return 0;
}

// ---- compile ----

struct CompileArgs {
    std::string circuit;
    int L = 32;
    LayoutFlags layout;
    std::string out;
};

int run_compile(const Globals& g, const CompileArgs& a) {
    const CircuitIR ir = parse_circuit(read_file(a.circuit));
    const LowerOptions o = a.layout.options(a.L);
    const PhysicalLayout lay = lower(schedule_blocks(ir), o);
    json j = layout_to_json(lay);
    const json cfg = {{"circuit", to_json(ir)}, {"layout", a.layout.to_json(a.L)}};
    j["provenance"] = {{"experiment", "compile"}, {"config", cfg}, {"config_hash", config_hash(cfg)},
                       {"version", version()}};
    const std::string path = a.out.empty() ? out_path(g, "layout.json") : a.out;
    write_file(path, j.dump(1) + "\n");

    json blocks = json::array();
    for (const BlockGeometry& b : lay.blocks)
        blocks.push_back({{"type", static_cast<int>(b.type)}, {"hops", b.hops}, {"tau", b.tau}});
    std::cout << json{{"layout", path},
                      {"num_vertices", lay.graph.num_vertices()},
                      {"num_edges", lay.graph.edges().size()},
                      {"num_devices", lay.devices.size()},
                      {"blocks", blocks},
                      {"config_hash", config_hash(cfg)}}
                     .dump(2)
              << "\n";
    return 0;
}

// ---- propagate ----

struct PropagateArgs {
    std::string layout;
    std::string packet = R"({"rail": 0})";
    std::optional<double> t;
    double tol = 1e-9;
    int checkpoints = 1;
    double min_probability = 0;
    std::string out;
};

std::vector<Device> devices_from_json(const json& j) {
    std::vector<Device> out;
    if (!j.contains("devices")) return out;
    for (const json& d : j["devices"]) {
        const std::string axis = d.at("axis").get<std::string>();
        if (axis != "y" && axis != "z") throw ValidationError("device axis must be y or z");
        Device dev;
        dev.vertices = d.at("vertices").get<std::vector<int>>();
        dev.spec = {axis == "y" ? Axis::Y : Axis::Z, d.at("theta").get<double>(), d.at("H_field").get<double>(),
                    static_cast<int>(dev.vertices.size())};
        out.push_back(std::move(dev));
    }
    return out;
}

WavePacketSpec packet_from_json(const json& p, const json& layout) {
    json spec = p;
    if (p.contains("rail")) {
        if (!layout.contains("packets")) throw ValidationError("layout has no default packets");
        spec = nullptr;
        for (const json& q : layout["packets"])
            if (q.at("rail") == p["rail"]) spec = q;
        if (spec.is_null()) throw ValidationError("layout has no packet for rail " + p["rail"].dump());
    }
    WavePacketSpec w;
    w.segment = spec.at("segment").get<std::vector<int>>();
    w.L = spec.at("L").get<int>();
    w.sign = spec.value("sign", "input") == "output" ? PacketSign::Output : PacketSign::Input;
    w.color = color_of(spec.value("color", "red"));
    return w;
}

int run_propagate(const Globals& g, const PropagateArgs& a) {
    json lay;
    WavePacketSpec spec;
    try {
        lay = parse_json_text(read_file(a.layout), a.layout);
        const std::string ptext = fs::exists(a.packet) ? read_file(a.packet) : a.packet;
        spec = packet_from_json(parse_json_text(ptext, "packet"), lay);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed layout or packet: ") + e.what());
    }
    const Graph graph = graph_from_json(lay);
    const int nv = graph.num_vertices();
    double t = 0;
    if (a.t) {
        t = *a.t;
    } else {
        if (!lay.contains("blocks") || lay["blocks"].empty()) throw ValidationError("--t is required for this layout");
        for (const json& b : lay["blocks"]) t += b.at("tau").get<double>();
    }
    if (t < 0) throw ValidationError("--t must be non-negative");

    std::vector<std::array<double, 2>> coords(nv);
    if (lay.contains("coords")) {
        coords = lay["coords"].get<std::vector<std::array<double, 2>>>();
        if (static_cast<int>(coords.size()) != nv) throw ValidationError("coords do not match the vertex count");
    } else {
        for (int v = 0; v < nv; ++v) coords[v] = {double(v), 0.0};
    }
    Eigen::VectorXd cx(nv), cy(nv);
    for (int v = 0; v < nv; ++v) {
        cx(v) = coords[v][0];
        cy(v) = coords[v][1];
    }

    const auto h = build_hamiltonian_1p(graph, devices_from_json(lay));
    const json cfg = {{"layout_hash", config_hash(lay)},
                      {"packet", {{"segment", spec.segment}, {"L", spec.L}}},
                      {"t", t},
                      {"tol", a.tol},
                      {"checkpoints", a.checkpoints}};
    SimResult res("propagate", cfg);
    Table prob{{"t", "site", "probability"}, {}};
    Table summary{{"t", "norm", "energy", "centroid_x", "centroid_y"}, {}};
    VectorXc psi = make_packet(spec, nv);
    double now = 0;
    for (int c = 0; c <= a.checkpoints; ++c) {
        const double target = t * c / a.checkpoints;
        if (target > now) psi = propagate(psi, h.matrix, target - now, a.tol);
        now = target;
        for (int v = 0; v < nv; ++v) {
            const double p = std::norm(psi(2 * v)) + std::norm(psi(2 * v + 1));
            if (p >= a.min_probability) prob.rows.push_back({now, double(v), p});
        }
        summary.rows.push_back({now, psi.norm(), energy(psi, h.matrix), position_expectation(psi, cx),
                                position_expectation(psi, cy)});
    }
    const auto& last = summary.rows.back();
    res.add({"norm", last[1], "abs", 1.0, 1e-8});
    res.add({"energy_drift", std::abs(last[2] - summary.rows.front()[2]), "max", 1e-8});
    res.add({"centroid_x", last[3]});
    res.add({"centroid_y", last[4]});
    res.tables["probability"] = prob;
    res.tables["summary"] = summary;
    std::map<std::string, std::string> paths;
    if (!a.out.empty()) paths["probability"] = a.out;
    emit(g, res, paths);
    return 0;
}

// ---- run-circuit ----

struct RunCircuitArgs {
    std::string circuit;
    std::vector<int> Ls{8, 16, 32};
    LayoutFlags layout;
    double tol = 1e-7;
    std::size_t capacity = kDefaultPairCapacity;
    std::vector<int> inputs;
};

int run_run_circuit(const Globals& g, const RunCircuitArgs& a) {
    CircuitCheck c;
    c.circuit = parse_circuit(read_file(a.circuit));
    c.Ls = a.Ls;
    c.run.lower = a.layout.options(a.Ls.front());
    c.run.tol = a.tol;
    c.run.capacity = a.capacity;
    c.run.threads = g.threads;
    c.run.inputs = a.inputs;
    emit(g, run_circuit(c));
    return 0;
}

// ---- selftest ----

int run_selftest(const Globals& g) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, double value) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << value << ")\n";
        if (!ok) ++failures;
    };

    double closed = 0;
    for (int variant : {1, 2, 3})
        for (double k : k_grid(-3.0, -0.1, 15))
            closed = std::max(closed, (s_matrix(roundabout_region(variant, Orientation::Left), k) -
                                       s_elements_reference(variant, k))
                                          .cwiseAbs()
                                          .maxCoeff());
    report("roundabout closed forms", closed < 1e-10, closed);

    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> kd(-kPi + 0.05, -0.05);
    double unitarity = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const ScatteringRegion r = random_region(rng, 6, 3);
        const double k = kd(rng);
        try {
            const MatrixXc s = s_matrix(r, k);
            unitarity = std::max(unitarity, (s.adjoint() * s - MatrixXc::Identity(3, 3)).norm());
        } catch (const NumericalError&) {
        }
    }
    report("random region unitarity", unitarity < 1e-12, unitarity);

    const cplx i(0, 1);
    const double amp = std::max(std::abs(two_particle_amplitude(Statistics::Fermion, -kPi / 2, kPi / 2, -2) - i),
                                std::abs(two_particle_amplitude(Statistics::Boson, -kPi / 2, kPi / 2, -4) - i));
    report("two-particle amplitudes", amp < 1e-12, amp);

    const Graph line = path_graph(60);
    const auto h = build_hamiltonian_1p(line);
    std::vector<int> seg;
    for (int x = 0; x < 12; ++x) seg.push_back(40 - x);
    const VectorXc psi = propagate(make_packet({seg, 4, PacketSign::Input, Color::Red}, 60), h.matrix, 7.5);
    report("norm conservation", std::abs(psi.norm() - 1) < 1e-9, std::abs(psi.norm() - 1));

    const CircuitIR cnot{2, {{"cnot", {0, 1}, {}}}};
    LowerOptions o;
    o.L = 4;
    const BlockPlan plan = schedule_blocks(cnot);
    const PhysicalLayout lay = lower(plan, o);
    const MatrixXc ideal = ideal_unitary(cnot);
    const double fid = std::abs((ideal.adjoint() * physical_gate_model(plan, o)).trace()) / ideal.rows();
    report("CNOT layout and gate model", lay.blocks.size() == 3 && std::abs(fid - 1) < 1e-12, fid);

    SimResult r("selftest", {{"seed", g.seed}});
    bool rejected = false;
    json bad = r.to_json();
    bad["config"]["seed"] = 0;
    try {
        require_provenance(bad);
    } catch (const ValidationError&) {
        rejected = true;
    }
    report("provenance check", rejected, rejected ? 1 : 0);
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level quantum walk simulator and circuit compiler"};
    app.set_version_flag("--version", version());
    app.config_formatter(std::make_shared<JsonOrTomlConfig>());
    app.set_config("--config", "", "JSON or TOML file with option values")->check(CLI::ExistingFile);
    Globals g;
    app.add_option("--out-dir", g.out_dir, "directory for JSON and CSV outputs");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--seed", g.seed, "seed for randomized checks");
    app.require_subcommand(1);

    SweepArgs sweep;
    auto* s_sweep = app.add_subcommand("sweep-smatrix", "S-matrix column of a roundabout or region over a k grid");
    s_sweep->add_option("--variant", sweep.variant)->check(CLI::Range(1, 3));
    s_sweep->add_option("--region", sweep.region_file, "region JSON instead of a roundabout")->check(CLI::ExistingFile);
    s_sweep->add_option("--orientation", sweep.orientation)->check(CLI::IsMember({"left", "right"}));
    s_sweep->add_option("--color", sweep.color)->check(CLI::IsMember({"red", "blue"}));
    s_sweep->add_option("--from", sweep.from, "incoming terminal")->check(CLI::NonNegativeNumber);
    s_sweep->add_option("--kmin", sweep.kmin)->check(CLI::Range(-kPi, kPi));
    s_sweep->add_option("--kmax", sweep.kmax)->check(CLI::Range(-kPi, kPi));
    s_sweep->add_option("--points", sweep.points)->check(CLI::Range(1, 1000000));
    s_sweep->add_option("--out", sweep.out, "CSV path");

    RoundaboutCheck ra;
    std::string ra_orient = "left", ra_color = "red";
    auto* s_ra = app.add_subcommand("roundabout-check", "microscopic packet through one roundabout");
    s_ra->add_option("--variant", ra.variant)->check(CLI::Range(1, 3));
    s_ra->add_option("--L", ra.L)->check(CLI::Range(8, 4096));
    s_ra->add_option("--orientation", ra_orient)->check(CLI::IsMember({"left", "right"}));
    s_ra->add_option("--color", ra_color)->check(CLI::IsMember({"red", "blue"}));
    s_ra->add_option("--from", ra.from)->check(CLI::Range(0, 2));
    s_ra->add_option("--tol", ra.tol)->check(CLI::PositiveNumber);

    AmplitudeArgs amp;
    auto* s_amp = app.add_subcommand("cp-amplitude", "two-particle scattering amplitude and effective length");
    s_amp->add_option("--statistics", amp.statistics)->check(CLI::IsMember(kStatistics));
    s_amp->add_option("--u", amp.u, "interaction strength (default -2 fermion, -4 boson)");
    s_amp->add_option("--k0", amp.k0)->check(CLI::Range(-kPi, kPi));
    s_amp->add_option("--k1", amp.k1)->check(CLI::Range(-kPi, kPi));

    CpPhaseCheck cp;
    std::string cp_stat = "fermion";
    std::optional<double> cp_u;
    auto* s_cp = app.add_subcommand("cp-phase", "microscopic two-walker collision phase");
    s_cp->add_option("--statistics", cp_stat)->check(CLI::IsMember(kStatistics));
    s_cp->add_option("--u", cp_u, "interaction strength (default -2 fermion, -4 boson)");
    s_cp->add_option("--L", cp.L)->check(CLI::Range(2, 4096));
    s_cp->add_option("--Lprime", cp.Lprime)->check(CLI::Range(8, 65536));
    s_cp->add_option("--tol", cp.tol)->check(CLI::PositiveNumber);

    EncoderCheck enc;
    auto* s_enc = app.add_subcommand("encoder-check", "microscopic encoder or encoder-decoder round trip");
    s_enc->add_option("--variant", enc.variant)->check(CLI::Range(1, 3));
    s_enc->add_option("--L", enc.L)->check(CLI::Range(2, 4096));
    s_enc->add_option("--input", enc.input, "input rail 2j + input")->check(CLI::Range(0, 1));
    s_enc->add_flag("--decode", enc.decode, "append the decoder");
    s_enc->add_option("--tol", enc.tol)->check(CLI::PositiveNumber);

    std::vector<int> disp_L{8, 16, 32, 64};
    double disp_tol = 1e-10;
    auto* s_disp = app.add_subcommand("dispersion", "free packet centroid velocity against L");
    s_disp->add_option("--L", disp_L)->check(CLI::Range(2, 4096));
    s_disp->add_option("--tol", disp_tol)->check(CLI::PositiveNumber);

    CompileArgs comp;
    auto* s_comp = app.add_subcommand("compile", "lower a circuit to a physical layout");
    s_comp->add_option("--circuit", comp.circuit, "circuit JSON")->required()->check(CLI::ExistingFile);
    s_comp->add_option("--L", comp.L)->check(CLI::Range(2, 4096));
    comp.layout.add_to(s_comp);
    s_comp->add_option("--out", comp.out, "layout JSON path");

    PropagateArgs prop;
    auto* s_prop = app.add_subcommand("propagate", "single-walker propagation on a layout");
    s_prop->add_option("--layout", prop.layout, "layout or graph JSON")->required()->check(CLI::ExistingFile);
    s_prop->add_option("--packet", prop.packet, "packet JSON (text or file): {\"rail\": r} or {segment, L, sign, color}");
    s_prop->add_option("--t", prop.t, "total time (default: sum of block taus)");
    s_prop->add_option("--tol", prop.tol)->check(CLI::PositiveNumber);
    s_prop->add_option("--checkpoints", prop.checkpoints)->check(CLI::Range(1, 100000));
    s_prop->add_option("--min-probability", prop.min_probability, "omit sites below this")->check(CLI::NonNegativeNumber);
    s_prop->add_option("--out", prop.out, "CSV path");

    RunCircuitArgs rc;
    auto* s_rc = app.add_subcommand("run-circuit", "microscopic run of a compiled circuit for each basis input");
    s_rc->add_option("--circuit", rc.circuit, "circuit JSON")->required()->check(CLI::ExistingFile);
    s_rc->add_option("--L", rc.Ls, "packet lengths")->check(CLI::Range(2, 4096));
    rc.layout.add_to(s_rc);
    s_rc->add_option("--tol", rc.tol)->check(CLI::PositiveNumber);
    s_rc->add_option("--capacity", rc.capacity, "largest interacting pair matrix");
    s_rc->add_option("--inputs", rc.inputs, "basis inputs to run (default all)");

    auto* s_self = app.add_subcommand("selftest", "fast internal consistency checks");

    try {
        app.parse(argc, argv);
        if (*s_sweep) return run_sweep(g, sweep);
        if (*s_ra) {
            ra.orientation = orientation_of(ra_orient);
            ra.color = color_of(ra_color);
            emit(g, run_roundabout_check(ra));
        }
        if (*s_amp) return run_amplitude(g, amp);
        if (*s_cp) {
            cp.statistics = statistics_from_string(cp_stat);
            cp.u = default_u(cp.statistics, cp_u);
            emit(g, run_cp_phase(cp));
        }
        if (*s_enc) emit(g, run_encoder_check(enc));
        if (*s_disp) emit(g, run_dispersion(disp_L, disp_tol));
        if (*s_comp) return run_compile(g, comp);
        if (*s_prop) return run_propagate(g, prop);
        if (*s_rc) return run_run_circuit(g, rc);
        if (*s_self) return run_selftest(g);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
