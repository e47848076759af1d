#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "qwalk/compiler.hpp"
#include "qwalk/io.hpp"
#include "qwalk/simulate.hpp"

namespace qwalk {

std::string version();

// A scalar result and the check it was held to. kind "abs": |value - reference|
// <= tolerance; "min": value >= reference; "max": value <= reference;
// "info": reported only.
struct Metric {
    std::string name;
    double value = 0;
    std::string kind = "info";
    double reference = std::numeric_limits<double>::quiet_NaN();
    double tolerance = std::numeric_limits<double>::quiet_NaN();

    bool checked() const { return kind != "info"; }
    bool passed() const;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
};

struct SimResult {
    std::string experiment;
    json config;
    std::string config_hash;
    std::string version;
    std::vector<Metric> metrics;
    std::map<std::string, Table> tables;

    SimResult(std::string name, json cfg);

    Metric& add(Metric m);
    const Metric& metric(const std::string& name) const;
    bool passed() const;  // all checked metrics pass
    json to_json() const;
};

// Throws ValidationError unless the JSON carries an experiment name, a config
// hash matching its config, and a version.
void require_provenance(const json& result);

// Dead-end paths of `length` sites hanging off the terminals of a region;
// lead vertex x = 0 is the terminal itself.
struct LeadedRegion {
    Graph graph;
    std::vector<std::vector<int>> leads;  // per terminal, by distance from it
};
LeadedRegion attach_leads(const ScatteringRegion& r, int length);

// Packet-averaged |S_lj|^2 for the rectangular packet of length L; outgoing
// momentum components stay on lead j.
double packet_averaged_transmission(const ScatteringRegion& r, int l, int j, Color color, int L);

struct RoundaboutCheck {
    int variant = 2;
    int L = 32;
    Orientation orientation = Orientation::Left;
    Color color = Color::Red;
    int from = 0;
    double tol = 1e-9;
};
// Microscopic transmission through one roundabout: populations on each lead
// once the packet has left the region, with the analytic row at -pi/2.
SimResult run_roundabout_check(const RoundaboutCheck& c);

struct CpPhaseCheck {
    Statistics statistics = Statistics::Fermion;
    double u = -2;
    int L = 32;
    int Lprime = 128;
    double tol = 1e-9;
};
// Two walkers meet head-on on a straight path of 6L + L' - 1 sites; the
// global phase relative to the u = 0 run against the packet-averaged amplitude.
SimResult run_cp_phase(const CpPhaseCheck& c);
// Packet-averaged sum of S(k0, k1) e^{i E dt} over the two input packets;
// momentum pairs moving apart contribute S = 1.
cplx cp_phase_oracle(Statistics s, double u, int L, double dt);

struct EncoderCheck {
    int variant = 2;
    int L = 32;
    int input = 0;         // red walker on rail 2j + input
    bool decode = false;   // follow with the decoder (round trip)
    double tol = 1e-9;
};
// Encoder: populations by color on the joint path j'. Round trip:
// populations on the two output rails.
SimResult run_encoder_check(const EncoderCheck& c);

// Free-packet centroid velocity on a long path for each L, the deviation from
// 2 and its log-log slope.
SimResult run_dispersion(const std::vector<int>& Ls, double tol = 1e-10);

struct CircuitCheck {
    CircuitIR circuit;
    std::vector<int> Ls{8, 16, 32};
    CircuitRunOptions run;  // run.lower.L is overridden per L
};
// Microscopic run per L and basis input: populations, raw and logical
// fidelity, and the infidelity trend.
SimResult run_circuit(const CircuitCheck& c);

// Gate-level model assembled from the physical ideal elements: encoder,
// color rotations and decoder per type-1 slot, two scattering amplitudes at
// (-pi/2, pi/2) per CP.
MatrixXc physical_gate_model(const BlockPlan& plan, const LowerOptions& options);

json to_json(const CircuitRun& run);

}  // namespace qwalk
