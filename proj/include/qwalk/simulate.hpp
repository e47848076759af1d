#pragma once

#include <cstddef>
#include <vector>

#include "qwalk/compiler.hpp"

namespace qwalk {

// Entries of the labelled two-walker amplitude matrix on a component that
// holds rails of both qubits.
inline constexpr std::size_t kDefaultPairCapacity = 4000000;
inline constexpr int kMaxMicroscopicQubits = 2;

struct CircuitRunOptions {
    LowerOptions lower;
    double tol = 1e-7;
    std::size_t capacity = kDefaultPairCapacity;
    int threads = 1;
    std::vector<int> inputs;  // basis inputs to run; empty means all
};

struct BasisRun {
    int input = 0;
    VectorXc ideal;                     // column of the ideal unitary
    VectorXc logical;                   // overlap with the ideal output packets, per basis output
    Eigen::VectorXd rail_populations;   // walker population on each basis output's rails
    std::vector<double> block_retained; // population carried to the next block
    // Red amplitude on the last block's output segments: rows walker 0 over
    // rails 0 then 1, columns walker 1 over rails 2 then 3, by distance x.
    MatrixXc output;
    double retained = 0;                // population on the final output rails
    double fidelity = 0;                // |<ideal|logical>|^2
    double logical_fidelity = 0;        // the same, normalized by |logical|^2
};

struct CircuitRun {
    PhysicalLayout layout;
    std::vector<BasisRun> runs;
    std::size_t max_dimension = 0;  // largest interacting pair matrix, 0 if none
    double mean_fidelity = 0;
    double min_fidelity = 0;
    double mean_logical_fidelity = 0;
};

// Block-by-block microscopic run of a compiled circuit for n <= 2 walkers.
// Each block evolves for its tau; the red amplitude on the output segments
// is carried into the next block, (anti)symmetrized over walker labels.
// Components without both walkers' rails evolve as independent walkers.
CircuitRun simulate_circuit(const CircuitIR& ir, const CircuitRunOptions& options);

}  // namespace qwalk
