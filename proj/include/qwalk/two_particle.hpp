#pragma once

#include <complex>

#include "qwalk/graph.hpp"

namespace qwalk {

enum class Statistics { Boson, Fermion };

Statistics statistics_from_string(const std::string& s);
std::string to_string(Statistics s);

// On-site interaction.
cplx boson_amplitude(double k0, double k1, double u);
// Nearest-neighbor interaction.
cplx fermion_amplitude(double k0, double k1, double u);
cplx two_particle_amplitude(Statistics s, double k0, double k1, double u);

// -i d/dk0 log S01 (or +i d/dk1 when `via_k1`) at (k0, k1).
double two_particle_effective_length_at(Statistics s, double k0, double k1, double u, bool via_k1 = false,
                                        double h = 1e-5);
// The same at (-pi/2, pi/2).
double two_particle_effective_length(Statistics s, double u, bool via_k1 = false, double h = 1e-5);

// Bethe-form wave function on sites 0..n-1; entry (x0, x1).
MatrixXc bethe_wavefunction(int n, double k0, double k1, double u, Statistics s);

// Max |(H - E) psi| over interior configurations of an n-site path.
double verify_two_particle_eigenstate(int n, double k0, double k1, double u, Statistics s);

}  // namespace qwalk
