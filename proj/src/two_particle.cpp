#include "qwalk/two_particle.hpp"

#include <numbers>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr cplx I{0.0, 1.0};

cplx ratio(cplx num, cplx den) {
    if (std::abs(den) < 1e-12) {
        if (std::abs(num) < 1e-12) return -1.0;  // hard-core limit
        throw NumericalError("two-particle amplitude has a pole");
    }
    return num / den;
}

}  // namespace

Statistics statistics_from_string(const std::string& s) {
    if (s == "boson") return Statistics::Boson;
    if (s == "fermion") return Statistics::Fermion;
    throw ValidationError("statistics must be boson or fermion, got '" + s + "'");
}

std::string to_string(Statistics s) { return s == Statistics::Boson ? "boson" : "fermion"; }

cplx boson_amplitude(double k0, double k1, double u) {
    const double d = 2 * (std::sin(k0) - std::sin(k1));
    return ratio(cplx(d, u), cplx(d, -u));
}

cplx fermion_amplitude(double k0, double k1, double u) {
    const cplx base = 1.0 + std::exp(I * (k0 + k1));
    return ratio(base - std::exp(I * k1) * u, base - std::exp(I * k0) * u);
}

cplx two_particle_amplitude(Statistics s, double k0, double k1, double u) {
    return s == Statistics::Boson ? boson_amplitude(k0, k1, u) : fermion_amplitude(k0, k1, u);
}

double two_particle_effective_length_at(Statistics s, double k0, double k1, double u, bool via_k1, double h) {
    cplx d;
    if (!via_k1) {
        d = -I * std::log(two_particle_amplitude(s, k0 + h, k1, u) / two_particle_amplitude(s, k0 - h, k1, u)) /
            (2 * h);
    } else {
        d = I * std::log(two_particle_amplitude(s, k0, k1 + h, u) / two_particle_amplitude(s, k0, k1 - h, u)) /
            (2 * h);
    }
    return d.real();
}

double two_particle_effective_length(Statistics s, double u, bool via_k1, double h) {
    using std::numbers::pi;
    return two_particle_effective_length_at(s, -pi / 2, pi / 2, u, via_k1, h);
}

MatrixXc bethe_wavefunction(int n, double k0, double k1, double u, Statistics s) {
    const cplx amp = two_particle_amplitude(s, k0, k1, u);
    const double sign = s == Statistics::Boson ? 1.0 : -1.0;
    MatrixXc psi(n, n);
    for (int x0 = 0; x0 < n; ++x0) {
        for (int x1 = 0; x1 < n; ++x1) {
            const cplx direct = std::exp(I * (k0 * x0 + k1 * x1));
            const cplx swapped = std::exp(I * (k1 * x0 + k0 * x1));
            if (x0 < x1) {
                psi(x0, x1) = direct + sign * amp * swapped;
            } else if (x0 > x1) {
                psi(x0, x1) = amp * direct + sign * swapped;
            } else {
                psi(x0, x1) = s == Statistics::Boson ? (1.0 + amp) * direct : cplx(0.0);
            }
        }
    }
    return psi;
}

double verify_two_particle_eigenstate(int n, double k0, double k1, double u, Statistics s) {
    if (n < 20) throw ValidationError("path must have at least 20 sites");
    const MatrixXc psi = bethe_wavefunction(n, k0, k1, u, s);
    const double e = 2 * std::cos(k0) + 2 * std::cos(k1);
    double worst = 0;
    for (int x0 = 1; x0 < n - 1; ++x0) {
        for (int x1 = 1; x1 < n - 1; ++x1) {
            if (s == Statistics::Fermion && x0 == x1) continue;
            cplx h = psi(x0 - 1, x1) + psi(x0 + 1, x1) + psi(x0, x1 - 1) + psi(x0, x1 + 1);
            if (s == Statistics::Boson && x0 == x1) h += u * psi(x0, x1);
            if (s == Statistics::Fermion && std::abs(x0 - x1) == 1) h += u * psi(x0, x1);
            worst = std::max(worst, std::abs(h - e * psi(x0, x1)));
        }
    }
    return worst;
}

}  // namespace qwalk
