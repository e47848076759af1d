#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qwalk/graph.hpp"
#include "qwalk/scattering.hpp"
#include "qwalk/two_particle.hpp"

namespace qwalk {

using SpMat = Eigen::SparseMatrix<cplx>;

enum class Axis { Y, Z };

// Rotation device: on-site (field/2) * sigma_axis over `length` sites, so a
// packet at group velocity 2 picks up exp(-i theta sigma/2) with theta = length*field/2.
struct DeviceSpec {
    Axis axis = Axis::Y;
    double theta = 0;
    double field = 0;
    int length = 0;
};

inline constexpr double kDefaultFieldMax = 0.2;

// length = ceil(2|theta|/h_max), field = 2 theta / length (signed).
DeviceSpec device_spec(Axis axis, double theta, double h_max = kDefaultFieldMax);

struct Device {
    DeviceSpec spec;
    std::vector<int> vertices;  // contiguous run along a real-weight path
};

// Position-color index used throughout: 2 v + c.
inline int pc_index(int v, Color c) { return 2 * v + static_cast<int>(c); }

struct Hamiltonian1P {
    int num_vertices = 0;
    bool has_devices = false;
    SpMat matrix;  // 2V x 2V
};

// Red hops with a_xy, blue with conj(a_xy); devices add (H/2) sigma on color.
Hamiltonian1P build_hamiltonian_1p(const Graph& g, const std::vector<Device>& devices = {});
// Single-color hopping block (V x V).
SpMat kinetic_matrix(const Graph& g, Color color);

struct Hamiltonian2P {
    Statistics statistics = Statistics::Boson;
    int num_vertices = 0;
    std::vector<std::pair<int, int>> basis;  // x <= y (boson) or x < y (fermion)
    SpMat matrix;

    std::size_t dimension() const { return basis.size(); }
    // Index of the unordered pair {x, y}; -1 if absent (fermion, x == y).
    long index(int x, int y) const;
};

inline constexpr std::size_t kDefaultTwoParticleCapacity = 300000;

// Same-color (red) walkers; boson u n(n-1)/2 on site, fermion u n_x n_y on edges.
Hamiltonian2P build_hamiltonian_2p(const Graph& g, Statistics s, double u,
                                   std::size_t capacity = kDefaultTwoParticleCapacity);

// Symmetrized (bosons) or antisymmetrized (fermions) product of two
// single-walker profiles over vertices, normalized.
VectorXc pair_state(const Hamiltonian2P& h, const VectorXc& f0, const VectorXc& f1);

enum class PacketSign { Input, Output };

// Rectangular packet with support x in [L, 2L-1] of a segment listed by
// distance from its block (x = 0 first); phase e^{+i pi x/2} (input) or
// e^{-i pi x/2} (output), amplitude 1/sqrt(L).
struct WavePacketSpec {
    std::vector<int> segment;
    int L = 0;
    PacketSign sign = PacketSign::Input;
    Color color = Color::Red;
};

cplx packet_amplitude(int x, int L, PacketSign sign);
// Profile over vertices (length num_vertices).
VectorXc packet_profile(const WavePacketSpec& spec, int num_vertices);
// State in the 2V position-color space.
VectorXc make_packet(const WavePacketSpec& spec, int num_vertices);

// |f(k)|^2 with f(k) = (2 pi)^{-1/2} sum_x phi(x) e^{ikx}; integrates to 1 over (-pi, pi].
double momentum_density(const VectorXc& profile, double k);

struct SpectralBounds {
    double lo = 0;
    double hi = 0;
};

SpectralBounds gershgorin(const SpMat& h);

inline constexpr double kMaxStepPhase = 200.0;

// exp(-i H t) psi by a Chebyshev expansion with Bessel coefficients. `apply`
// computes out = H in; the spectrum of H must lie inside `bounds`. The time is
// split into steps with half-width * dt <= kMaxStepPhase, each with error
// budget tol / steps.
template <class State, class Apply>
State chebyshev_evolve(const Apply& apply, const State& psi, SpectralBounds bounds, double t, double tol) {
    if (!(tol > 0 && tol <= 1e-6)) throw ValidationError("propagation tolerance must lie in (0, 1e-6]");
    if (t == 0) return psi;
    const double sign = t < 0 ? -1.0 : 1.0;
    const double duration = std::abs(t);
    const double center = 0.5 * (bounds.hi + bounds.lo);
    const double half = 0.5 * (bounds.hi - bounds.lo) * (1 + 1e-3) + 1e-9;
    const int steps = std::max(1, static_cast<int>(std::ceil(half * duration / kMaxStepPhase)));
    const double dt = duration / steps;
    const double x = half * dt;
    const double step_tol = tol / steps;

    // Coefficients shared by all steps: (2 - delta_n0) (-i sign)^n J_n(x).
    std::vector<cplx> coef;
    const cplx rot = cplx(0, -sign);
    cplx power = 1.0;
    int quiet = 0;
    const int max_terms = static_cast<int>(x) + 400;
    for (int n = 0;; ++n) {
        if (n > max_terms) throw NumericalError("Chebyshev series failed to converge");
        const double j = std::cyl_bessel_j(static_cast<double>(n), x);
        coef.push_back((n == 0 ? 1.0 : 2.0) * power * j);
        power *= rot;
        if (n > x && std::abs(j) < step_tol * 1e-2) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    const cplx global = std::polar(1.0, -sign * center * dt);

    State out = psi;
    State t_prev, t_cur, t_next, tmp;
    for (int s = 0; s < steps; ++s) {
        t_prev = out;
        apply(t_prev, tmp);
        t_cur = (tmp - center * t_prev) / half;
        State acc = coef[0] * t_prev + coef[1] * t_cur;
        for (std::size_t n = 2; n < coef.size(); ++n) {
            apply(t_cur, tmp);
            t_next = (2.0 / half) * (tmp - center * t_cur) - t_prev;
            acc += coef[n] * t_next;
            std::swap(t_prev, t_cur);
            std::swap(t_cur, t_next);
        }
        out = global * acc;
    }
    const double n0 = psi.norm(), n1 = out.norm();
    if (std::abs(n1 - n0) > std::max(100 * tol, 1e-10) * std::max(1.0, n0))
        throw NumericalError("propagation lost norm: " + std::to_string(n0) + " -> " + std::to_string(n1));
    return out;
}

VectorXc propagate(const VectorXc& psi, const SpMat& h, double t, double tol = 1e-9);

double energy(const VectorXc& psi, const SpMat& h);

// <x> of a state with `colors` components per vertex (index colors*v + c).
double position_expectation(const VectorXc& psi, const Eigen::VectorXd& coord, int colors = 2);

// Least-squares slope of <x>(t). Throws if more than `touch_tol` of the
// population sits on any of the `boundary` vertices at any sample.
double centroid_velocity(const std::vector<double>& times, const std::vector<VectorXc>& states,
                         const Eigen::VectorXd& coord, const std::vector<int>& boundary, int colors = 2,
                         double touch_tol = 1e-6);

// <ref|state>/|<ref|state>|; requires |<ref|state>| >= threshold.
cplx extract_phase(const VectorXc& state, const VectorXc& reference, double threshold = 0.5);

Graph path_graph(int n);

// Two distinguishable walkers in first quantization: psi(a, b) with a in the
// walker-0 space and b in the walker-1 space. Interaction entries act
// diagonally on (a, b).
struct PairInteraction {
    int a;
    int b;
    double u;
};

class PairPropagator {
public:
    PairPropagator(SpMat h0, SpMat h1, std::vector<PairInteraction> interaction = {});

    void apply(const MatrixXc& in, MatrixXc& out) const;
    SpectralBounds bounds() const { return bounds_; }
    MatrixXc evolve(const MatrixXc& psi, double t, double tol) const;

    Eigen::Index rows() const { return h0_.rows(); }
    Eigen::Index cols() const { return h1_.rows(); }

private:
    SpMat h0_;
    SpMat h1t_;
    SpMat h1_;
    std::vector<PairInteraction> interaction_;
    SpectralBounds bounds_;
};

}  // namespace qwalk
