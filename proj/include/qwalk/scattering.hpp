#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/graph.hpp"

namespace qwalk {

enum class Color { Red = 0, Blue = 1 };

// 2cos k coincides with an eigenvalue of the internal block D.
struct ResonanceError : NumericalError {
    using NumericalError::NumericalError;
};

// (2cos k - D)^{-1} B, throwing when 2cos k hits an eigenvalue of D.
template <class T>
CMat<T> resolvent_times(const CMat<T>& B, const CMat<T>& D, T k) {
    const auto m = D.rows();
    if (m == 0) return CMat<T>(0, B.cols());
    const T e = 2 * std::cos(k);
    Eigen::SelfAdjointEigenSolver<CMat<T>> es(D, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < m; ++i) {
        const T lambda = es.eigenvalues()[i];
        if (std::abs(e - lambda) < T(1e-10)) {
            std::ostringstream msg;
            msg << "bound-state resonance: 2cos(k) = " << e << " matches internal eigenvalue " << lambda;
            throw ResonanceError(msg.str());
        }
    }
    CMat<T> shifted = -D;
    shifted.diagonal().array() += std::complex<T>(e);
    return shifted.partialPivLu().solve(B);
}

// Q(k) = 1 - e^{ik}(A + B^dagger (2cos k - D)^{-1} B)
template <class T>
CMat<T> q_matrix(const CMat<T>& A, const CMat<T>& B, const CMat<T>& D, T k) {
    const auto n = A.rows();
    CMat<T> inner = A;
    if (D.rows() > 0) inner += B.adjoint() * resolvent_times(B, D, k);
    const std::complex<T> phase = std::polar(T(1), k);
    return CMat<T>::Identity(n, n) - phase * inner;
}

// S(k) = -e^{2ik} Q(k)^{-1} Q(-k)
template <class T>
CMat<T> s_from_blocks(const CMat<T>& A, const CMat<T>& B, const CMat<T>& D, T k) {
    const CMat<T> qk = q_matrix(A, B, D, k);
    const CMat<T> qm = q_matrix(A, B, D, T(-k));
    Eigen::FullPivLU<CMat<T>> lu(qk);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < T(1e-12)) throw NumericalError("Q(k) is singular");
    return -std::polar(T(1), 2 * k) * lu.solve(qm);
}

// S and internal amplitudes from the joint terminal + internal vertex equations.
// Regular at resonances of D, where Q(k) itself has a pole.
template <class T>
std::pair<CMat<T>, CMat<T>> solve_scattering_system(const Partition<T>& p, T k) {
    using C = std::complex<T>;
    const auto n = p.A.rows(), m = p.D.rows();
    const T e = 2 * std::cos(k);
    const C out_phase = std::polar(T(1), k), in_phase = std::polar(T(1), -k);
    const CMat<T> id = CMat<T>::Identity(n, n);
    CMat<T> sys = CMat<T>::Zero(n + m, n + m);
    sys.topLeftCorner(n, n) = p.A + (out_phase - e) * id;
    sys.topRightCorner(n, m) = p.B.adjoint();
    sys.bottomLeftCorner(m, n) = p.B;
    sys.bottomRightCorner(m, m) = p.D - e * CMat<T>::Identity(m, m);
    CMat<T> rhs(n + m, n);
    rhs.topRows(n) = -(p.A + (in_phase - e) * id);
    rhs.bottomRows(m) = -p.B;
    Eigen::FullPivLU<CMat<T>> lu(sys);
    if (!lu.isInvertible()) throw NumericalError("scattering system is singular");
    const CMat<T> sol = lu.solve(rhs);
    return {sol.topRows(n), sol.bottomRows(m)};
}

// Resolvent formula, or the joint system when 2cos k is a resonance of D.
MatrixXc s_matrix(const ScatteringRegion& r, double k, Color color = Color::Red);

// Closed-form roundabout entries; the upper triangle follows from S(k) = S(-k)^dagger.
MatrixXc s_elements_reference(int variant, double k);

// Internal amplitudes psi(k) = (2cos k - D)^{-1} B (I + S(k)), column j for incoming lead j.
MatrixXc internal_amplitudes(const ScatteringRegion& r, double k, Color color = Color::Red);

// Max |(K - E) phi| over internal vertices and terminals of the scattering states
// built from S and psi, leads included analytically.
double scattering_state_residual(const ScatteringRegion& r, double k, Color color = Color::Red);

// -i d(log S_lj)/dk by central difference.
double effective_length(const ScatteringRegion& r, double k, int l, int j, Color color = Color::Red,
                        double h = 1e-5);
Eigen::MatrixXd effective_length_table(const ScatteringRegion& r, double k, Color color = Color::Red,
                                       double h = 1e-5);

struct SweepRow {
    double k;
    MatrixXc s;
    Eigen::MatrixXd transmission;  // |S_ml|^2
};

std::vector<SweepRow> transmission_sweep(const ScatteringRegion& r, const std::vector<double>& ks,
                                         Color color = Color::Red);

// Evenly spaced grid on [kmin, kmax]; rejects endpoints at 0 or +-pi.
std::vector<double> k_grid(double kmin, double kmax, int points);

}  // namespace qwalk
