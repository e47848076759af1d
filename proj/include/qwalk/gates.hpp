#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/dynamics.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

template <class T = double>
Eigen::Matrix<std::complex<T>, 2, 2> ry(T theta) {
    const T c = std::cos(theta / 2), s = std::sin(theta / 2);
    Eigen::Matrix<std::complex<T>, 2, 2> m;
    m << c, -s, s, c;
    return m;
}

template <class T = double>
Eigen::Matrix<std::complex<T>, 2, 2> rz(T theta) {
    Eigen::Matrix<std::complex<T>, 2, 2> m;
    m << std::polar(T(1), -theta / 2), T(0), T(0), std::polar(T(1), theta / 2);
    return m;
}

Mat2 pauli_x();
Mat2 hadamard();
// Qiskit convention.
Mat2 u3(double theta, double phi, double lambda);

// Action on color (x) three paths, index 3 c + p. Left: red p -> p+1, blue p -> p-1.
MatrixXc roundabout_unitary(Orientation orientation);

// Color (x) {rail 2j, rail 2j+1, path j'}: an X-type device R_y(pi) on rail
// 2j+1, then the right-oriented roundabout.
MatrixXc encoder_unitary();
// Left roundabout followed by R_y(-pi) on rail 2j+1.
MatrixXc decoder_unitary();
// Red walker on rail 2j + q, as a state of encoder_unitary's space.
VectorXc encode(int q, Color input_color = Color::Red);

struct SingleQubitAngles {
    double theta0 = 0;  // global phase
    double theta1 = 0;  // outer R_z
    double theta2 = 0;  // R_y
    double theta3 = 0;  // inner R_z
};

// U = e^{i theta0} R_z(theta1) R_y(theta2) R_z(theta3), theta2 in [0, pi],
// theta0 in (-pi, pi]; degenerate splits put everything on theta1.
SingleQubitAngles single_qubit_decompose(const Mat2& u);
Mat2 compose(const SingleQubitAngles& a);

// Devices in flow order: R_z(theta3), R_y(theta2), R_z(theta1); zero angles dropped.
std::vector<DeviceSpec> rotation_chain(const SingleQubitAngles& a, double h_max = kDefaultFieldMax);

Mat4 cp_ideal(cplx phase);
// Local index 2 q_control + q_target.
Mat4 cnot_ideal();

struct IdealGate {
    std::string name;
    std::vector<int> targets;
    MatrixXc matrix;  // 2x2 or 4x4; two-qubit local index 2 q_{t0} + q_{t1}
};

// Basis index sum_j q_j 2^j.
void apply_gate(VectorXc& state, int n, const IdealGate& g);
VectorXc gate_model_apply(int n, const std::vector<IdealGate>& circuit, const VectorXc& input);
VectorXc basis_state(int n, int index);

}  // namespace qwalk
