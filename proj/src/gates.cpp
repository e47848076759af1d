#include "qwalk/gates.hpp"

#include <numbers>

namespace qwalk {

using std::numbers::pi;

Mat2 pauli_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

Mat2 hadamard() {
    Mat2 m;
    m << 1, 1, 1, -1;
    return m / std::numbers::sqrt2;
}

Mat2 u3(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat2 m;
    m << c, -std::polar(s, lambda), std::polar(s, phi), std::polar(c, phi + lambda);
    return m;
}

MatrixXc roundabout_unitary(Orientation orientation) {
    MatrixXc u = MatrixXc::Zero(6, 6);
    const int step = orientation == Orientation::Left ? 1 : 2;
    for (int p = 0; p < 3; ++p) {
        u((p + step) % 3, p) = 1.0;              // red
        u(3 + (p + 3 - step) % 3, 3 + p) = 1.0;  // blue
    }
    return u;
}

namespace {

// Color operator on one path of the 3-path space.
MatrixXc on_path(int path, const Mat2& op) {
    MatrixXc m = MatrixXc::Identity(6, 6);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m(3 * a + path, 3 * b + path) = op(a, b);
    return m;
}

}  // namespace

MatrixXc encoder_unitary() { return roundabout_unitary(Orientation::Right) * on_path(1, ry(pi)); }

MatrixXc decoder_unitary() { return on_path(1, ry(-pi)) * roundabout_unitary(Orientation::Left); }

VectorXc encode(int q, Color input_color) {
    if (input_color != Color::Red) throw ValidationError("encoder input must be a red walker");
    if (q != 0 && q != 1) throw ValidationError("dual-rail value must be 0 or 1");
    return encoder_unitary().col(q);
}

SingleQubitAngles single_qubit_decompose(const Mat2& u) {
    if ((u.adjoint() * u - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("matrix is not unitary");
    SingleQubitAngles a;
    a.theta0 = std::arg(u.determinant()) / 2;  // in (-pi/2, pi/2]
    const Mat2 v = u * std::polar(1.0, -a.theta0);
    const double c = std::abs(v(0, 0)), s = std::abs(v(1, 0));
    a.theta2 = 2 * std::atan2(s, c);
    const double eps = 1e-12;
    if (s < eps) {
        a.theta1 = 2 * std::arg(v(1, 1));
    } else if (c < eps) {
        a.theta1 = 2 * std::arg(v(1, 0));
    } else {
        const double sum = 2 * std::arg(v(1, 1)), diff = 2 * std::arg(v(1, 0));
        a.theta1 = (sum + diff) / 2;
        a.theta3 = (sum - diff) / 2;
    }
    for (double* t : {&a.theta1, &a.theta3}) {
        if (std::abs(*t) < 1e-14) *t = 0;
    }
    if ((compose(a) - u).cwiseAbs().maxCoeff() > 1e-9) throw NumericalError("decomposition failed to reconstruct");
    return a;
}

Mat2 compose(const SingleQubitAngles& a) {
    return std::polar(1.0, a.theta0) * rz(a.theta1) * ry(a.theta2) * rz(a.theta3);
}

std::vector<DeviceSpec> rotation_chain(const SingleQubitAngles& a, double h_max) {
    std::vector<DeviceSpec> out;
    const std::pair<Axis, double> steps[] = {{Axis::Z, a.theta3}, {Axis::Y, a.theta2}, {Axis::Z, a.theta1}};
    for (auto [axis, theta] : steps) {
        if (std::abs(theta) > 1e-12) out.push_back(device_spec(axis, theta, h_max));
    }
    return out;
}

Mat4 cp_ideal(cplx phase) {
    if (std::abs(std::abs(phase) - 1) > 1e-12) throw ValidationError("controlled phase must be unimodular");
    Mat4 m = Mat4::Identity();
    m(3, 3) = phase;
    return m;
}

Mat4 cnot_ideal() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

VectorXc basis_state(int n, int index) {
    if (n < 0 || n > 20 || index < 0 || index >= (1 << n)) throw ValidationError("basis index out of range");
    return VectorXc::Unit(1 << n, index);
}

void apply_gate(VectorXc& state, int n, const IdealGate& g) {
    for (int t : g.targets)
        if (t < 0 || t >= n) throw ValidationError("qubit index " + std::to_string(t) + " out of range");
    const Eigen::Index dim = Eigen::Index(1) << n;
    if (state.size() != dim) throw ValidationError("state dimension does not match qubit count");
    if (g.targets.size() == 1 && g.matrix.rows() == 2) {
        const Eigen::Index bit = Eigen::Index(1) << g.targets[0];
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const cplx a = state[i], b = state[i | bit];
            state[i] = g.matrix(0, 0) * a + g.matrix(0, 1) * b;
            state[i | bit] = g.matrix(1, 0) * a + g.matrix(1, 1) * b;
        }
    } else if (g.targets.size() == 2 && g.matrix.rows() == 4) {
        if (g.targets[0] == g.targets[1]) throw ValidationError("two-qubit gate needs distinct targets");
        const Eigen::Index b0 = Eigen::Index(1) << g.targets[0], b1 = Eigen::Index(1) << g.targets[1];
        for (Eigen::Index i = 0; i < dim; ++i) {
            if ((i & b0) || (i & b1)) continue;
            const Eigen::Index idx[4] = {i, i | b1, i | b0, i | b0 | b1};
            Eigen::Vector4cd v;
            for (int r = 0; r < 4; ++r) v[r] = state[idx[r]];
            v = g.matrix * v;
            for (int r = 0; r < 4; ++r) state[idx[r]] = v[r];
        }
    } else {
        throw ValidationError("gate '" + g.name + "' has inconsistent arity");
    }
}

VectorXc gate_model_apply(int n, const std::vector<IdealGate>& circuit, const VectorXc& input) {
    VectorXc s = input;
    for (const auto& g : circuit) apply_gate(s, n, g);
    return s;
}

}  // namespace qwalk
