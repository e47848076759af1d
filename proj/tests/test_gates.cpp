#include <numbers>
#include <random>

#include "doctest.h"
#include "qwalk/gates.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

bool unitary(const MatrixXc& m) {
    return (m.adjoint() * m - MatrixXc::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < 1e-12;
}

int idx(int c, int p) { return 3 * c + p; }

Mat2 random_unitary(std::mt19937& rng) {
    std::normal_distribution<double> nd;
    Mat2 z;
    for (int i = 0; i < 4; ++i) z(i / 2, i % 2) = cplx(nd(rng), nd(rng));
    Eigen::HouseholderQR<Mat2> qr(z);
    return qr.householderQ();
}

}  // namespace

TEST_CASE("roundabout unitaries") {
    auto left = roundabout_unitary(Orientation::Left);
    auto right = roundabout_unitary(Orientation::Right);
    CHECK(unitary(left));
    CHECK(left(idx(0, 2), idx(0, 1)) == cplx(1));  // red 1 -> 2
    CHECK(right(idx(1, 0), idx(1, 2)) == cplx(1));  // blue 2 -> 0
    CHECK((left * right - MatrixXc::Identity(6, 6)).norm() == 0.0);
    CHECK((right - left.adjoint()).norm() == 0.0);
}

TEST_CASE("encoder and decoder") {
    CHECK(unitary(encoder_unitary()));
    VectorXc e0 = encode(0), e1 = encode(1);
    CHECK(std::abs(e0[idx(0, 2)] - 1.0) < 1e-15);
    CHECK(std::abs(e1[idx(1, 2)] - 1.0) < 1e-15);
    CHECK((decoder_unitary() - encoder_unitary().adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    for (int q = 0; q < 2; ++q) {
        VectorXc back = decoder_unitary() * encode(q);
        CHECK(std::abs(back[idx(0, q)] - 1.0) < 1e-15);
    }
    CHECK_THROWS_AS(encode(0, Color::Blue), ValidationError);
}

TEST_CASE("single-qubit decomposition") {
    auto id = single_qubit_decompose(Mat2::Identity());
    CHECK(id.theta0 == 0.0);
    CHECK(id.theta1 == 0.0);
    CHECK(id.theta2 == 0.0);
    CHECK(id.theta3 == 0.0);

    auto r = single_qubit_decompose(ry(pi / 3));
    CHECK(r.theta0 == doctest::Approx(0).scale(1));
    CHECK(r.theta1 == doctest::Approx(0).scale(1));
    CHECK(r.theta2 == doctest::Approx(pi / 3));
    CHECK(r.theta3 == doctest::Approx(0).scale(1));

    for (const Mat2& u : {hadamard(), pauli_x(), rz(0.4), Mat2(cplx(0, 1) * Mat2::Identity())}) {
        auto a = single_qubit_decompose(u);
        CHECK((compose(a) - u).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(a.theta2 >= 0);
        CHECK(a.theta2 <= pi);
        CHECK(a.theta0 > -pi);
        CHECK(a.theta0 <= pi);
    }
    std::mt19937 rng(2);
    for (int i = 0; i < 200; ++i) {
        Mat2 u = random_unitary(rng);
        auto a = single_qubit_decompose(u);
        CHECK((compose(a) - u).cwiseAbs().maxCoeff() < 1e-9);
        for (double t : {a.theta1, a.theta3}) {
            CHECK(t > -2 * pi);
            CHECK(t <= 2 * pi);
        }
    }
    Mat2 bad = Mat2::Identity() * 2.0;
    CHECK_THROWS_AS(single_qubit_decompose(bad), ValidationError);
}

TEST_CASE("rotation chains") {
    auto h = rotation_chain(single_qubit_decompose(hadamard()));
    int total = 0;
    for (const auto& d : h) {
        CHECK(d.length * d.field == doctest::Approx(2 * d.theta));
        total += d.length;
    }
    CHECK(h.size() == 2);
    CHECK(total == 48);
    CHECK(rotation_chain(single_qubit_decompose(Mat2::Identity())).empty());
}

TEST_CASE("controlled phase and CNOT") {
    const cplx I(0, 1);
    CHECK((cp_ideal(I) * cp_ideal(I) - cp_ideal(-1.0)).norm() < 1e-15);
    CHECK((cp_ideal(I) * cp_ideal(-I) - Mat4::Identity()).norm() < 1e-15);
    Mat4 ih = Mat4::Zero();
    ih.topLeftCorner<2, 2>() = hadamard();
    ih.bottomRightCorner<2, 2>() = hadamard();
    CHECK((ih * cp_ideal(-1.0) * ih - cnot_ideal()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(unitary(cnot_ideal()));
}

TEST_CASE("gate model") {
    VectorXc in = basis_state(2, 2);  // |q1 q0> = |10>
    CHECK((gate_model_apply(2, {}, in) - in).norm() == 0.0);
    auto out = gate_model_apply(2, {{"cnot", {1, 0}, cnot_ideal()}}, in);
    CHECK(std::abs(out[3] - 1.0) < 1e-15);
    IdealGate h0{"h", {0}, hadamard()};
    out = gate_model_apply(2, {h0, {"cp", {1, 0}, cp_ideal(-1.0)}, h0}, in);
    CHECK(std::abs(out[3] - 1.0) < 1e-12);
    CHECK_THROWS_AS(gate_model_apply(2, {{"h", {2}, hadamard()}}, in), ValidationError);
}
