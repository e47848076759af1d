#include "qwalk/scattering.hpp"

#include <numbers>

namespace qwalk {

namespace {

ScatteringRegion colored(const ScatteringRegion& r, Color color) {
    return color == Color::Red ? r : conjugate(r);
}

constexpr cplx I{0.0, 1.0};

// Lower triangle of the printed forms at a regular point.
MatrixXc reference_lower(int variant, double k) {
    using std::numbers::pi;
    MatrixXc s = MatrixXc::Zero(3, 3);
    const cplx s00 = -std::exp(4.0 * I * k) / (1.0 + 2.0 * I * std::tan(k));
    const cplx den = 2.0 - I / std::tan(k);
    const double c = std::cos(k / 2 + pi / 4);
    const double sn = std::sin(k / 2 + pi / 4);
    if (variant == 1) {
        const cplx pre = std::exp(I * (3.5 * k - pi / 4));
        s(0, 0) = s(1, 1) = s(2, 2) = s00;
        s(1, 0) = s(2, 1) = -2.0 * pre * c / den;
        s(2, 0) = -2.0 * I * pre * sn / den;
    } else if (variant == 2 || variant == 3) {
        s(0, 0) = s(1, 1) = s00;
        s(2, 2) = std::exp(2.0 * I * k) * s00;
        s(1, 0) = 2.0 * std::exp(I * (3.5 * k - pi / 4)) * c / den;
        s(2, 0) = 2.0 * std::exp(I * (4.5 * k - pi / 4)) * sn / den;
        s(2, 1) = 2.0 * std::exp(I * (4.5 * k + pi / 4)) * c / den;
    } else {
        throw ValidationError("unknown roundabout variant " + std::to_string(variant));
    }
    return s;
}

MatrixXc reference_lower_limit(int variant, double k) {
    if (std::abs(std::cos(k)) > 1e-6) return reference_lower(variant, k);
    // tan k diverges here; the singularity is removable.
    const MatrixXc a = reference_lower(variant, k - 1e-8);
    const MatrixXc b = reference_lower(variant, k + 1e-8);
    if ((a - b).cwiseAbs().maxCoeff() > 1e-6) throw NumericalError("closed form limit does not converge");
    return 0.5 * (a + b);
}

}  // namespace

MatrixXc s_matrix(const ScatteringRegion& r, double k, Color color) {
    const auto p = partition<double>(colored(r, color));
    try {
        return s_from_blocks<double>(p.A, p.B, p.D, k);
    } catch (const ResonanceError&) {
        return solve_scattering_system<double>(p, k).first;
    }
}

MatrixXc s_elements_reference(int variant, double k) {
    MatrixXc s = reference_lower_limit(variant, k);
    const MatrixXc sm = reference_lower_limit(variant, -k);
    for (int l = 0; l < 3; ++l)
        for (int j = l + 1; j < 3; ++j) s(l, j) = std::conj(sm(j, l));
    return s;
}

MatrixXc internal_amplitudes(const ScatteringRegion& r, double k, Color color) {
    const auto p = partition<double>(colored(r, color));
    const auto n = p.A.rows();
    if (p.D.rows() == 0) return MatrixXc(0, n);
    try {
        const MatrixXc s = s_from_blocks<double>(p.A, p.B, p.D, k);
        return resolvent_times<double>(p.B, p.D, k) * (MatrixXc::Identity(n, n) + s);
    } catch (const ResonanceError&) {
        return solve_scattering_system<double>(p, k).second;
    }
}

double scattering_state_residual(const ScatteringRegion& r, double k, Color color) {
    const auto p = partition<double>(colored(r, color));
    const auto n = p.A.rows();
    const MatrixXc s = s_matrix(r, k, color);
    const MatrixXc terminal = MatrixXc::Identity(n, n) + s;
    const MatrixXc psi = internal_amplitudes(r, k, color);
    // Lead site x = 1 for incoming lead j: delta_lj e^{-ik} + S_lj e^{ik}.
    const MatrixXc lead1 = std::exp(-I * k) * MatrixXc::Identity(n, n) + std::exp(I * k) * s;
    const double e = 2 * std::cos(k);
    MatrixXc res_t = p.A * terminal + lead1 - e * terminal;
    if (p.D.rows() > 0) res_t += p.B.adjoint() * psi;
    double worst = res_t.cwiseAbs().maxCoeff();
    if (p.D.rows() > 0) {
        const MatrixXc res_i = p.B * terminal + p.D * psi - e * psi;
        worst = std::max(worst, res_i.cwiseAbs().maxCoeff());
    }
    return worst;
}

double effective_length(const ScatteringRegion& r, double k, int l, int j, Color color, double h) {
    const int n = r.num_terminals();
    if (l < 0 || j < 0 || l >= n || j >= n) throw ValidationError("terminal index out of range");
    const cplx sp = s_matrix(r, k + h, color)(l, j);
    const cplx sm = s_matrix(r, k - h, color)(l, j);
    const cplx s0 = s_matrix(r, k, color)(l, j);
    if (std::abs(s0) < 1e-6 || std::abs(sp) < 1e-6 || std::abs(sm) < 1e-6)
        throw NumericalError("effective length undefined: S_" + std::to_string(l) + std::to_string(j) +
                             " vanishes");
    const cplx d = -I * std::log(sp / sm) / (2 * h);
    if (std::abs(d.imag()) > 1e-6)
        throw NumericalError("effective length has imaginary part " + std::to_string(d.imag()));
    return d.real();
}

Eigen::MatrixXd effective_length_table(const ScatteringRegion& r, double k, Color color, double h) {
    const int n = r.num_terminals();
    Eigen::MatrixXd out = Eigen::MatrixXd::Constant(n, n, std::nan(""));
    for (int l = 0; l < n; ++l) {
        for (int j = 0; j < n; ++j) {
            try {
                out(l, j) = effective_length(r, k, l, j, color, h);
            } catch (const NumericalError&) {
                // entries with vanishing amplitude stay NaN
            }
        }
    }
    return out;
}

std::vector<SweepRow> transmission_sweep(const ScatteringRegion& r, const std::vector<double>& ks, Color color) {
    std::vector<SweepRow> rows;
    rows.reserve(ks.size());
    for (double k : ks) {
        MatrixXc s = s_matrix(r, k, color);
        Eigen::MatrixXd t = s.cwiseAbs2();
        rows.push_back({k, std::move(s), std::move(t)});
    }
    return rows;
}

std::vector<double> k_grid(double kmin, double kmax, int points) {
    using std::numbers::pi;
    if (points < 1) throw ValidationError("k grid needs at least one point");
    if (kmax < kmin) throw ValidationError("kmax < kmin");
    std::vector<double> ks;
    for (int i = 0; i < points; ++i) {
        const double k = points == 1 ? kmin : kmin + (kmax - kmin) * i / (points - 1);
        for (double bad : {0.0, pi, -pi}) {
            if (std::abs(k - bad) < 1e-9) throw ValidationError("k grid touches 0 or +-pi");
        }
        ks.push_back(k);
    }
    return ks;
}

}  // namespace qwalk
