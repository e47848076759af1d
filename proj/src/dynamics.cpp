#include "qwalk/dynamics.hpp"

#include <numbers>

namespace qwalk {

DeviceSpec device_spec(Axis axis, double theta, double h_max) {
    if (!(h_max > 0)) throw ValidationError("device field bound must be positive");
    DeviceSpec d{axis, theta, 0.0, 0};
    if (theta == 0) return d;
    d.length = static_cast<int>(std::ceil(2 * std::abs(theta) / h_max - 1e-9));
    d.field = 2 * theta / d.length;
    return d;
}

SpMat kinetic_matrix(const Graph& g, Color color) {
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(2 * g.edges().size());
    for (const Edge& e : g.edges()) {
        const Weight w = color == Color::Red ? e.w : conj(e.w);
        trip.emplace_back(e.x, e.y, value(w));
        trip.emplace_back(e.y, e.x, value(conj(w)));
    }
    SpMat h(g.num_vertices(), g.num_vertices());
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
}

namespace {

void check_device(const Graph& g, const Device& d) {
    if (static_cast<int>(d.vertices.size()) != d.spec.length)
        throw ValidationError("device occupies " + std::to_string(d.vertices.size()) + " sites but needs " +
                              std::to_string(d.spec.length));
    if (std::abs(d.spec.field * d.spec.length - 2 * d.spec.theta) > 1e-12)
        throw ValidationError("device violates length * field = 2 theta");
    for (std::size_t i = 0; i < d.vertices.size(); ++i) {
        const int v = d.vertices[i];
        if (v < 0 || v >= g.num_vertices()) throw ValidationError("device vertex out of range");
        for (int u : g.neighbors(v)) {
            if (g.weight(v, u) != Weight::One)
                throw ValidationError("device vertex " + std::to_string(v) + " touches a complex-weight edge");
        }
        if (i > 0 && !g.has_edge(d.vertices[i - 1], v))
            throw ValidationError("device vertices are not a contiguous path");
    }
}

}  // namespace

Hamiltonian1P build_hamiltonian_1p(const Graph& g, const std::vector<Device>& devices) {
    const int n = g.num_vertices();
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(4 * g.edges().size() + 4 * devices.size());
    for (const Edge& e : g.edges()) {
        for (Color c : {Color::Red, Color::Blue}) {
            const Weight w = c == Color::Red ? e.w : conj(e.w);
            trip.emplace_back(pc_index(e.x, c), pc_index(e.y, c), value(w));
            trip.emplace_back(pc_index(e.y, c), pc_index(e.x, c), value(conj(w)));
        }
    }
    std::vector<bool> used(n, false);
    for (const Device& d : devices) {
        check_device(g, d);
        const double h = 0.5 * d.spec.field;
        for (int v : d.vertices) {
            if (used[v]) throw ValidationError("devices overlap at vertex " + std::to_string(v));
            used[v] = true;
            const int r = pc_index(v, Color::Red), b = pc_index(v, Color::Blue);
            if (d.spec.axis == Axis::Z) {
                trip.emplace_back(r, r, h);
                trip.emplace_back(b, b, -h);
            } else {
                trip.emplace_back(r, b, cplx(0, -h));
                trip.emplace_back(b, r, cplx(0, h));
            }
        }
    }
    Hamiltonian1P out;
    out.num_vertices = n;
    out.has_devices = !devices.empty();
    out.matrix.resize(2 * n, 2 * n);
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    return out;
}

long Hamiltonian2P::index(int x, int y) const {
    if (x > y) std::swap(x, y);
    const long v = num_vertices;
    if (statistics == Statistics::Boson) return x * v - static_cast<long>(x) * (x - 1) / 2 + (y - x);
    if (x == y) return -1;
    return x * (v - 1) - static_cast<long>(x) * (x - 1) / 2 + (y - x - 1);
}

Hamiltonian2P build_hamiltonian_2p(const Graph& g, Statistics s, double u, std::size_t capacity) {
    const long v = g.num_vertices();
    const std::size_t dim = s == Statistics::Boson ? v * (v + 1) / 2 : v * (v - 1) / 2;
    if (dim > capacity)
        throw CapacityError("two-particle space of dimension " + std::to_string(dim) + " exceeds capacity " +
                            std::to_string(capacity));
    Hamiltonian2P h;
    h.statistics = s;
    h.num_vertices = static_cast<int>(v);
    h.basis.reserve(dim);
    for (int x = 0; x < v; ++x)
        for (int y = s == Statistics::Boson ? x : x + 1; y < v; ++y) h.basis.emplace_back(x, y);

    const SpMat k = kinetic_matrix(g, Color::Red);
    const double fermion_sign = s == Statistics::Boson ? 1.0 : -1.0;
    auto norm = [](int a, int b) { return a == b ? 0.5 : std::numbers::sqrt2 / 2; };

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(dim * 8);
    // <{a,b}| H |{x,y}> = 2 N_xy N_ab (phi_ab +- phi_ba) with phi = H_dist |x y>.
    auto add = [&](std::size_t col, int x, int y, int a, int b, cplx c) {
        if (s == Statistics::Fermion && a == b) return;
        double sgn = 1.0;
        if (a > b) {
            std::swap(a, b);
            sgn = fermion_sign;
        }
        const double mult = a == b ? 2.0 : 1.0;
        const long row = h.index(a, b);
        trip.emplace_back(row, static_cast<long>(col), 2 * norm(x, y) * norm(a, b) * mult * sgn * c);
    };
    for (std::size_t col = 0; col < h.basis.size(); ++col) {
        const auto [x, y] = h.basis[col];
        for (SpMat::InnerIterator it(k, x); it; ++it) add(col, x, y, static_cast<int>(it.row()), y, it.value());
        for (SpMat::InnerIterator it(k, y); it; ++it) add(col, x, y, x, static_cast<int>(it.row()), it.value());
        double pot = 0;
        if (s == Statistics::Boson && x == y) pot = u;
        if (s == Statistics::Fermion && g.has_edge(x, y)) pot = u;
        if (pot != 0) add(col, x, y, x, y, pot);
    }
    h.matrix.resize(static_cast<long>(dim), static_cast<long>(dim));
    h.matrix.setFromTriplets(trip.begin(), trip.end());
    return h;
}

VectorXc pair_state(const Hamiltonian2P& h, const VectorXc& f0, const VectorXc& f1) {
    if (f0.size() != h.num_vertices || f1.size() != h.num_vertices)
        throw ValidationError("profile size does not match the vertex count");
    const double sign = h.statistics == Statistics::Boson ? 1.0 : -1.0;
    VectorXc out(h.dimension());
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
        const auto [x, y] = h.basis[i];
        if (x == y) {
            out[i] = std::numbers::sqrt2 * f0[x] * f1[x];
        } else {
            out[i] = f0[x] * f1[y] + sign * f0[y] * f1[x];
        }
    }
    const double n = out.norm();
    if (n < 1e-12) throw ValidationError("pair state vanishes");
    return out / n;
}

cplx packet_amplitude(int x, int L, PacketSign sign) {
    if (x < L || x > 2 * L - 1) return 0.0;
    const double phase = (sign == PacketSign::Input ? 1.0 : -1.0) * std::numbers::pi * x / 2;
    return std::polar(1.0 / std::sqrt(static_cast<double>(L)), phase);
}

VectorXc packet_profile(const WavePacketSpec& spec, int num_vertices) {
    if (spec.L < 1) throw ValidationError("packet length must be positive");
    if (static_cast<int>(spec.segment.size()) < 3 * spec.L)
        throw ValidationError("segment of " + std::to_string(spec.segment.size()) + " sites is shorter than 3L = " +
                              std::to_string(3 * spec.L));
    VectorXc f = VectorXc::Zero(num_vertices);
    for (int x = spec.L; x < 2 * spec.L; ++x) {
        const int v = spec.segment[x];
        if (v < 0 || v >= num_vertices) throw ValidationError("segment vertex out of range");
        f[v] = packet_amplitude(x, spec.L, spec.sign);
    }
    return f;
}

VectorXc make_packet(const WavePacketSpec& spec, int num_vertices) {
    const VectorXc f = packet_profile(spec, num_vertices);
    VectorXc psi = VectorXc::Zero(2 * num_vertices);
    for (int v = 0; v < num_vertices; ++v) psi[pc_index(v, spec.color)] = f[v];
    return psi;
}

double momentum_density(const VectorXc& profile, double k) {
    cplx f = 0;
    for (Eigen::Index x = 0; x < profile.size(); ++x) f += profile[x] * std::polar(1.0, k * x);
    return std::norm(f) / (2 * std::numbers::pi);
}

SpectralBounds gershgorin(const SpMat& h) {
    const Eigen::Index n = h.rows();
    if (n == 0) return {0, 0};
    Eigen::VectorXd center = Eigen::VectorXd::Zero(n), radius = Eigen::VectorXd::Zero(n);
    for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
        for (SpMat::InnerIterator it(h, c); it; ++it) {
            if (it.row() == it.col()) {
                center[it.row()] += it.value().real();
            } else {
                radius[it.row()] += std::abs(it.value());
            }
        }
    }
    return {(center - radius).minCoeff(), (center + radius).maxCoeff()};
}

VectorXc propagate(const VectorXc& psi, const SpMat& h, double t, double tol) {
    if (psi.size() != h.rows()) throw ValidationError("state and Hamiltonian dimensions differ");
    auto apply = [&h](const VectorXc& in, VectorXc& out) { out.noalias() = h * in; };
    return chebyshev_evolve(apply, psi, gershgorin(h), t, tol);
}

double energy(const VectorXc& psi, const SpMat& h) { return psi.dot(h * psi).real(); }

double position_expectation(const VectorXc& psi, const Eigen::VectorXd& coord, int colors) {
    double num = 0, den = 0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double p = std::norm(psi[i]);
        num += p * coord[i / colors];
        den += p;
    }
    return num / den;
}

double centroid_velocity(const std::vector<double>& times, const std::vector<VectorXc>& states,
                         const Eigen::VectorXd& coord, const std::vector<int>& boundary, int colors,
                         double touch_tol) {
    if (times.size() != states.size() || times.size() < 2)
        throw ValidationError("centroid fit needs at least two samples");
    const auto n = static_cast<double>(times.size());
    double st = 0, sx = 0, stt = 0, stx = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (int v : boundary) {
            double p = 0;
            for (int c = 0; c < colors; ++c) p += std::norm(states[i][colors * v + c]);
            if (p > touch_tol) throw NumericalError("packet touched the boundary during the fit window");
        }
        const double x = position_expectation(states[i], coord, colors);
        st += times[i];
        sx += x;
        stt += times[i] * times[i];
        stx += times[i] * x;
    }
    return (n * stx - st * sx) / (n * stt - st * st);
}

cplx extract_phase(const VectorXc& state, const VectorXc& reference, double threshold) {
    if (state.size() != reference.size()) throw ValidationError("state and reference dimensions differ");
    const cplx ov = reference.dot(state);
    if (std::abs(ov) < threshold)
        throw NumericalError("phase undefined: overlap " + std::to_string(std::abs(ov)) + " below threshold");
    return ov / std::abs(ov);
}

Graph path_graph(int n) {
    Graph g(n);
    for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1, Weight::One);
    return g;
}

PairPropagator::PairPropagator(SpMat h0, SpMat h1, std::vector<PairInteraction> interaction)
    : h0_(std::move(h0)), h1_(std::move(h1)), interaction_(std::move(interaction)) {
    h1t_ = h1_.transpose();
    const SpectralBounds b0 = gershgorin(h0_), b1 = gershgorin(h1_);
    double ulo = 0, uhi = 0;
    for (const auto& e : interaction_) {
        ulo = std::min(ulo, e.u);
        uhi = std::max(uhi, e.u);
    }
    bounds_ = {b0.lo + b1.lo + ulo, b0.hi + b1.hi + uhi};
}

void PairPropagator::apply(const MatrixXc& in, MatrixXc& out) const {
    out.noalias() = h0_ * in;
    out.noalias() += in * h1t_;
    for (const auto& e : interaction_) out(e.a, e.b) += e.u * in(e.a, e.b);
}

MatrixXc PairPropagator::evolve(const MatrixXc& psi, double t, double tol) const {
    if (psi.rows() != h0_.rows() || psi.cols() != h1_.rows()) throw ValidationError("pair state has wrong shape");
    auto fn = [this](const MatrixXc& in, MatrixXc& out) { apply(in, out); };
    return chebyshev_evolve(fn, psi, bounds_, t, tol);
}

}  // namespace qwalk
