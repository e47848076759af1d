#include <numbers>
#include <random>

#include "doctest.h"
#include "qwalk/two_particle.hpp"

using namespace qwalk;
using std::numbers::pi;

TEST_CASE("amplitudes at the CP point") {
    const cplx I(0, 1);
    CHECK(std::abs(boson_amplitude(-pi / 2, pi / 2, -4) - I) < 1e-14);
    CHECK(std::abs(boson_amplitude(-pi / 2, pi / 2, 4) + I) < 1e-14);
    CHECK(std::abs(fermion_amplitude(-pi / 2, pi / 2, -2) - I) < 1e-14);
    CHECK(std::abs(fermion_amplitude(-pi / 2, pi / 2, 2) + I) < 1e-14);
    CHECK(std::abs(boson_amplitude(-0.4, 1.1, 0) - 1.0) < 1e-15);
    CHECK(std::abs(fermion_amplitude(-0.4, 1.1, 0) - 1.0) < 1e-15);
    // Coincident momenta make the boson amplitude degenerate.
    CHECK(std::abs(boson_amplitude(0.5, 0.5, 0) + 1.0) < 1e-15);
}

TEST_CASE("amplitudes are unimodular") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> kd(-pi, pi), ud(-6, 6);
    for (int i = 0; i < 200; ++i) {
        double k0 = kd(rng), k1 = kd(rng), u = ud(rng);
        CHECK(std::abs(std::abs(boson_amplitude(k0, k1, u)) - 1) < 1e-14);
        CHECK(std::abs(std::abs(fermion_amplitude(k0, k1, u)) - 1) < 1e-14);
    }
}

TEST_CASE("two-particle effective lengths") {
    CHECK(std::abs(two_particle_effective_length(Statistics::Boson, -4)) < 1e-5);
    CHECK(std::abs(two_particle_effective_length(Statistics::Fermion, -2) + 0.5) < 1e-5);
    for (auto [s, u] : {std::pair{Statistics::Boson, -4.0}, {Statistics::Fermion, -2.0}, {Statistics::Fermion, 2.0}}) {
        CHECK(std::abs(two_particle_effective_length(s, u) - two_particle_effective_length(s, u, true)) < 1e-6);
    }
}

TEST_CASE("Bethe wave functions solve the two-particle equation") {
    CHECK(verify_two_particle_eigenstate(40, -pi / 2, pi / 2, -4, Statistics::Boson) < 1e-10);
    CHECK(verify_two_particle_eigenstate(40, -pi / 2, pi / 2, -2, Statistics::Fermion) < 1e-10);
    CHECK(verify_two_particle_eigenstate(40, -1.1, 0.7, 0, Statistics::Boson) < 1e-12);
    CHECK(verify_two_particle_eigenstate(40, -1.1, 0.7, 0, Statistics::Fermion) < 1e-12);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> k0d(-pi + 0.05, -0.05), k1d(0.05, pi - 0.05), ud(-5, 5);
    for (auto s : {Statistics::Boson, Statistics::Fermion}) {
        for (int i = 0; i < 20; ++i) {
            CHECK(verify_two_particle_eigenstate(30, k0d(rng), k1d(rng), ud(rng), s) < 1e-10);
        }
    }
    CHECK_THROWS_AS(verify_two_particle_eigenstate(10, -1, 1, 0, Statistics::Boson), ValidationError);
}

TEST_CASE("exchange symmetry of the Bethe form") {
    const int n = 12;
    auto b = bethe_wavefunction(n, -0.9, 1.3, -1.5, Statistics::Boson);
    auto f = bethe_wavefunction(n, -0.9, 1.3, -1.5, Statistics::Fermion);
    auto b_sw = bethe_wavefunction(n, 1.3, -0.9, -1.5, Statistics::Boson);
    auto f_sw = bethe_wavefunction(n, 1.3, -0.9, -1.5, Statistics::Fermion);
    // Swapping momenta relabels S -> 1/S; compare after normalizing by the amplitude.
    const cplx sb = boson_amplitude(-0.9, 1.3, -1.5), sf = fermion_amplitude(-0.9, 1.3, -1.5);
    for (int x0 = 0; x0 < n; ++x0)
        for (int x1 = 0; x1 < n; ++x1) {
            CHECK(std::abs(b(x0, x1) - b(x1, x0)) < 1e-12);
            CHECK(std::abs(f(x0, x1) + f(x1, x0)) < 1e-12);
            CHECK(std::abs(b_sw(x0, x1) * sb - b(x0, x1)) < 1e-12);
            CHECK(std::abs(f_sw(x0, x1) * sf + f(x0, x1)) < 1e-12);
        }
}
