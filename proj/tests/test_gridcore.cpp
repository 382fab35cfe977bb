#include "phasekrylov/error.hpp"
#include "phasekrylov/fft.hpp"
#include "phasekrylov/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace pk;

TEST_CASE("make_grid examples") {
    const Grid1D g = make_grid(8, 8.0, 1.0);
    CHECK(g.dx == 1.0);
    const std::vector<double> want{-4, -3, -2, -1, 0, 1, 2, 3};
    for (int i = 0; i < 8; ++i) CHECK(g.q(i) == want[i]);
    CHECK(g.dx * g.N == g.L);

    const PhaseGrid pg = make_phase_grid(make_grid(16, 16.0, 1.0));
    CHECK(pg.dp == doctest::Approx(std::numbers::pi / 16).epsilon(1e-15));
    CHECK(pg.p(0) == doctest::Approx(-8 * std::numbers::pi / 16));
    CHECK(pg.p(8) == 0.0);
    CHECK(pg.cell_area == doctest::Approx(std::numbers::pi / 16));

    CHECK_THROWS_AS(make_grid(7, 8.0, 1.0), Error);
    CHECK_THROWS_AS(make_grid(4, 8.0, 1.0), Error);
    CHECK_THROWS_AS(make_grid(8, -1.0, 1.0), Error);
    CHECK_THROWS_AS(make_grid(8, 8.0, 0.0), Error);
}

TEST_CASE("make_grid is idempotent and increasing") {
    const Grid1D a = make_grid(64, 12.5, 2.0), b = make_grid(64, 12.5, 2.0);
    CHECK(same_grid(a, b));
    CHECK(a.q_points == b.q_points);
    for (int i = 1; i < 64; ++i) CHECK(a.q(i) - a.q(i - 1) == doctest::Approx(a.dx).epsilon(1e-13));
}

TEST_CASE("chord grid is the DFT dual of the phase grid") {
    const PhaseGrid pg = make_phase_grid(make_grid(32, 10.0, 1.0));
    const ChordGrid c = make_chord_grid(pg);
    CHECK(c.dxi_q * pg.dp * pg.N() / 2 == doctest::Approx(std::numbers::pi));
    CHECK(c.dxi_p * pg.base.dx * pg.N() == doctest::Approx(2 * std::numbers::pi));
}

TEST_CASE("symplectic product") {
    CHECK(symplectic_product({1, 0}, {0, 1}) == 1.0);
    CHECK(symplectic_product({2.5, -1.5}, {2.5, -1.5}) == 0.0);
    CHECK(symplectic_product({2, 3}, {5, 7}) == -1.0);
    CHECK(symplectic_product({5, 7}, {2, 3}) == 1.0);
}

TEST_CASE("forward then inverse DFT reproduces the input") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss;
    for (int n : {8, 64, 256}) {
        std::vector<cplx> x(n), y;
        for (auto& v : x) v = cplx(gauss(rng), gauss(rng));
        y = x;
        fft::dft(y.data(), n, -1);
        fft::dft(y.data(), n, +1);
        double err = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i) {
            err = std::max(err, std::abs(y[i] / double(n) - x[i]));
            scale = std::max(scale, std::abs(x[i]));
        }
        CHECK(err <= 1e-12 * scale);
    }
    std::vector<cplx> z(16 * 8);
    for (auto& v : z) v = cplx(gauss(rng), gauss(rng));
    std::vector<cplx> w = z;
    fft::dft2(w.data(), 16, 8, -1);
    fft::dft2(w.data(), 16, 8, +1);
    for (size_t i = 0; i < z.size(); ++i) CHECK(std::abs(w[i] / 128.0 - z[i]) < 1e-13);
}

TEST_CASE("DFT sign convention") {
    std::vector<cplx> x(8, 0.0);
    x[1] = 1.0;
    fft::dft(x.data(), 8, -1);
    CHECK(std::abs(x[2] - std::polar(1.0, -2 * std::numbers::pi * 2 / 8)) < 1e-15);
    CHECK(fft::bin(-3, 8) == 5);
    CHECK(fft::bin(3, 8) == 3);
}

TEST_CASE("normalized Gaussian integrates to one over the phase grid") {
    const PhaseGrid pg = make_phase_grid(make_grid(128, 20.0, 1.0));
    double s = 0.0;
    for (int i = 0; i < pg.N(); ++i)
        for (int k = 0; k < pg.N(); ++k) {
            const double q = pg.q(i) - 0.7, p = pg.p(k) + 0.4;
            s += std::exp(-q * q / 2 - p * p / 2) / (2 * std::numbers::pi);
        }
    CHECK(std::abs(s * pg.cell_area - 1.0) < 1e-8);
}

TEST_CASE("boundary mass diagnostic") {
    const Grid1D g = make_grid(64, 16.0, 1.0);
    std::vector<cplx> psi(64, 0.0);
    psi[32] = 1.0 / std::sqrt(g.dx);
    CHECK(boundary_mass(g, psi) == 0.0);
    psi[1] = 0.1;
    psi[62] = 0.1;
    CHECK(boundary_mass(g, psi) == doctest::Approx(0.02 * g.dx));
    CHECK(boundary_mass(g, psi) > kBoundaryMassLimit);
}
