#include "systems.hpp"

#include <doctest.h>

using namespace pk;
using namespace pk::testing;

namespace {

constexpr int kO = 128;  // index of q = 0 and p = 0 at N = 256

// random state in the span of the lowest n oscillator levels
StateVector low_state(const StateSystem& s, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Vec c = Vec::Zero(s.g.N);
    for (int j = 0; j < n; ++j) c(j) = cplx(gauss(rng), gauss(rng));
    return from_energy_basis(s.spec, c / c.norm());
}

OperatorMatrix low_hermitian(const StateSystem& s, int n, std::mt19937_64& rng) {
    const Mat V = s.spec.eigenvectors.leftCols(n);
    return make_operator(s.g, V * random_hermitian(n, rng) * V.adjoint());
}

int zero_index(const std::vector<double>& xs) {
    for (int j = 0; j < int(xs.size()); ++j)
        if (std::abs(xs[j]) < 1e-12) return j;
    return -1;
}

} // namespace

TEST_CASE("oscillator ground state Wigner function") {
    const StateSystem s = oscillator();
    const StateVector psi = eigenstate(s.spec, 0);
    const PhaseField W = wigner_of_state(psi);
    CHECK(W.norm == Normalization::wigner);
    CHECK(std::abs(W.values(kO, kO) - 1 / kPi) < 1e-6);
    CHECK(std::abs(W.integral() - 1.0) < 1e-8);
    CHECK(W.max_abs_imag() < 1e-9);
    const PhaseField G = sample_field(s.pg, [](double q, double p) { return std::exp(-q * q - p * p) / kPi; });
    CHECK(max_abs(W.values - G.values) < 1e-6);

    const std::vector<cplx> pw = momentum_wavefunction(psi, s.pg);
    double err_q = 0, err_p = 0;
    for (int i = 0; i < 256; ++i) {
        const double mq = W.values.row(i).sum().real() * s.pg.dp;
        err_q = std::max(err_q, std::abs(mq - std::norm(psi.amp(i))));
        const double mp = W.values.col(i).sum().real() * s.g.dx;
        err_p = std::max(err_p, std::abs(mp - std::norm(pw[i])));
    }
    CHECK(err_q < 1e-6);
    CHECK(err_p < 1e-6);
}

TEST_CASE("first excited state is negative at the origin") {
    const StateSystem s = oscillator();
    const PhaseField W = wigner_of_state(eigenstate(s.spec, 1));
    CHECK(std::abs(W.values(kO, kO) + 1 / kPi) < 1e-6);
    CHECK(std::abs(W.integral() - 1.0) < 1e-8);
}

TEST_CASE("Wigner of a state near the box edge is rejected") {
    const StateSystem s = oscillator();
    CHECK_THROWS_AS(wigner_of_state(gaussian_state(s.g, 9.0, 0.0, 1.0)), Error);
}

TEST_CASE("identity symbols") {
    const StateSystem s = oscillator(64, 10.0);
    // the band identity maps to 1; the full identity aliases to 2 on the half-Nyquist momentum grid
    const PhaseField one = weyl_transform(band_identity(s.g));
    CHECK(max_abs(one.values - Mat::Ones(64, 64)) < 1e-9);
    const PhaseField two = weyl_transform(identity_operator(s.g));
    CHECK(max_abs(two.values - 2.0 * Mat::Ones(64, 64)) < 1e-9);
    CHECK(max_abs(weyl_quantize(one).m - band_projector(64)) < 1e-9);
}

TEST_CASE("position and qp symbols in weak form") {
    const StateSystem s = oscillator();
    std::mt19937_64 rng(11);
    const PhaseField q = sample_field(s.pg, [](double x, double) { return cplx(x); });
    const PhaseField qp = sample_field(s.pg, [](double x, double p) { return cplx(x * p); });
    const OperatorMatrix Q = position_operator(s.g);
    const OperatorMatrix P = momentum_operator(s.g);
    const Mat sym = 0.5 * (Q.m * P.m + P.m * Q.m);
    const OperatorMatrix Qq = weyl_quantize(q);
    const OperatorMatrix Qqp = weyl_quantize(qp);
    for (int r = 0; r < 3; ++r) {
        const StateVector psi = low_state(s, 12, rng);
        const PhaseField W = wigner_of_state(psi);
        const Vec u = psi.coords();
        CHECK(std::abs(phase_pairing(q, W) - u.dot(Q.m * u)) < 1e-8);
        CHECK(std::abs(phase_pairing(qp, W) - u.dot(sym * u)) < 1e-8);
        CHECK((Qq.m * u - Q.m * u).norm() < 1e-8);
        CHECK((Qqp.m * u - sym * u).norm() < 1e-8);
    }
}

TEST_CASE("Weyl round trip and Hermitian reality") {
    const StateSystem s = oscillator(128, 16.0);
    std::mt19937_64 rng(3);
    for (int r = 0; r < 3; ++r) {
        const OperatorMatrix O = low_hermitian(s, 12, rng);
        const PhaseField T = weyl_transform(O);
        CHECK(T.max_abs_imag() < 1e-9);
        CHECK(max_abs(weyl_quantize(T).m - O.m) < 1e-8);
    }
    // a half-band operator that is not confined still round trips
    const Mat Pb = band_projector(128);
    const OperatorMatrix X = make_operator(s.g, Pb * random_hermitian(128, rng) * Pb);
    CHECK(max_abs(weyl_quantize(weyl_transform(X)).m - X.m) < 1e-8);
}

TEST_CASE("trace, transition-probability and expectation rules") {
    const StateSystem s = oscillator();
    std::mt19937_64 rng(5);
    const OperatorMatrix A = low_hermitian(s, 15, rng);
    const OperatorMatrix B = low_hermitian(s, 15, rng);
    const cplx tr = (A.m * B.m).trace();
    const cplx ph = phase_pairing(weyl_transform(A), weyl_transform(B)) / (2 * kPi);
    CHECK(std::abs(ph - tr) < 1e-6 * std::abs(tr));

    const StateVector p1 = low_state(s, 10, rng), p2 = low_state(s, 10, rng);
    const PhaseField W1 = wigner_of_state(p1), W2 = wigner_of_state(p2);
    CHECK(std::abs(2 * kPi * phase_pairing(W1, W2) - std::norm(inner(p1, p2))) < 1e-6);

    const cplx ex = p1.coords().dot(A.m * p1.coords());
    CHECK(std::abs(phase_pairing(weyl_transform(A), W1) - ex) < 1e-6);
    // analytic Hamiltonian symbol
    const PhaseField Hs = sample_field(s.pg, [](double q, double p) { return cplx(0.5 * p * p + 0.5 * q * q); });
    const cplx eh = p1.coords().dot(s.H.m * p1.coords());
    CHECK(std::abs(phase_pairing(Hs, W1) - eh) < 1e-6);
}

TEST_CASE("Krylov phase set: structure, integrals and orthonormality") {
    const StateSystem s = oscillator();
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 8);
    REQUIRE(kb.dim() == 8);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    for (int n = 0; n < 8; ++n) {
        CHECK(std::abs(set.field(n, n).integral() - 1.0) < 1e-7);
        CHECK(set.field(n, n).max_abs_imag() < 1e-9);
        for (int m = 0; m < 8; ++m) {
            CHECK(max_abs(set.field(m, n).values.conjugate() - set.field(n, m).values) < 1e-9);
            if (m != n) CHECK(std::abs(set.field(n, m).integral()) < 1e-7);
        }
    }
    double worst = 0;
    for (int n = 0; n < 8; ++n)
        for (int m = 0; m < 8; ++m)
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) {
                    const cplx ov = (set.field(n, m).values.cwiseProduct(set.field(i, j).values.conjugate())).sum() *
                                    s.pg.cell_area;
                    const double want = (n == i && m == j) ? 1 / (2 * kPi) : 0.0;
                    worst = std::max(worst, std::abs(ov - want));
                }
    CHECK(worst < 1e-6);
}

TEST_CASE("Krylov completeness") {
    const StateSystem s = oscillator();
    std::mt19937_64 rng(8);
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 10);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    PhaseField sum = zero_field(s.pg, Normalization::symbol);
    for (int n = 0; n < 10; ++n) sum.values += 2 * kPi * set.field(n, n).values;
    std::normal_distribution<double> gauss;
    for (int r = 0; r < 3; ++r) {
        Vec c(10);
        for (int n = 0; n < 10; ++n) c(n) = cplx(gauss(rng), gauss(rng));
        const StateVector psi = state_from_coords(s.g, kb.coords() * c / c.norm());
        CHECK(std::abs(phase_pairing(sum, wigner_of_state(psi)) - 1.0) < 1e-8);
    }

    // pointwise the truncated sum oscillates with the parity of D (2, 0, 2, ... at the origin), so the
    // check uses the mean of the D = 59 and D = 60 partial sums inside q^2 + p^2 <= 4
    const StateSystem s2 = oscillator(256, 24.0);
    std::vector<StateVector> levels;
    for (int n = 0; n < 60; ++n) levels.push_back(eigenstate(s2.spec, n));
    const KrylovPhaseSet full = phase_set_from_vectors(s2.g, levels);
    double worst = 0;
    for (int i = 0; i < 256; ++i)
        for (int k = 0; k < 256; ++k) {
            const double q = s2.pg.q(i), p = s2.pg.p(k);
            if (q * q + p * p > 4) continue;
            cplx v = 0;
            for (int n = 0; n < 59; ++n) v += 2 * kPi * full.field(n, n).values(i, k);
            v += kPi * full.field(59, 59).values(i, k);
            worst = std::max(worst, std::abs(v - 1.0));
        }
    CHECK(worst < 5e-2);
}

TEST_CASE("spreading kernel") {
    const StateSystem s = oscillator();
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 8);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    const PhaseField K = spreading_kernel(set);
    const Mat C = kb.coords();
    Mat Kop = Mat::Zero(256, 256);
    for (int n = 0; n < 8; ++n) Kop += double(n) * C.col(n) * C.col(n).adjoint();
    CHECK(max_abs(K.values - weyl_transform(make_operator(s.g, Kop)).values) < 1e-6);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(std::abs(phase_pairing(K, set.field(i, j)) - (i == j ? double(j) : 0.0)) < 1e-6);

    const KrylovStateBasis one = lanczos_state(s.spec, eigenstate(s.spec, 2), 4);
    CHECK(max_abs(spreading_kernel(krylov_phase_set(one)).values) == 0.0);
}

TEST_CASE("Krylov functions from the energy basis") {
    const StateSystem s = oscillator();
    Vec c = Vec::Zero(256);
    c(0) = 0.5;
    c(1) = cplx(0.3, 0.4);
    c(3) = 0.6;
    c(4) = cplx(0.0, -0.374);
    c /= c.norm();
    const StateVector psi0 = from_energy_basis(s.spec, c);
    const KrylovStateBasis kb = lanczos_state(s.spec, psi0, 10);
    REQUIRE(kb.dim() == 4);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    const int lv[] = {0, 1, 3, 4};
    std::vector<std::vector<double>> Pn;
    for (int a : lv) Pn.push_back(krylov_polynomials(kb.a, kb.b, s.spec.eigenvalues(a)));
    for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m) {
            PhaseField rec = zero_field(s.pg, Normalization::wigner);
            for (int x = 0; x < 4; ++x)
                for (int y = 0; y < 4; ++y) {
                    const cplx w = Pn[x][n] * Pn[y][m] * c(lv[x]) * std::conj(c(lv[y]));
                    rec.values += w * weyl_transform_outer(s.pg, s.spec.eigenvectors.col(lv[x]),
                                                           s.spec.eigenvectors.col(lv[y])).values / (2 * kPi);
                }
            CHECK(max_abs_diff(rec, set.field(n, m)) < 1e-6);
        }
}

TEST_CASE("antisymmetrised neighbour relation") {
    const StateSystem s = oscillator();
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 8);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    const Mat C = kb.coords();
    for (int n = 1; n < 6; ++n) {
        const Mat Pn = C.col(n) * C.col(n).adjoint();
        const Mat Pa = 0.5 * (C.col(n) * C.col(n - 1).adjoint() - C.col(n - 1) * C.col(n).adjoint());
        const Mat X = Pn * s.H.m - s.H.m * Pn - 2 * kb.b[n] * Pa;
        // the y-integral is half the Weyl transform
        PhaseField rhs = weyl_transform(make_operator(s.g, X));
        rhs.values *= 0.5 / (2 * kPi * kb.b[n + 1]);
        const Mat lhs = 0.5 * (set.field(n, n + 1).values - set.field(n + 1, n).values);
        CHECK(max_abs(lhs - rhs.values) < 1e-6 * max_abs(lhs) + 1e-9);
    }
}

TEST_CASE("characteristic function") {
    const StateSystem s = oscillator();
    const PhaseField W = wigner_of_state(eigenstate(s.spec, 0));
    const ChordField chi = characteristic_function(W);
    const int jq = zero_index(chi.grid.xi_q_points), jp = zero_index(chi.grid.xi_p_points);
    REQUIRE(jq >= 0);
    REQUIRE(jp >= 0);
    CHECK(std::abs(chi.values(jq, jp) - 1.0) < 1e-8);
    double err = 0, sym = 0;
    for (int a = -6; a <= 6; ++a)
        for (int b = -6; b <= 6; ++b) {
            const double xq = chi.grid.xi_q_points[jq + a], xp = chi.grid.xi_p_points[jp + b];
            err = std::max(err, std::abs(std::abs(chi.values(jq + a, jp + b)) - std::exp(-(xq * xq + xp * xp) / 4)));
            sym = std::max(sym, std::abs(chi.values(jq - a, jp - b) - std::conj(chi.values(jq + a, jp + b))));
        }
    CHECK(err < 1e-6);
    CHECK(sym < 1e-10);
    CHECK(max_abs_diff(inverse_characteristic(chi, Normalization::wigner), W) < 1e-10);

    std::mt19937_64 rng(2);
    const StateVector psi = low_state(s, 10, rng);
    const ChordField cp = characteristic_function(wigner_of_state(psi));
    const Vec u = psi.coords();
    for (int a : {-3, 0, 2})
        for (int b : {-4, 1, 5}) {
            const PhasePoint xi{chi.grid.xi_q_points[jq + a], chi.grid.xi_p_points[jp + b]};
            const Mat T = displacement_operator(s.g, xi).m;
            CHECK(std::abs(cp.values(jq + a, jp + b) - u.dot(T.adjoint() * u)) < 1e-6);
        }
}

TEST_CASE("displacement operators") {
    const StateSystem s = oscillator();
    CHECK(max_abs(displacement_operator(s.g, {0, 0}).m - Mat::Identity(256, 256)) == 0.0);
    const PhasePoint xi{5 * s.g.dx, 0.7}, eta{-3 * s.g.dx, -0.4};
    const Mat Dx = displacement_operator(s.g, xi).m;
    CHECK(max_abs(Dx * Dx.adjoint() - Mat::Identity(256, 256)) < 1e-9);
    const cplx ph = std::polar(1.0, -0.5 * symplectic_product(xi, eta));
    const Mat lhs = Dx * displacement_operator(s.g, eta).m;
    const Mat rhs = ph * displacement_operator(s.g, {xi.q + eta.q, xi.p + eta.p}).m;
    std::mt19937_64 rng(9);
    const Vec u = low_state(s, 10, rng).coords();
    CHECK((lhs * u - rhs * u).norm() < 1e-9);
    // T|y> = |y + xi_q> e^{i xi_p (y + xi_q/2)}
    for (int i : {60, 128, 190})
        CHECK(std::abs(Dx(i + 5, i) - std::polar(1.0, xi.p * (s.g.q(i) + xi.q / 2))) < 1e-12);
    CHECK_THROWS_AS(displacement_operator(s.g, {0.3 * s.g.dx, 0}), Error);
}

TEST_CASE("parity operators") {
    const StateSystem s = oscillator();
    const Mat P0 = parity_operator(s.g, {0, 0}).m;
    CHECK(max_abs(P0 - P0.adjoint()) < 1e-12);
    CHECK(max_abs(P0 * P0 - Mat::Identity(256, 256)) < 1e-8);
    const Vec g0 = s.spec.eigenvectors.col(0), g1 = s.spec.eigenvectors.col(1);
    CHECK((P0 * g0 - g0).norm() < 1e-8);
    CHECK((P0 * g1 + g1).norm() < 1e-8);

    std::mt19937_64 rng(4);
    const StateVector psi = low_state(s, 10, rng);
    const PhaseField W = wigner_of_state(psi);
    const Vec u = psi.coords();
    for (int i : {100, 128, 141})
        for (int k : {110, 128, 150}) {
            const Mat Px = parity_operator(s.g, {s.pg.q(i), s.pg.p(k)}).m;
            CHECK(max_abs(Px * Px - Mat::Identity(256, 256)) < 1e-8);
            CHECK(std::abs(u.dot(Px * u) / kPi - W.values(i, k)) < 1e-6);
        }
}

TEST_CASE("displacement covariance of Wigner functions") {
    const StateSystem s = oscillator();
    std::mt19937_64 rng(6);
    const StateVector psi = low_state(s, 8, rng);
    const int di = 7, dk = -5;
    const PhasePoint xi{di * s.g.dx, dk * s.pg.dp};
    const StateVector moved = state_from_coords(s.g, displacement_operator(s.g, xi).m * psi.coords());
    const PhaseField W = wigner_of_state(psi), Wm = wigner_of_state(moved);
    double worst = 0;
    for (int i = 20; i < 236; ++i)
        for (int k = 20; k < 236; ++k) worst = std::max(worst, std::abs(Wm.values(i, k) - W.values(i - di, k - dk)));
    CHECK(worst < 1e-8);
}

TEST_CASE("generating function") {
    const StateSystem s = oscillator();
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 24);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    CHECK(max_abs_diff(generating_function(set, 0.0, 0.0), set.field(0, 0)) == 0.0);
    for (auto [m1, m2] : {std::pair<cplx, cplx>{0.3, 0.5}, {cplx(0.2, 0.4), -0.6}, {0.8, cplx(0.1, -0.3)}}) {
        const cplx I = generating_function(set, m1, m2).integral();
        CHECK(std::abs(I - std::exp(m1 * m2)) < 1e-8);
    }
    CHECK_THROWS_AS(generating_function(set, 30.0, 30.0), Error);
}
