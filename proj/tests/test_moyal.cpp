#include "systems.hpp"

#include <doctest.h>

using namespace pk;
using namespace pk::testing;

namespace {

PhaseField oscillator_symbol(const PhaseGrid& pg) {
    return sample_field(pg, [](double q, double p) { return cplx(0.5 * p * p + 0.5 * q * q); });
}

double norm_inf(const PhaseField& f) { return f.values.cwiseAbs().maxCoeff(); }

PhaseField low_symbol(const StateSystem& s, int n, std::mt19937_64& rng) {
    const Mat V = s.spec.eigenvectors.leftCols(n);
    return weyl_transform(make_operator(s.g, V * random_hermitian(n, rng) * V.adjoint()));
}

} // namespace

TEST_CASE("star identity and canonical operands") {
    const StateSystem s = oscillator();
    std::mt19937_64 rng(1);
    const PhaseField B = low_symbol(s, 10, rng);
    const PhaseField one = sample_field(s.pg, [](double, double) { return cplx(1.0); });
    CHECK(max_abs_diff(star(one, B), B) < 1e-9 * norm_inf(B));
    CHECK(max_abs_diff(star(B, one), B) < 1e-9 * norm_inf(B));
    CHECK(star(one, B).norm == Normalization::symbol);
    PhaseField W = B;
    W.norm = Normalization::wigner;
    CHECK(star(one, W).norm == Normalization::wigner);
}

TEST_CASE("canonical commutator") {
    const StateSystem s = oscillator();
    const PhaseField q = sample_field(s.pg, [](double x, double) { return cplx(x); });
    const PhaseField p = sample_field(s.pg, [](double, double y) { return cplx(y); });
    const PhaseField c = moyal_bracket(q, p);
    std::mt19937_64 rng(2);
    for (int r = 0; r < 3; ++r) {
        Vec u = Vec::Zero(256);
        std::normal_distribution<double> gauss;
        for (int j = 0; j < 10; ++j) u(j) = cplx(gauss(rng), gauss(rng));
        const StateVector psi = from_energy_basis(s.spec, u / u.norm());
        CHECK(std::abs(phase_pairing(c, wigner_of_state(psi)) - cplx(0, 1)) < 1e-8);
    }
}

TEST_CASE("star product against the integral form at N = 32") {
    const OperatorSystem o = operator_system(harmonic_potential(1.0, 1.0));
    std::mt19937_64 rng(3);
    const Mat V = o.spec.eigenvectors.leftCols(4);
    const PhaseField A = weyl_transform(make_operator(o.g, V * random_hermitian(4, rng) * V.adjoint()));
    const PhaseField B = weyl_transform(make_operator(o.g, V * random_hermitian(4, rng) * V.adjoint()));
    const PhaseField AB = star(A, B);
    double worst = 0;
    for (int i = 8; i < 24; i += 3)
        for (int k = 8; k < 24; k += 3) worst = std::max(worst, std::abs(star_quadrature_at(A, B, i, k) - AB.values(i, k)));
    CHECK(worst < 1e-4 * norm_inf(AB));
    CHECK(max_abs_diff(AB, star(B, A)) > 1e-3 * norm_inf(AB));
}

TEST_CASE("associativity and trace cyclicity") {
    const StateSystem s = oscillator(128, 20.0);
    std::mt19937_64 rng(4);
    const PhaseField A = low_symbol(s, 12, rng), B = low_symbol(s, 12, rng), C = low_symbol(s, 12, rng);
    const PhaseField l = star(star(A, B), C), r = star(A, star(B, C));
    CHECK(max_abs_diff(l, r) < 1e-8 * norm_inf(l));
    const cplx ab = star(A, B).integral(), ba = star(B, A).integral(), pl = phase_pairing(A, B);
    CHECK(std::abs(ab - ba) < 1e-8 * std::abs(pl));
    CHECK(std::abs(ab - pl) < 1e-8 * std::abs(pl));
}

TEST_CASE("Moyal bracket") {
    const StateSystem s = oscillator();
    std::mt19937_64 rng(5);
    const PhaseField A = low_symbol(s, 10, rng), B = low_symbol(s, 10, rng);
    CHECK(norm_inf(moyal_bracket(A, A)) < 1e-10 * norm_inf(A) * norm_inf(A));
    PhaseField sum = moyal_bracket(A, B);
    sum.values += moyal_bracket(B, A).values;
    CHECK(norm_inf(sum) < 1e-10);

    // quadratic symbols: the bracket is i times the Poisson bracket
    const PhaseField q2 = sample_field(s.pg, [](double x, double) { return cplx(x * x); });
    const PhaseField p = sample_field(s.pg, [](double, double y) { return cplx(y); });
    const PhaseField qp = sample_field(s.pg, [](double x, double y) { return cplx(x * y); });
    const PhaseField c1 = moyal_bracket(q2, p);
    const PhaseField c2 = moyal_bracket(qp, q2);
    const PhaseField want1 = sample_field(s.pg, [](double x, double) { return cplx(0, 2 * x); });
    const PhaseField want2 = sample_field(s.pg, [](double x, double) { return cplx(0, -2 * x * x); });
    for (int r = 0; r < 3; ++r) {
        Vec u = Vec::Zero(256);
        std::normal_distribution<double> gauss;
        for (int j = 0; j < 10; ++j) u(j) = cplx(gauss(rng), gauss(rng));
        const PhaseField W = wigner_of_state(from_energy_basis(s.spec, u / u.norm()));
        CHECK(std::abs(phase_pairing(c1, W) - phase_pairing(want1, W)) < 1e-8);
        CHECK(std::abs(phase_pairing(c2, W) - phase_pairing(want2, W)) < 1e-8);
    }
}

TEST_CASE("star-genvalue equation") {
    const StateSystem s = oscillator();
    const PhaseField H = oscillator_symbol(s.pg);
    const double hn = norm_inf(H);
    for (int a = 0; a < 10; ++a) {
        const PhaseField Waa = wigner_of_state(eigenstate(s.spec, a));
        CHECK(star_genvalue_residual(H, Waa, s.spec.eigenvalues(a), s.spec.eigenvalues(a)) < 1e-6 * hn);
        CHECK(norm_inf(moyal_bracket(H, Waa)) < 1e-6);
    }
    PhaseField W25 = weyl_transform_outer(s.pg, s.spec.eigenvectors.col(2), s.spec.eigenvectors.col(5));
    W25.values /= 2 * kPi;
    W25.norm = Normalization::wigner;
    CHECK(star_genvalue_residual(H, W25, s.spec.eigenvalues(2), s.spec.eigenvalues(5)) < 1e-6 * hn);
    const double wrong = star_genvalue_residual(H, W25, s.spec.eigenvalues(2) + 1, s.spec.eigenvalues(5));
    CHECK(wrong > 0.5 * norm_inf(W25));
}

TEST_CASE("star Lanczos step and generalised relations") {
    const StateSystem s = oscillator();
    const PhaseField H = oscillator_symbol(s.pg);
    const double hn = norm_inf(H);
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 8);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    for (int n = 0; n < 7; ++n) {
        const PhaseField r = star_lanczos_step(H, set, n);
        CHECK(max_abs(r.values - kb.b[n + 1] * set.field(n + 1, n).values) < 1e-6 * hn);
    }
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> pick(0, 6);
    for (int r = 0; r < 6; ++r) {
        const int n = pick(rng), m = pick(rng);
        Mat left = kb.a[n] * set.field(n, m).values + kb.b[n + 1] * set.field(n + 1, m).values;
        if (n > 0) left += kb.b[n] * set.field(n - 1, m).values;
        CHECK(max_abs(star(H, set.field(n, m)).values - left) < 1e-6 * hn);
        Mat right = kb.a[m] * set.field(n, m).values + kb.b[m + 1] * set.field(n, m + 1).values;
        if (m > 0) right += kb.b[m] * set.field(n, m - 1).values;
        CHECK(max_abs(star(set.field(n, m), H).values - right) < 1e-6 * hn);
    }

    const KrylovStateBasis one = lanczos_state(s.spec, eigenstate(s.spec, 0), 4);
    CHECK(norm_inf(star_lanczos_step(H, krylov_phase_set(one), 0)) < 1e-6 * hn);
    CHECK_THROWS_AS(star_lanczos_step(H, set, 8), Error);
}

TEST_CASE("Lanczos coefficients from phase-space integrals") {
    const StateSystem s = oscillator();
    const PhaseField H = oscillator_symbol(s.pg);
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 10);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    const LanczosCoefficients c = lanczos_coeffs_from_phase(H, set);
    REQUIRE(c.a.size() == kb.a.size());
    for (int n = 0; n < kb.dim(); ++n) {
        CHECK(std::abs(c.a[n] - kb.a[n]) < 1e-6);
        CHECK(std::abs(c.b[n] - kb.b[n]) < 1e-6);
    }
    const auto [kin, pot] = lanczos_a_split(set, s.V);
    for (int n = 0; n < kb.dim(); ++n) CHECK(std::abs(kin[n] + pot[n] - kb.a[n]) < 1e-6);

    const KrylovStateBasis one = lanczos_state(s.spec, eigenstate(s.spec, 3), 4);
    const LanczosCoefficients c1 = lanczos_coeffs_from_phase(H, krylov_phase_set(one));
    CHECK(c1.a.size() == 1);
    CHECK(c1.b.size() == 1);
    CHECK(c1.a[0] == doctest::Approx(3.5).epsilon(1e-6));

    // free particle
    const StateSystem f = state_system(polynomial_potential({0.0}), 256, 20.0);
    const KrylovStateBasis kf = lanczos_state(f.spec, gaussian_state(f.g, 0.0, 0.0, 1.0), 6);
    const KrylovPhaseSet sf = krylov_phase_set(kf);
    const PhaseField Hf = sample_field(f.pg, [](double, double p) { return cplx(0.5 * p * p); });
    const LanczosCoefficients cf = lanczos_coeffs_from_phase(Hf, sf);
    const OperatorMatrix T = kinetic_operator(f.g);
    for (int n = 0; n < kf.dim(); ++n) {
        const Vec u = kf.vectors[n].coords();
        CHECK(std::abs(cf.a[n] - u.dot(T.m * u).real()) < 1e-6);
    }
}

TEST_CASE("projector algebra and spreading kernel eigenrelation") {
    const StateSystem s = oscillator(128, 20.0);
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 5);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    double worst = 0;
    for (int n = 0; n < 5; ++n)
        for (int m = 0; m < 5; ++m)
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j) {
                    Mat want = Mat::Zero(128, 128);
                    if (m == i) want = set.field(n, j).values / (2 * kPi);
                    worst = std::max(worst, max_abs(star(set.field(n, m), set.field(i, j)).values - want));
                }
    CHECK(worst < 1e-9);

    const PhaseField K = spreading_kernel(set);
    for (int n = 0; n < 5; ++n)
        for (int m = 0; m < 5; ++m)
            CHECK(max_abs(star(K, set.field(n, m)).values - double(n) * set.field(n, m).values) < 1e-6);
}

TEST_CASE("generating function star composition") {
    const StateSystem s = oscillator();
    const KrylovStateBasis kb = lanczos_state(s.spec, coherent_seed(s.g), 24);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    const cplx m1 = 0.3, m2 = cplx(0.2, -0.1), n1 = -0.25, n2 = 0.4;
    const PhaseField lhs = star(generating_function(set, m1, m2), generating_function(set, n1, n2));
    const PhaseField G = generating_function(set, n1, m2);
    const Mat rhs = std::exp(m1 * n2) * G.values / (2 * kPi);
    CHECK(max_abs(lhs.values - rhs) < 1e-8 * max_abs(rhs));
}
