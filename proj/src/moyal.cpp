#include "phasekrylov/moyal.hpp"
#include "phasekrylov/error.hpp"

#include <cmath>
#include <numbers>

namespace pk {

namespace {

constexpr double kPi = std::numbers::pi;

Mat quantize_raw(const PhaseField& f) {
    PhaseField g = f;
    g.norm = Normalization::symbol;
    return weyl_quantize(g).m;
}

} // namespace

PhaseField star(const PhaseField& A, const PhaseField& B) {
    require(A.N() == B.N() && A.grid.base.L == B.grid.base.L, "precondition", "star: grid mismatch");
    const Mat prod = quantize_raw(A) * quantize_raw(B);
    PhaseField out = weyl_transform(OperatorMatrix{A.grid.base, prod, false});
    const bool both_symbol = A.norm == Normalization::symbol && B.norm == Normalization::symbol;
    out.norm = both_symbol ? Normalization::symbol : Normalization::wigner;
    return out;
}

PhaseField moyal_bracket(const PhaseField& A, const PhaseField& B) {
    const Mat QA = quantize_raw(A), QB = quantize_raw(B);
    PhaseField out = weyl_transform(OperatorMatrix{A.grid.base, QA * QB - QB * QA, false});
    const bool both_symbol = A.norm == Normalization::symbol && B.norm == Normalization::symbol;
    out.norm = both_symbol ? Normalization::symbol : Normalization::wigner;
    return out;
}

double star_genvalue_residual(const PhaseField& H_field, const PhaseField& W_ab, double E_a, double E_b) {
    const Mat QH = quantize_raw(H_field), QW = quantize_raw(W_ab);
    const Grid1D& g = H_field.grid.base;
    const PhaseField left = weyl_transform(OperatorMatrix{g, QH * QW, false});
    const PhaseField right = weyl_transform(OperatorMatrix{g, QW * QH, false});
    const double r1 = (left.values - E_a * W_ab.values).cwiseAbs().maxCoeff();
    const double r2 = (right.values - E_b * W_ab.values).cwiseAbs().maxCoeff();
    return r1 + r2;
}

PhaseField star_lanczos_step(const PhaseField& H_field, const KrylovPhaseSet& set, int n) {
    require(n >= 0 && n < set.dim(), "precondition", "star_lanczos_step: index out of range");
    require(int(set.a.size()) == set.dim(), "precondition", "star_lanczos_step: set carries no Lanczos coefficients");
    PhaseField out = star(H_field, set.field(n, n));
    out.values -= set.a[n] * set.field(n, n).values;
    if (n > 0) out.values -= set.b[n] * set.field(n - 1, n).values;
    return out;
}

LanczosCoefficients lanczos_coeffs_from_phase(const PhaseField& H_field, const KrylovPhaseSet& set) {
    LanczosCoefficients c;
    c.b.push_back(0.0);
    for (int n = 0; n < set.dim(); ++n) {
        c.a.push_back(phase_pairing(H_field, set.field(n, n)).real());
        if (n > 0) c.b.push_back(phase_pairing(H_field, set.field(n, n - 1)).real());
    }
    return c;
}

std::pair<std::vector<double>, std::vector<double>> lanczos_a_split(const KrylovPhaseSet& set, const Potential& V) {
    const Grid1D& g = set.grid().base;
    const OperatorMatrix T = kinetic_operator(g);
    std::vector<double> kin, pot;
    for (int n = 0; n < set.dim(); ++n) {
        const Vec u = set.coords().col(n);
        // momentum density through the unitary DFT; kinetic_operator is diagonal there
        kin.push_back(u.dot(T.m * u).real());
        double v = 0.0;
        for (int i = 0; i < g.N; ++i) v += V.value(g.q(i)) * std::norm(u(i));
        pot.push_back(v);
    }
    return {kin, pot};
}

cplx star_quadrature_at(const PhaseField& A, const PhaseField& B, int i, int k) {
    const int N = A.N();
    const PhaseGrid& pg = A.grid;
    // offsets u (q) and v (p) both in [-N/2, N/2)
    Mat Ai = Mat::Zero(N, N), Bi = Mat::Zero(N, N), X(N, N), Y(N, N);
    for (int u = 0; u < N; ++u)
        for (int v = 0; v < N; ++v) {
            const int ii = i + u - N / 2, kk = k + v - N / 2;
            if (ii >= 0 && ii < N && kk >= 0 && kk < N) {
                Ai(u, v) = A.values(ii, kk);
                Bi(u, v) = B.values(ii, kk);
            }
        }
    for (int u = 0; u < N; ++u)
        for (int z = 0; z < N; ++z) {
            const double q1 = (u - N / 2) * pg.base.dx, p2 = (z - N / 2) * pg.dp;
            X(u, z) = std::polar(1.0, 2 * q1 * p2);
            Y(u, z) = std::polar(1.0, -2 * ((u - N / 2) * pg.dp) * ((z - N / 2) * pg.base.dx));
        }
    // sum_{u,v,w,z} A_uv B_wz e^{2i q_u p_z} e^{-2i p_v q_w}
    const Mat AY = Ai * Y;
    const Mat AYB = AY * Bi;
    const cplx val = AYB.cwiseProduct(X).sum();
    return val * pg.cell_area * pg.cell_area / (kPi * kPi);
}

} // namespace pk
