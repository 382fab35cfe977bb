#include "phasekrylov/dynamics.hpp"
#include "phasekrylov/error.hpp"
#include "phasekrylov/fft.hpp"

#include <cmath>
#include <numbers>

namespace pk {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double f = 1.0;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

} // namespace

PhaseField LiouvilleSplit::total() const {
    PhaseField t = classical;
    for (const auto& [lam, f] : quantum_terms) t.values += f.values;
    return t;
}

double RateSplit::total() const {
    double s = rate_classical;
    for (const auto& [lam, r] : rate_quantum) s += r;
    return s;
}

PhaseField d_dq(const PhaseField& W) {
    const int N = W.N();
    const double dk = 2 * kPi / W.grid.base.L;
    PhaseField out = W;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k) {
        std::vector<cplx> col(N);
        for (int i = 0; i < N; ++i) col[i] = W.values(i, k);
        fft::dft(col.data(), N, -1);
        for (int j = 0; j < N; ++j) {
            const int f = j < N / 2 ? j : j - N;
            col[j] *= (f == -N / 2) ? cplx(0) : cplx(0, f * dk) / double(N);
        }
        fft::dft(col.data(), N, +1);
        for (int i = 0; i < N; ++i) out.values(i, k) = col[i];
    }
    return out;
}

PhaseField d_dp(const PhaseField& W, int lambda) {
    const int N = W.N();
    const double dx = W.grid.base.dx;
    PhaseField out = W;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i) {
        std::vector<cplx> h(N);
        for (int k = -N / 2; k < N / 2; ++k) h[fft::bin(k, N)] = W.values(i, k + N / 2);
        // kernel g(s) = (1/N) sum_k W(k) w^{-ks}
        fft::dft(h.data(), N, -1);
        for (int j = 0; j < N; ++j) {
            const int s = j < N / 2 ? j : j - N;
            h[j] *= (s == -N / 2) ? cplx(0) : std::pow(cplx(0, 2.0 * s * dx), lambda) / double(N);
        }
        fft::dft(h.data(), N, +1);
        for (int k = -N / 2; k < N / 2; ++k) out.values(i, k + N / 2) = h[fft::bin(k, N)];
    }
    return out;
}

PhaseField moyal_rhs(const PhaseField& W, const PhaseField& H_field) {
    require(W.norm == Normalization::wigner, "precondition", "moyal_rhs needs a wigner-normalized field");
    require(H_field.norm == Normalization::symbol, "precondition", "moyal_rhs needs a Hamiltonian symbol");
    PhaseField out = moyal_bracket(H_field, W);
    out.values *= cplx(0, -1);
    out.norm = Normalization::wigner;
    return out;
}

LiouvilleSplit liouville_split(const PhaseField& W, const Potential& V, int lambda_max) {
    require(lambda_max >= 1 && lambda_max % 2 == 1, "precondition", "lambda_max must be a positive odd integer");
    require(lambda_max <= kLambdaCap, "precondition", "lambda_max exceeds the configured cap of 9");
    const PhaseGrid& pg = W.grid;
    const int N = pg.N();
    const double m = pg.base.mass;

    LiouvilleSplit out;
    out.lambda_max = lambda_max;
    const PhaseField Wq = d_dq(W);
    const PhaseField Wp = d_dp(W, 1);
    const auto V1 = potential_derivative_samples(pg.base, V, 1);
    out.classical = zero_field(pg, W.norm);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k)
            out.classical.values(i, k) = -(pg.p(k) / m) * Wq.values(i, k) + V1[i] * Wp.values(i, k);

    for (int lam = 3; lam <= lambda_max; lam += 2) {
        const auto Vl = potential_derivative_samples(pg.base, V, lam);
        const cplx coef = std::pow(cplx(0, 2), 1 - lam) / factorial(lam);
        bool zero = true;
        for (double v : Vl) zero = zero && v == 0.0;
        if (zero) continue;
        const PhaseField Wl = d_dp(W, lam);
        PhaseField term = zero_field(pg, W.norm);
        for (int i = 0; i < N; ++i) term.values.row(i) = coef * Vl[i] * Wl.values.row(i);
        out.quantum_terms.emplace(lam, std::move(term));
    }
    return out;
}

RateSplit complexity_rate_split(const PhaseField& K_field, const LiouvilleSplit& split) {
    require(K_field.N() == split.classical.N(), "precondition", "complexity_rate_split: grid mismatch");
    RateSplit r;
    r.rate_classical = phase_pairing(K_field, split.classical).real();
    for (const auto& [lam, f] : split.quantum_terms) r.rate_quantum[lam] = phase_pairing(K_field, f).real();
    return r;
}

MnmMatrix mnm_matrix(const ChainAmplitudes& phi, const std::vector<double>& a, const std::vector<double>& b) {
    const int D = int(phi.phi.size());
    require(int(a.size()) == D && int(b.size()) == D, "precondition", "mnm_matrix: dimension mismatch");
    std::vector<cplx> Tphi(D);
    for (int m = 0; m < D; ++m) {
        cplx s = a[m] * phi.phi[m];
        if (m + 1 < D) s += b[m + 1] * phi.phi[m + 1];
        if (m > 0) s += b[m] * phi.phi[m - 1];
        Tphi[m] = s;
    }
    MnmMatrix M{Mat(D, D)};
    for (int n = 0; n < D; ++n)
        for (int m = 0; m < D; ++m) M.entries(n, m) = phi.phi[n] * std::conj(Tphi[m]);
    return M;
}

PhaseField wigner_rhs_krylov(const KrylovPhaseSet& set, const ChainAmplitudes& phi,
                             const std::vector<double>& a, const std::vector<double>& b) {
    require(int(phi.phi.size()) == set.dim(), "precondition", "wigner_rhs_krylov: dimension mismatch");
    const MnmMatrix M = mnm_matrix(phi, a, b);
    PhaseField out = zero_field(set.grid(), Normalization::wigner);
    for (int n = 0; n < set.dim(); ++n)
        for (int m = 0; m < set.dim(); ++m) {
            const cplx c = cplx(0, 1) * (M.entries(n, m) - std::conj(M.entries(m, n)));
            if (std::abs(c) < 1e-300) continue;
            out.values += c * set.field(n, m).values;
        }
    return out;
}

PhaseField wigner_second_derivative_t0(const KrylovPhaseSet& set) {
    require(set.dim() >= 2 && set.b.size() >= 2 && set.a.size() >= 2, "precondition",
            "second derivative needs at least two Krylov vectors with coefficients");
    const double a0 = set.a[0], a1 = set.a[1], b1 = set.b[1];
    PhaseField out = zero_field(set.grid(), Normalization::wigner);
    out.values = -2 * b1 * b1 * (set.field(0, 0).values - set.field(1, 1).values) -
                 b1 * (a1 - a0) * (set.field(1, 0).values + set.field(0, 1).values);
    if (set.dim() >= 3) {
        const double b2 = set.b[2];
        out.values -= b1 * b2 * (set.field(2, 0).values + set.field(0, 2).values);
    }
    return out;
}

} // namespace pk
