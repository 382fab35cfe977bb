#include "phasekrylov/krylov.hpp"
#include "phasekrylov/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace pk {

Mat KrylovStateBasis::coords() const {
    Mat K(grid.N, dim());
    for (int n = 0; n < dim(); ++n) K.col(n) = vectors[n].coords();
    return K;
}

KrylovStateBasis lanczos_energy(const SpectralDecomposition& spec, const Vec& c, int k_max, double tol) {
    require(tol > 0, "precondition", "lanczos tolerance must be positive");
    const int N = spec.grid.N;
    require(c.size() == N, "precondition", "energy coefficient vector has the wrong length");
    require(std::abs(c.norm() - 1.0) < 1e-8, "precondition", "lanczos_state needs a normalized seed");
    require(k_max >= 1 && k_max <= N, "precondition", "k_max must lie in [1, N]");
    const double hnorm = spec.eigenvalues.cwiseAbs().maxCoeff();

    std::vector<int> support;
    for (int i = 0; i < N; ++i)
        if (c(i) != cplx(0)) support.push_back(i);
    const int S = int(support.size());
    RVec E(S);
    Mat Q = Mat::Zero(S, std::min(k_max, S));
    for (int j = 0; j < S; ++j) {
        E(j) = spec.eigenvalues(support[j]);
        Q(j, 0) = c(support[j]);
    }
    const int kk = int(Q.cols());

    KrylovStateBasis out;
    out.grid = spec.grid;
    out.b.push_back(0.0);
    int n = 0;
    for (;; ++n) {
        Vec w = E.cwiseProduct(Q.col(n));
        const double an = Q.col(n).dot(w).real();
        out.a.push_back(an);
        if (n + 1 == kk) break;
        w -= an * Q.col(n);
        if (n > 0) w -= out.b[n] * Q.col(n - 1);
        for (int pass = 0; pass < 2; ++pass) {
            const auto Qn = Q.leftCols(n + 1);
            w -= Qn * (Qn.adjoint() * w);
        }
        const double bn = w.norm();
        if (bn < tol * hnorm) break;
        out.b.push_back(bn);
        Q.col(n + 1) = w / bn;
    }
    Mat V(N, S);
    for (int j = 0; j < S; ++j) V.col(j) = spec.eigenvectors.col(support[j]);
    for (int j = 0; j <= n; ++j) out.vectors.push_back(state_from_coords(spec.grid, V * Q.col(j)));
    return out;
}

KrylovStateBasis lanczos_state(const SpectralDecomposition& spec, const StateVector& psi0, int k_max, double tol,
                               double seed_floor) {
    require(std::abs(psi0.norm2() - 1.0) < 1e-8, "precondition", "lanczos_state needs a normalized seed");
    Vec c = spec.eigenvectors.adjoint() * psi0.coords();
    const double cut = seed_floor * c.norm();
    for (Eigen::Index i = 0; i < c.size(); ++i)
        if (std::abs(c(i)) < cut) c(i) = 0;
    c /= c.norm();
    return lanczos_energy(spec, c, k_max, tol);
}

KrylovStateBasis lanczos_state(const OperatorMatrix& H, const StateVector& psi0, int k_max, double tol) {
    require(tol > 0, "precondition", "lanczos tolerance must be positive");
    require(std::abs(psi0.norm2() - 1.0) < 1e-8, "precondition", "lanczos_state needs a normalized seed");
    return lanczos_state(eigendecompose(H), psi0, k_max, tol);
}

KrylovOperatorBasis lanczos_operator(const OperatorMatrix& H, const OperatorMatrix& O0, int k_max, double tol) {
    return lanczos_operator(H, O0, k_max, tol, Mat());
}

KrylovOperatorBasis lanczos_operator(const OperatorMatrix& H, const OperatorMatrix& O0, int k_max, double tol,
                                     const Mat& sector) {
    require(tol > 0, "precondition", "lanczos tolerance must be positive");
    require(is_hermitian(O0.m), "precondition", "lanczos_operator needs a Hermitian seed");
    const double n0 = hs_norm(O0);
    require(n0 > 0, "precondition", "lanczos_operator seed has zero norm");
    const int N = H.grid.N;
    require(k_max >= 1 && k_max <= N * N, "precondition", "k_max must lie in [1, N^2]");
    const double hnorm = spectral_norm(H);
    require(sector.size() == 0 || (sector.rows() == N && sector.cols() == N), "precondition",
            "sector projector dimension mismatch");

    KrylovOperatorBasis out;
    out.grid = H.grid;
    out.ops.push_back(OperatorMatrix{O0.grid, O0.m / n0, true});
    out.b.push_back(0.0);
    for (int n = 0;; ++n) {
        const Mat& On = out.ops[n].m;
        Mat A = H.m * On - On * H.m;
        OperatorMatrix Aop{H.grid, A, false};
        out.a.push_back(hs_inner(out.ops[n], Aop).real());
        if (n + 1 == k_max) break;
        if (n > 0) A -= out.b[n] * out.ops[n - 1].m;
        if (sector.size() > 0) A = sector * A * sector;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& Oj : out.ops) {
                const cplx c = (Oj.m.conjugate().cwiseProduct(A)).sum() / double(N);
                A -= c * Oj.m;
            }
        }
        const double bn = std::sqrt((A.cwiseAbs2()).sum() / N);
        // the Liouvillian norm is at most 2 ||H||
        if (bn < tol * 2 * hnorm) break;
        out.b.push_back(bn);
        Mat On1 = A / bn;
        out.ops.push_back(OperatorMatrix{H.grid, On1, is_hermitian(On1)});
    }
    return out;
}

ChainAmplitudes amplitudes(const KrylovStateBasis& basis, const StateVector& psi_t) {
    require(same_grid(basis.grid, psi_t.grid), "precondition", "amplitudes: grid mismatch");
    ChainAmplitudes c;
    c.phi.resize(basis.dim());
    for (int n = 0; n < basis.dim(); ++n) c.phi[n] = inner(basis.vectors[n], psi_t);
    return c;
}

std::vector<cplx> operator_amplitudes(const KrylovOperatorBasis& basis, const OperatorMatrix& O_t) {
    std::vector<cplx> c(basis.dim());
    for (int n = 0; n < basis.dim(); ++n) c[n] = hs_inner(basis.ops[n], O_t);
    return c;
}

Mat tridiagonal(const std::vector<double>& a, const std::vector<double>& b) {
    const int D = int(a.size());
    Mat T = Mat::Zero(D, D);
    for (int n = 0; n < D; ++n) {
        T(n, n) = a[n];
        if (n + 1 < D) {
            T(n, n + 1) = b[n + 1];
            T(n + 1, n) = b[n + 1];
        }
    }
    return T;
}

ChainAmplitudes chain_evolve(const std::vector<double>& a, const std::vector<double>& b, double t) {
    require(a.size() == b.size(), "precondition", "chain_evolve: a and b differ in length");
    require(!b.empty() && b[0] == 0.0, "precondition", "chain_evolve: b[0] must be 0");
    const int D = int(a.size());
    ChainAmplitudes out;
    out.t = t;
    out.phi.assign(D, cplx(0));
    if (t == 0.0) {
        out.phi[0] = 1.0;
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(tridiagonal(a, b));
    const Mat& V = es.eigenvectors();
    for (int n = 0; n < D; ++n) {
        cplx s = 0;
        for (int k = 0; k < D; ++k) s += V(n, k) * std::polar(1.0, -es.eigenvalues()(k) * t) * std::conj(V(0, k));
        out.phi[n] = s;
    }
    return out;
}

std::vector<double> krylov_polynomials(const std::vector<double>& a, const std::vector<double>& b, double E) {
    const int D = int(a.size());
    std::vector<double> P(D, 0.0);
    P[0] = 1.0;
    if (D > 1) P[1] = (E - a[0]) / b[1];
    for (int n = 1; n + 1 < D; ++n) P[n + 1] = ((E - a[n]) * P[n] - b[n] * P[n - 1]) / b[n + 1];
    return P;
}

} // namespace pk
