#include "phasekrylov/superphase.hpp"
#include "phasekrylov/error.hpp"
#include "phasekrylov/fft.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace pk {

namespace {

constexpr double kPi = std::numbers::pi;

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void guard_double(int N) {
    require(N <= kDoubleFieldMaxN, "memory_guard", "double phase-space fields are limited to N <= 64");
}

void guard_superop(int N) {
    require(N <= kSuperopMaxN, "memory_guard", "superoperator matrices are limited to N <= 32");
}

void same_double(const DoublePhaseField& A, const DoublePhaseField& B) {
    require(A.N() == B.N() && A.grid.base.L == B.grid.base.L, "precondition", "double field grid mismatch");
}

Mat power(const Mat& M, int k) {
    Mat out = Mat::Identity(M.rows(), M.cols());
    for (int j = 0; j < k; ++j) out = out * M;
    return out;
}

double binomial(int n, int k) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    return c;
}

} // namespace

cplx DoublePhaseField::integral() const {
    cplx s = 0;
    for (const cplx& v : values) s += v;
    return s * measure();
}

double DoublePhaseField::max_abs_imag() const {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
}

DoublePhaseField zero_double_field(const PhaseGrid& pg) {
    guard_double(pg.N());
    const size_t n = size_t(pg.N());
    return DoublePhaseField{pg, std::vector<cplx>(n * n * n * n, cplx(0)), ChordParity::general};
}

cplx double_pairing(const DoublePhaseField& A, const DoublePhaseField& B) {
    same_double(A, B);
    cplx s = 0;
    for (size_t j = 0; j < A.values.size(); ++j) s += A.values[j] * B.values[j];
    return s * A.measure();
}

cplx double_overlap(const DoublePhaseField& A, const DoublePhaseField& B) {
    same_double(A, B);
    cplx s = 0;
    for (size_t j = 0; j < A.values.size(); ++j) s += A.values[j] * std::conj(B.values[j]);
    return s * A.measure();
}

double max_abs_diff(const DoublePhaseField& A, const DoublePhaseField& B) {
    same_double(A, B);
    double m = 0.0;
    for (size_t j = 0; j < A.values.size(); ++j) m = std::max(m, std::abs(A.values[j] - B.values[j]));
    return m;
}

double parity_defect(const DoublePhaseField& F) {
    if (F.parity == ChordParity::general) return 0.0;
    const double sign = F.parity == ChordParity::minus ? 1.0 : -1.0;
    const int N = F.N();
    double m = 0.0;
    for (int ip = 0; ip < N; ++ip)
        for (int kp = 0; kp < N; ++kp)
            for (int im = 0; im < N; ++im)
                for (int km = 0; km < N; ++km)
                    m = std::max(m, std::abs(F.at(ip, kp, im, km) + sign * F.at(im, km, ip, kp)));
    return m;
}

cplx pair_separable(const DoublePhaseField& F, const PhaseField& f, const PhaseField& g) {
    const int N = F.N();
    require(f.N() == N && g.N() == N, "precondition", "pair_separable: grid mismatch");
    cplx s = 0;
    for (int ip = 0; ip < N; ++ip)
        for (int kp = 0; kp < N; ++kp) {
            cplx inner = 0;
            for (int im = 0; im < N; ++im)
                for (int km = 0; km < N; ++km) inner += F.at(ip, kp, im, km) * g.values(im, km);
            s += f.values(ip, kp) * inner;
        }
    return s * F.measure();
}

PhaseField unit_symbol(const PhaseGrid& pg) {
    PhaseField f = zero_field(pg, Normalization::symbol);
    f.values.setOnes();
    return f;
}

DoublePhaseField dwf_pair(const OperatorMatrix& A, const OperatorMatrix& B) {
    require(same_grid(A.grid, B.grid), "precondition", "dwf_pair: grid mismatch");
    const PhaseGrid pg = make_phase_grid(A.grid);
    const int N = pg.N();
    DoublePhaseField out = zero_double_field(pg);
    const double scale = 1.0 / (kPi * kPi * N);
#pragma omp parallel for schedule(static)
    for (int ip = 0; ip < N; ++ip) {
        std::vector<cplx> buf(size_t(N) * N);
        const int ms = std::min(ip, N - 1 - ip);
        for (int im = 0; im < N; ++im) {
            std::fill(buf.begin(), buf.end(), cplx(0));
            const int mt = std::min(im, N - 1 - im);
            for (int s = -ms; s <= ms; ++s)
                for (int t = -mt; t <= mt; ++t)
                    buf[size_t(fft::bin(s, N)) * N + fft::bin(t, N)] =
                        A.m(ip - s, im + t) * std::conj(B.m(ip + s, im - t));
            fft::dft2(buf.data(), N, N, +1);
            for (int kp = -N / 2; kp < N / 2; ++kp)
                for (int km = -N / 2; km < N / 2; ++km)
                    out.at(ip, kp + N / 2, im, km + N / 2) =
                        scale * buf[size_t(fft::bin(kp, N)) * N + fft::bin(km, N)];
        }
    }
    return out;
}

DoublePhaseField dwt_product(const PhaseField& f, const PhaseField& g) {
    require(f.N() == g.N(), "precondition", "dwt_product: grid mismatch");
    DoublePhaseField out = zero_double_field(f.grid);
    const int N = f.N();
    for (int ip = 0; ip < N; ++ip)
        for (int kp = 0; kp < N; ++kp)
            for (int im = 0; im < N; ++im)
                for (int km = 0; km < N; ++km) out.at(ip, kp, im, km) = f.values(ip, kp) * g.values(im, km);
    return out;
}

DoublePhaseField dwt_minus(const PhaseField& A_field) {
    DoublePhaseField out = zero_double_field(A_field.grid);
    const int N = A_field.N();
    const Mat& a = A_field.values;
    for (int ip = 0; ip < N; ++ip)
        for (int kp = 0; kp < N; ++kp)
            for (int im = 0; im < N; ++im)
                for (int km = 0; km < N; ++km) out.at(ip, kp, im, km) = a(ip, kp) - a(im, km);
    out.parity = ChordParity::minus;
    return out;
}

DoublePhaseField dwt_plus(const PhaseField& A_field) {
    DoublePhaseField out = zero_double_field(A_field.grid);
    const int N = A_field.N();
    const Mat& a = A_field.values;
    for (int ip = 0; ip < N; ++ip)
        for (int kp = 0; kp < N; ++kp)
            for (int im = 0; im < N; ++im)
                for (int km = 0; km < N; ++km) out.at(ip, kp, im, km) = 0.5 * (a(ip, kp) + a(im, km));
    out.parity = ChordParity::plus;
    return out;
}

Superoperator superop_lr(const OperatorMatrix& L, const OperatorMatrix& R) {
    require(same_grid(L.grid, R.grid), "precondition", "superop_lr: grid mismatch");
    const int N = L.grid.N;
    guard_superop(N);
    Mat m(N * N, N * N);
    for (int a = 0; a < N; ++a)
        for (int d = 0; d < N; ++d)
            for (int b = 0; b < N; ++b)
                for (int c = 0; c < N; ++c) m(a * N + d, b * N + c) = L.m(a, b) * R.m(c, d);
    return Superoperator{L.grid, std::move(m)};
}

Superoperator superop_ket_bra(const OperatorMatrix& A, const OperatorMatrix& B) {
    require(same_grid(A.grid, B.grid), "precondition", "superop_ket_bra: grid mismatch");
    const int N = A.grid.N;
    guard_superop(N);
    Vec va(N * N), vb(N * N);
    for (int a = 0; a < N; ++a)
        for (int d = 0; d < N; ++d) {
            va(a * N + d) = A.m(a, d);
            vb(a * N + d) = B.m(a, d);
        }
    return Superoperator{A.grid, va * vb.adjoint() / double(N)};
}

Superoperator superop_identity(const Grid1D& g) {
    guard_superop(g.N);
    return Superoperator{g, Mat::Identity(g.N * g.N, g.N * g.N)};
}

Superoperator superop_minus(const OperatorMatrix& A) {
    const OperatorMatrix I = identity_operator(A.grid);
    Superoperator s = superop_lr(A, I);
    s.m -= superop_lr(I, A).m;
    return s;
}

Superoperator superop_plus(const OperatorMatrix& A) {
    const OperatorMatrix I = identity_operator(A.grid);
    Superoperator s = superop_lr(A, I);
    s.m = 0.5 * (s.m + superop_lr(I, A).m);
    return s;
}

Superoperator compose(const Superoperator& S1, const Superoperator& S2) {
    require(same_grid(S1.grid, S2.grid), "precondition", "compose: grid mismatch");
    return Superoperator{S1.grid, S1.m * S2.m};
}

OperatorMatrix apply(const Superoperator& S, const OperatorMatrix& X) {
    const int N = S.N();
    Vec v(N * N);
    for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c) v(b * N + c) = X.m(b, c);
    const Vec w = S.m * v;
    Mat out(N, N);
    for (int a = 0; a < N; ++a)
        for (int d = 0; d < N; ++d) out(a, d) = w(a * N + d);
    return make_operator(S.grid, out);
}

DoublePhaseField dwt_of_superop(const Superoperator& S) {
    const int N = S.N();
    guard_superop(N);
    DoublePhaseField out = zero_double_field(make_phase_grid(S.grid));
#pragma omp parallel for schedule(static)
    for (int ip = 0; ip < N; ++ip) {
        std::vector<cplx> buf(size_t(N) * N);
        const int ms = std::min(ip, N - 1 - ip);
        for (int im = 0; im < N; ++im) {
            std::fill(buf.begin(), buf.end(), cplx(0));
            const int mt = std::min(im, N - 1 - im);
            for (int s = -ms; s <= ms; ++s)
                for (int t = -mt; t <= mt; ++t) {
                    // S_{ab;cd} with a = ip - s, b = ip + s, c = im - t, d = im + t
                    buf[size_t(fft::bin(s, N)) * N + fft::bin(t, N)] =
                        S.m((ip - s) * N + (im + t), (ip + s) * N + (im - t));
                }
            fft::dft2(buf.data(), N, N, +1);
            for (int kp = -N / 2; kp < N / 2; ++kp)
                for (int km = -N / 2; km < N / 2; ++km)
                    out.at(ip, kp + N / 2, im, km + N / 2) = 4.0 * buf[size_t(fft::bin(kp, N)) * N + fft::bin(km, N)];
        }
    }
    return out;
}

Superoperator quantize_superop(const DoublePhaseField& F) {
    const int N = F.N();
    guard_superop(N);
    Mat E = Mat::Zero(N * N, N * N);
#pragma omp parallel for schedule(static)
    for (int ip = 0; ip < N; ++ip) {
        std::vector<cplx> buf(size_t(N) * N);
        const int ms = std::min(ip, N - 1 - ip);
        for (int im = 0; im < N; ++im) {
            for (int kp = -N / 2; kp < N / 2; ++kp)
                for (int km = -N / 2; km < N / 2; ++km)
                    buf[size_t(fft::bin(kp, N)) * N + fft::bin(km, N)] = F.at(ip, kp + N / 2, im, km + N / 2);
            fft::dft2(buf.data(), N, N, -1);
            const int mt = std::min(im, N - 1 - im);
            for (int s = -ms; s <= ms; ++s)
                for (int t = -mt; t <= mt; ++t)
                    E((ip - s) * N + (im + t), (ip + s) * N + (im - t)) =
                        buf[size_t(fft::bin(s, N)) * N + fft::bin(t, N)] / (4.0 * N * N);
        }
    }
    // 2P on each of the four indices
    const Mat P = band_projector(N);
    const Mat Pt = P.transpose();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < N * N; ++j) {
        Eigen::Map<RowMat> Y(E.col(j).data(), N, N);
        const Mat Yp = P * Y * P;
        Y = Yp;
    }
    Mat Et = E.transpose();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < N * N; ++j) {
        Eigen::Map<RowMat> Z(Et.col(j).data(), N, N);
        const Mat Zp = Pt * Z * Pt;
        Z = Zp;
    }
    return Superoperator{F.grid.base, 4.0 * Et.transpose()};
}

DoublePhaseField canonical(const DoublePhaseField& F) {
    DoublePhaseField out = dwt_of_superop(quantize_superop(F));
    out.parity = F.parity;
    return out;
}

DoublePhaseField dwt_star(const DoublePhaseField& A, const DoublePhaseField& B) {
    same_double(A, B);
    return dwt_of_superop(compose(quantize_superop(A), quantize_superop(B)));
}

OperatorMatrix parity_superop_apply(PhasePoint x, PhasePoint xi, const OperatorMatrix& O) {
    const PhasePoint xp{x.q + xi.q / 2, x.p + xi.p / 2};
    const PhasePoint xm{x.q - xi.q / 2, x.p - xi.p / 2};
    const OperatorMatrix Pp = parity_operator(O.grid, xp);
    const OperatorMatrix Pm = parity_operator(O.grid, xm);
    return make_operator(O.grid, Pp.m * O.m * Pm.m);
}

cplx dwt_point_via_parity(const Superoperator& S, PhasePoint x_plus, PhasePoint x_minus) {
    const int N = S.N();
    const Mat Pp = parity_operator(S.grid, x_plus).m;
    const Mat Pm = parity_operator(S.grid, x_minus).m;
    // sum_{a,b,c,d} Pp_ba Pm_dc S_{ab;cd}
    cplx s = 0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (Pp(b, a) == cplx(0)) continue;
            for (int c = 0; c < N; ++c)
                for (int d = 0; d < N; ++d) {
                    if (Pm(d, c) == cplx(0)) continue;
                    s += Pp(b, a) * Pm(d, c) * S.m(a * N + d, b * N + c);
                }
        }
    return 4.0 * s;
}

OperatorKrylovPhaseSet::OperatorKrylovPhaseSet(KrylovOperatorBasis basis)
    : basis_(std::move(basis)), grid_(make_phase_grid(basis_.grid)), cache_(std::make_shared<Cache>()) {
    guard_double(grid_.N());
    cache_->slots.resize(size_t(dim()) * dim());
}

const DoublePhaseField& OperatorKrylovPhaseSet::field(int n, int m) const {
    require(n >= 0 && m >= 0 && n < dim() && m < dim(), "precondition", "Krylov index out of range");
    auto& slot = cache_->slots[size_t(n) * dim() + m];
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (slot) return *slot;
    }
    DoublePhaseField W = dwf_pair(basis_.ops[n], basis_.ops[m]);
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (!slot) slot = std::make_unique<DoublePhaseField>(std::move(W));
    return *slot;
}

void OperatorKrylovPhaseSet::release() const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    for (auto& s : cache_->slots) s.reset();
}

DoublePhaseField operator_spreading_kernel(const OperatorKrylovPhaseSet& set) {
    DoublePhaseField K = zero_double_field(set.grid());
    for (int n = 1; n < set.dim(); ++n) {
        const DoublePhaseField W = dwf_pair(set.basis().ops[n], set.basis().ops[n]);
        const double w = 4 * kPi * kPi * n;
        for (size_t j = 0; j < K.values.size(); ++j) K.values[j] += w * W.values[j];
    }
    return K;
}

double operator_complexity_phase(const DoublePhaseField& kernel, const OperatorMatrix& O_t) {
    require(std::abs(hs_norm(O_t) - 1.0) < 1e-8, "precondition", "operator complexity needs an HS-normalized operator");
    return double_pairing(dwf_pair(O_t, O_t), kernel).real();
}

double operator_complexity_phase(const OperatorKrylovPhaseSet& set, const OperatorMatrix& O_t) {
    require(same_grid(set.basis().grid, O_t.grid), "precondition", "basis/grid mismatch");
    return operator_complexity_phase(operator_spreading_kernel(set), O_t);
}

double operator_complexity_direct(const KrylovOperatorBasis& basis, const OperatorMatrix& O_t) {
    double c = 0.0;
    for (int n = 1; n < basis.dim(); ++n) c += n * std::norm(hs_inner(basis.ops[n], O_t));
    return c;
}

double operator_complexity_reduced(const KrylovOperatorBasis& basis, const OperatorMatrix& O_t) {
    require(same_grid(basis.grid, O_t.grid), "precondition", "basis/grid mismatch");
    const PhaseField Ot = weyl_transform(O_t);
    const double D = basis.grid.N;
    double c = 0.0;
    for (int n = 1; n < basis.dim(); ++n) {
        const PhaseField On = weyl_transform(basis.ops[n]);
        const cplx ov = On.values.conjugate().cwiseProduct(Ot.values).sum() * Ot.grid.cell_area / (2 * kPi * D);
        c += n * std::norm(ov);
    }
    return c;
}

double otoc_direct(const OperatorMatrix& V, const OperatorMatrix& O_t) {
    require(is_hermitian(V.m, 1e-10), "precondition", "otoc needs a Hermitian V");
    const OperatorMatrix C = make_operator(V.grid, V.m * O_t.m - O_t.m * V.m);
    return hs_inner(C, C).real();
}

double otoc_phase(const OperatorMatrix& V, const OperatorMatrix& O_t) {
    require(is_hermitian(V.m, 1e-10), "precondition", "otoc needs a Hermitian V");
    const DoublePhaseField W = dwf_pair(O_t, O_t);
    const PhaseField v = weyl_transform(V);
    const PhaseField vv = weyl_transform(make_operator(V.grid, V.m * V.m));
    const PhaseField one = unit_symbol(W.grid);
    const cplx r = pair_separable(W, vv, one) + pair_separable(W, one, vv) - 2.0 * pair_separable(W, v, v);
    return r.real();
}

void check_density_matrix(const OperatorMatrix& rho) {
    require(is_hermitian(rho.m, 1e-10), "precondition", "density matrix must be Hermitian");
    require(std::abs(rho.m.trace() - 1.0) < 1e-8, "precondition", "density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.m, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() > -1e-10, "precondition", "density matrix has a negative eigenvalue");
}

std::vector<double> fidelity_moments(const OperatorMatrix& rho_T, const OperatorMatrix& M, int n_max) {
    check_density_matrix(rho_T);
    require(is_hermitian(M.m, 1e-10), "precondition", "fidelity moments need a Hermitian M");
    require(n_max >= 0, "precondition", "n_max must be non-negative");
    const double D = rho_T.grid.N;
    std::vector<double> F;
    Mat X = rho_T.m;
    for (int n = 0; n <= n_max; ++n) {
        F.push_back((rho_T.m.adjoint() * X).trace().real() / D);
        X = M.m * X - X * M.m;
    }
    return F;
}

double fidelity_moment_phase(const DoublePhaseField& W_rho, const OperatorMatrix& M, int n) {
    const PhaseGrid& pg = W_rho.grid;
    std::vector<PhaseField> sym;
    for (int k = 0; k <= n; ++k)
        sym.push_back(k == 0 ? unit_symbol(pg) : weyl_transform(make_operator(M.grid, power(M.m, k))));
    cplx s = 0;
    for (int k = 0; k <= n; ++k) {
        const double sign = (n - k) % 2 == 0 ? 1.0 : -1.0;
        s += sign * binomial(n, k) * pair_separable(W_rho, sym[k], sym[n - k]);
    }
    return s.real();
}

double fidelity_direct(const OperatorMatrix& rho_T, const OperatorMatrix& M, double theta) {
    check_density_matrix(rho_T);
    Eigen::SelfAdjointEigenSolver<Mat> es(M.m);
    const Mat U = es.eigenvectors() *
                  (es.eigenvalues().cast<cplx>() * cplx(0, -theta)).array().exp().matrix().asDiagonal() *
                  es.eigenvectors().adjoint();
    const Mat& r = rho_T.m;
    return (U * r * U.adjoint() * r).trace().real() / (r * r).trace().real();
}

double fidelity_resummed(const std::vector<double>& moments, double purity, int D, double theta) {
    cplx s = 0;
    double fact = 1.0;
    for (size_t n = 0; n < moments.size(); ++n) {
        if (n > 0) fact *= double(n);
        s += std::pow(cplx(0, -theta), double(n)) / fact * moments[n];
    }
    return (double(D) / purity * s).real();
}

double fidelity_remainder_bound(const OperatorMatrix& rho_T, const OperatorMatrix& M, double theta, int order) {
    Eigen::SelfAdjointEigenSolver<Mat> es(M.m);
    const Mat& r = rho_T.m;
    const double purity = (r * r).trace().real();
    double fmax = 0.0;
    for (int j = 0; j <= 32; ++j) {
        const double th = theta * j / 32.0;
        const Mat U = es.eigenvectors() *
                      (es.eigenvalues().cast<cplx>() * cplx(0, -th)).array().exp().matrix().asDiagonal() *
                      es.eigenvectors().adjoint();
        Mat X = U * r * U.adjoint();
        for (int n = 0; n < order; ++n) X = M.m * X - X * M.m;
        fmax = std::max(fmax, std::abs((r * X).trace()) / purity);
    }
    double fact = 1.0;
    for (int n = 2; n <= order; ++n) fact *= n;
    return std::pow(std::abs(theta), order) * fmax / fact;
}

} // namespace pk
