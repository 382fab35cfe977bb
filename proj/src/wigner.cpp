#include "phasekrylov/wigner.hpp"
#include "phasekrylov/error.hpp"
#include "phasekrylov/fft.hpp"

#include <cmath>
#include <numbers>

namespace pk {

namespace {

constexpr double kPi = std::numbers::pi;

bool near_integer(double x, double tol = 1e-9) { return std::abs(x - std::round(x)) < tol; }

} // namespace

const char* to_string(Normalization n) { return n == Normalization::symbol ? "symbol" : "wigner"; }

cplx PhaseField::integral() const { return values.sum() * grid.cell_area; }

double PhaseField::max_abs_imag() const { return values.imag().cwiseAbs().maxCoeff(); }

PhaseField zero_field(const PhaseGrid& pg, Normalization n) {
    return PhaseField{pg, Mat::Zero(pg.N(), pg.N()), n};
}

cplx phase_pairing(const PhaseField& A, const PhaseField& B) {
    require(A.N() == B.N(), "precondition", "phase_pairing: grid mismatch");
    return A.values.cwiseProduct(B.values).sum() * A.grid.cell_area;
}

double max_abs_diff(const PhaseField& A, const PhaseField& B) {
    return (A.values - B.values).cwiseAbs().maxCoeff();
}

PhaseField weyl_transform(const OperatorMatrix& O) {
    const PhaseGrid pg = make_phase_grid(O.grid);
    const int N = pg.N();
    PhaseField out = zero_field(pg, Normalization::symbol);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i) {
        std::vector<cplx> g(N, cplx(0));
        const int m = std::min(i, N - 1 - i);
        for (int s = -m; s <= m; ++s) g[fft::bin(s, N)] = O.m(i - s, i + s);
        fft::dft(g.data(), N, +1);
        for (int k = -N / 2; k < N / 2; ++k) out.values(i, k + N / 2) = 2.0 * g[fft::bin(k, N)];
    }
    return out;
}

PhaseField weyl_transform_outer(const PhaseGrid& pg, const Vec& u, const Vec& v) {
    const int N = pg.N();
    PhaseField out = zero_field(pg, Normalization::symbol);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i) {
        std::vector<cplx> g(N, cplx(0));
        const int m = std::min(i, N - 1 - i);
        for (int s = -m; s <= m; ++s) g[fft::bin(s, N)] = u(i - s) * std::conj(v(i + s));
        fft::dft(g.data(), N, +1);
        for (int k = -N / 2; k < N / 2; ++k) out.values(i, k + N / 2) = 2.0 * g[fft::bin(k, N)];
    }
    return out;
}

OperatorMatrix weyl_quantize(const PhaseField& field) {
    const int N = field.N();
    const double scale = field.norm == Normalization::wigner ? 2 * kPi : 1.0;
    Mat E = Mat::Zero(N, N);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < N; ++c) {
        std::vector<cplx> h(N);
        for (int k = -N / 2; k < N / 2; ++k) h[fft::bin(k, N)] = field.values(c, k + N / 2);
        fft::dft(h.data(), N, -1);
        const int m = std::min(c, N - 1 - c);
        for (int s = -m; s <= m; ++s) E(c - s, c + s) = scale * h[fft::bin(s, N)] / (2.0 * N);
    }
    const Mat P = band_projector(N);
    return make_operator(field.grid.base, 2.0 * P * E * P);
}

PhaseField wigner_of_state(const StateVector& psi) {
    require(std::abs(psi.norm2() - 1.0) < 1e-8, "precondition", "wigner_of_state needs a normalized state");
    check_boundary(psi, "wigner_of_state");
    const PhaseGrid pg = make_phase_grid(psi.grid);
    const Vec u = psi.coords();
    PhaseField W = weyl_transform_outer(pg, u, u);
    W.values /= 2 * kPi;
    W.norm = Normalization::wigner;
    return W;
}

std::vector<cplx> momentum_wavefunction(const StateVector& psi, const PhaseGrid& pg) {
    const int N = pg.N();
    std::vector<cplx> out(N);
    for (int k = 0; k < N; ++k) {
        cplx s = 0;
        for (int i = 0; i < N; ++i) s += psi.amp(i) * std::polar(1.0, -pg.p(k) * pg.q(i));
        out[k] = s * psi.grid.dx / std::sqrt(2 * kPi);
    }
    return out;
}

KrylovPhaseSet::KrylovPhaseSet(const PhaseGrid& pg, Mat coords)
    : grid_(pg), coords_(std::move(coords)), cache_(std::make_shared<Cache>()) {
    cache_->slots.resize(size_t(dim()) * dim());
}

const PhaseField& KrylovPhaseSet::field(int n, int m) const {
    require(n >= 0 && m >= 0 && n < dim() && m < dim(), "precondition", "Krylov index out of range");
    auto& slot = cache_->slots[size_t(n) * dim() + m];
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (slot) return *slot;
    }
    PhaseField W = weyl_transform_outer(grid_, coords_.col(n), coords_.col(m));
    W.values /= 2 * kPi;
    W.norm = Normalization::wigner;
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (!slot) slot = std::make_unique<PhaseField>(std::move(W));
    return *slot;
}

KrylovPhaseSet krylov_phase_set(const KrylovStateBasis& basis) {
    for (const auto& v : basis.vectors) check_boundary(v, "krylov_phase_set");
    KrylovPhaseSet set(make_phase_grid(basis.grid), basis.coords());
    set.a = basis.a;
    set.b = basis.b;
    return set;
}

KrylovPhaseSet phase_set_from_vectors(const Grid1D& g, const std::vector<StateVector>& vectors) {
    Mat C(g.N, int(vectors.size()));
    for (size_t n = 0; n < vectors.size(); ++n) C.col(Eigen::Index(n)) = vectors[n].coords();
    return KrylovPhaseSet(make_phase_grid(g), C);
}

PhaseField spreading_kernel(const KrylovPhaseSet& set) {
    const Mat& C = set.coords();
    // weyl transform is linear: one transform of K = sum n |K_n><K_n|
    Mat K = Mat::Zero(C.rows(), C.rows());
    for (int n = 1; n < set.dim(); ++n) K += double(n) * C.col(n) * C.col(n).adjoint();
    return weyl_transform(OperatorMatrix{set.grid().base, K, true});
}

ChordField characteristic_function(const PhaseField& field) {
    const PhaseGrid& pg = field.grid;
    const ChordGrid cg = make_chord_grid(pg);
    const int N = pg.N();
    Mat B(N, N), A(N, N);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) B(j, k) = std::polar(1.0, cg.xi_q_points[j] * pg.p(k));
    for (int i = 0; i < N; ++i)
        for (int l = 0; l < N; ++l) A(i, l) = std::polar(1.0, -pg.q(i) * cg.xi_p_points[l]);
    ChordField out{cg, pg, pg.cell_area * B * field.values.transpose() * A};
    return out;
}

PhaseField inverse_characteristic(const ChordField& chi, Normalization n) {
    const PhaseGrid& pg = chi.phase;
    const ChordGrid& cg = chi.grid;
    const int N = pg.N();
    Mat A(N, N), B(N, N);
    for (int i = 0; i < N; ++i)
        for (int l = 0; l < N; ++l) A(i, l) = std::polar(1.0, pg.q(i) * cg.xi_p_points[l]);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) B(j, k) = std::polar(1.0, -cg.xi_q_points[j] * pg.p(k));
    PhaseField out = zero_field(pg, n);
    out.values = cg.cell_area / (4 * kPi * kPi) * (A * chi.values.transpose() * B);
    return out;
}

OperatorMatrix displacement_operator(const Grid1D& g, PhasePoint xi) {
    const double shift = xi.q / g.dx;
    require(near_integer(shift), "off_grid", "displacement xi_q must be a multiple of the grid step");
    const int m = int(std::lround(shift));
    const int N = g.N;
    Mat D = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        const int src = ((i - m) % N + N) % N;
        D(i, src) = std::polar(1.0, xi.p * (g.q(i) - xi.q / 2));
    }
    return OperatorMatrix{g, D, false};
}

OperatorMatrix parity_operator(const Grid1D& g, PhasePoint x) {
    const double twoc = 2 * (x.q + g.L / 2) / g.dx;
    require(near_integer(twoc), "off_grid", "parity point q must lie on the grid or half-grid");
    require(near_integer(x.p * g.L / kPi), "off_grid", "parity point p must be a multiple of pi/L");
    const int c2 = int(std::lround(twoc));
    const int N = g.N;
    Mat R = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        const int src = ((c2 - i) % N + N) % N;
        R(i, src) = std::polar(1.0, 2 * x.p * (g.q(i) - x.q));
    }
    return OperatorMatrix{g, R, true};
}

PhaseField generating_function(const KrylovPhaseSet& set, cplx mu1, cplx mu2) {
    const int D = set.dim();
    auto ipow = [](cplx z, int n) {
        cplx r = 1.0;
        for (int j = 0; j < n; ++j) r *= z;
        return r;
    };
    std::vector<double> sqf(D, 1.0);
    for (int n = 1; n < D; ++n) sqf[n] = sqf[n - 1] * std::sqrt(double(n));
    // weight of the last row and column of the truncated double sum
    double tail = 0.0;
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n)
            if (std::max(m, n) == D - 1) tail += std::abs(ipow(mu1, m) * ipow(mu2, n)) / (sqf[m] * sqf[n]);
    if (D == 1) tail = (mu1 == 0.0 && mu2 == 0.0) ? 0.0 : 1.0;
    require(tail < 1e-10, "truncation",
            "generating function tail " + std::to_string(tail) + " exceeds 1e-10");
    PhaseField G = zero_field(set.grid(), Normalization::wigner);
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
            const cplx c = ipow(mu1, m) * ipow(mu2, n) / (sqf[m] * sqf[n]);
            if (std::abs(c) == 0.0) continue;
            G.values += c * set.field(n, m).values;
        }
    return G;
}

} // namespace pk
