#include "phasekrylov/quantum.hpp"
#include "phasekrylov/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace pk {

namespace {

// unitary DFT matrix, rows indexed by signed frequency j + N/2
Mat dft_matrix(int N) {
    Mat F(N, N);
    const double s = 1.0 / std::sqrt(double(N));
    for (int r = 0; r < N; ++r) {
        const int j = r - N / 2;
        for (int a = 0; a < N; ++a) {
            F(r, a) = std::polar(s, -2.0 * std::numbers::pi * j * a / N);
        }
    }
    return F;
}

Mat fourier_multiplier(int N, const std::function<double(int)>& f) {
    Mat F = dft_matrix(N);
    RVec d(N);
    for (int r = 0; r < N; ++r) d(r) = f(r - N / 2);
    return F.adjoint() * d.asDiagonal() * F;
}

} // namespace

StateVector state_from_coords(const Grid1D& g, const Vec& u) {
    return StateVector{g, u / std::sqrt(g.dx)};
}

cplx inner(const StateVector& a, const StateVector& b) {
    return a.amp.dot(b.amp) * a.grid.dx;
}

StateVector normalized(StateVector s) {
    const double n = std::sqrt(s.norm2());
    require(n > 0, "precondition", "cannot normalize a zero state");
    s.amp /= n;
    return s;
}

bool is_hermitian(const Mat& m, double rel_tol) {
    const double scale = std::max(m.norm(), 1e-300);
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

OperatorMatrix make_operator(const Grid1D& g, Mat m) {
    require(m.rows() == g.N && m.cols() == g.N, "precondition", "operator size does not match grid");
    const bool h = is_hermitian(m);
    return OperatorMatrix{g, std::move(m), h};
}

double Potential::value(double q) const {
    if (!is_polynomial()) return custom(q);
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * q + *it;
    return v;
}

double Potential::derivative(int order, double q) const {
    require(is_polynomial(), "precondition", "analytic derivatives need a polynomial potential");
    double w = 0.0, qp = 1.0;
    for (int k = order; k < int(coeffs.size()); ++k) {
        double f = 1.0;
        for (int j = 0; j < order; ++j) f *= (k - j);
        w += coeffs[k] * f * qp;
        qp *= q;
    }
    return w;
}

Potential harmonic_potential(double mass, double omega) {
    Potential p;
    p.name = "harmonic";
    p.coeffs = {0.0, 0.0, 0.5 * mass * omega * omega};
    p.omega = omega;
    return p;
}

Potential quartic_potential(double mass, double omega, double g) {
    Potential p;
    p.name = "quartic";
    p.coeffs = {0.0, 0.0, 0.5 * mass * omega * omega, 0.0, g};
    return p;
}

Potential polynomial_potential(std::vector<double> coeffs) {
    require(!coeffs.empty(), "precondition", "polynomial potential needs coefficients");
    Potential p;
    p.name = "polynomial";
    p.coeffs = std::move(coeffs);
    return p;
}

Potential custom_potential(std::string name, std::function<double(double)> fn) {
    Potential p;
    p.name = std::move(name);
    p.custom = std::move(fn);
    return p;
}

std::vector<double> potential_derivative_samples(const Grid1D& g, const Potential& V, int order) {
    std::vector<double> out(g.N);
    if (V.is_polynomial()) {
        for (int i = 0; i < g.N; ++i) out[i] = V.derivative(order, g.q(i));
        return out;
    }
    const double dk = 2 * std::numbers::pi / g.L;
    Vec v(g.N);
    for (int i = 0; i < g.N; ++i) v(i) = V.value(g.q(i));
    Mat F = dft_matrix(g.N);
    Vec vf = F * v;
    for (int r = 0; r < g.N; ++r) {
        const int j = r - g.N / 2;
        vf(r) *= (j == -g.N / 2) ? cplx(0) : std::pow(cplx(0, j * dk), order);
    }
    Vec d = F.adjoint() * vf;
    for (int i = 0; i < g.N; ++i) out[i] = d(i).real();
    return out;
}

OperatorMatrix kinetic_operator(const Grid1D& g) {
    const double dk = 2 * std::numbers::pi / g.L;
    Mat T = fourier_multiplier(g.N, [&](int j) { return (j * dk) * (j * dk) / (2 * g.mass); });
    return OperatorMatrix{g, 0.5 * (T + T.adjoint()), true};
}

OperatorMatrix position_operator(const Grid1D& g) {
    Mat Q = Mat::Zero(g.N, g.N);
    for (int i = 0; i < g.N; ++i) Q(i, i) = g.q(i);
    return OperatorMatrix{g, Q, true};
}

OperatorMatrix momentum_operator(const Grid1D& g) {
    const double dk = 2 * std::numbers::pi / g.L;
    Mat P = fourier_multiplier(g.N, [&](int j) { return j * dk; });
    return OperatorMatrix{g, 0.5 * (P + P.adjoint()), true};
}

OperatorMatrix identity_operator(const Grid1D& g) {
    return OperatorMatrix{g, Mat::Identity(g.N, g.N), true};
}

OperatorMatrix build_hamiltonian(const Grid1D& g, const Potential& V) {
    OperatorMatrix H = kinetic_operator(g);
    for (int i = 0; i < g.N; ++i) {
        const double v = V.value(g.q(i));
        require(std::isfinite(v), "precondition",
                "potential is not finite at q = " + std::to_string(g.q(i)));
        H.m(i, i) += v;
    }
    return H;
}

Mat band_projector(int N) {
    Mat P = fourier_multiplier(N, [&](int j) { return (j >= -N / 4 && j < N / 4) ? 1.0 : 0.0; });
    return 0.5 * (P + P.adjoint());
}

OperatorMatrix band_identity(const Grid1D& g) { return OperatorMatrix{g, band_projector(g.N), true}; }

OperatorMatrix band_limit(const OperatorMatrix& H) {
    require(H.hermitian, "precondition", "band_limit needs a Hermitian operator");
    const int N = H.grid.N;
    const Mat P = band_projector(N);
    const double lam = 2.0 * spectral_norm(H);
    Mat Hb = P * H.m * P + lam * (Mat::Identity(N, N) - P);
    return OperatorMatrix{H.grid, 0.5 * (Hb + Hb.adjoint()), true};
}

OperatorMatrix compress(const OperatorMatrix& O, const SpectralDecomposition& spec, int M) {
    require(M >= 1 && M <= spec.eigenvectors.cols(), "precondition", "compress: M out of range");
    const Mat V = spec.eigenvectors.leftCols(M);
    const Mat PS = V * V.adjoint();
    Mat C = PS * O.m * PS;
    if (O.hermitian) C = 0.5 * (C + C.adjoint());
    return OperatorMatrix{O.grid, C, O.hermitian};
}

SpectralDecomposition eigendecompose(const OperatorMatrix& H) {
    require(is_hermitian(H.m), "precondition", "eigendecompose needs a Hermitian operator");
    Eigen::SelfAdjointEigenSolver<Mat> es(H.m);
    require(es.info() == Eigen::Success, "numerics", "eigensolver failed");
    return SpectralDecomposition{H.grid, es.eigenvalues(), es.eigenvectors()};
}

Mat propagator(const SpectralDecomposition& spec, double t) {
    const int N = spec.grid.N;
    Vec ph(N);
    for (int a = 0; a < N; ++a) ph(a) = std::polar(1.0, -spec.eigenvalues(a) * t);
    return spec.eigenvectors * ph.asDiagonal() * spec.eigenvectors.adjoint();
}

StateVector evolve_state(const SpectralDecomposition& spec, const StateVector& psi0, double t) {
    if (t == 0.0) return psi0;
    Vec c = spec.eigenvectors.adjoint() * psi0.amp;
    for (int a = 0; a < c.size(); ++a) c(a) *= std::polar(1.0, -spec.eigenvalues(a) * t);
    return StateVector{psi0.grid, spec.eigenvectors * c};
}

OperatorMatrix evolve_operator(const SpectralDecomposition& spec, const OperatorMatrix& O0, double t) {
    require(same_grid(spec.grid, O0.grid), "precondition", "evolve_operator: grid mismatch");
    const Mat& V = spec.eigenvectors;
    Mat Oe = V.adjoint() * O0.m * V;
    for (int a = 0; a < Oe.rows(); ++a)
        for (int b = 0; b < Oe.cols(); ++b)
            Oe(a, b) *= std::polar(1.0, (spec.eigenvalues(a) - spec.eigenvalues(b)) * t);
    Mat Ot = V * Oe * V.adjoint();
    if (O0.hermitian) Ot = 0.5 * (Ot + Ot.adjoint());
    return OperatorMatrix{O0.grid, Ot, O0.hermitian};
}

cplx hs_inner(const OperatorMatrix& A, const OperatorMatrix& B) {
    require(A.m.rows() == B.m.rows() && A.m.cols() == B.m.cols(), "precondition",
            "hs_inner: dimension mismatch");
    return (A.m.conjugate().cwiseProduct(B.m)).sum() / double(A.m.rows());
}

double hs_norm(const OperatorMatrix& A) { return std::sqrt(hs_inner(A, A).real()); }

double spectral_norm(const OperatorMatrix& A) {
    if (is_hermitian(A.m)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(A.m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::BDCSVD<Mat> svd(A.m);
    return svd.singularValues()(0);
}

StateVector gaussian_state(const Grid1D& g, double q0, double p0, double width) {
    require(width > 0, "precondition", "gaussian width must be positive");
    StateVector s{g, Vec(g.N)};
    for (int i = 0; i < g.N; ++i) {
        const double d = g.q(i) - q0;
        s.amp(i) = std::exp(cplx(-d * d / (2 * width * width), p0 * g.q(i)));
    }
    return normalized(s);
}

StateVector eigenstate(const SpectralDecomposition& spec, int n) {
    require(n >= 0 && n < spec.eigenvectors.cols(), "precondition", "eigenstate index out of range");
    return state_from_coords(spec.grid, spec.eigenvectors.col(n));
}

StateVector from_energy_basis(const SpectralDecomposition& spec, const Vec& c) {
    require(c.size() == spec.eigenvectors.cols(), "precondition", "energy coefficient vector has the wrong length");
    return state_from_coords(spec.grid, spec.eigenvectors * c);
}

Vec coherent_coefficients(const SpectralDecomposition& spec, cplx alpha, double mass, double omega) {
    require(mass > 0 && omega > 0, "precondition", "coherent state needs positive mass and frequency");
    const Grid1D& g = spec.grid;
    const int N = g.N;
    const double s = std::sqrt(mass * omega);
    const double lam = std::norm(alpha);
    Vec c = Vec::Zero(N);
    // Hermite functions in orthonormal coordinates
    RVec h_prev = RVec::Zero(N), h(N);
    for (int i = 0; i < N; ++i) {
        const double x = s * g.q(i);
        h(i) = std::pow(s * s / std::numbers::pi, 0.25) * std::exp(-0.5 * x * x) * std::sqrt(g.dx);
    }
    for (int n = 0; n < N; ++n) {
        const double mag = std::exp(-0.5 * lam + 0.5 * n * std::log(std::max(lam, 1e-300)) -
                                    0.5 * std::lgamma(n + 1.0));
        if (n > 0 && (lam == 0.0 || mag < 1e-300)) break;
        const cplx ov = spec.eigenvectors.col(n).dot(h.cast<cplx>());
        if (mag > 1e-16)
            require(std::abs(ov) > 0.5, "unresolved",
                    "oscillator level " + std::to_string(n) + " is not resolved on this grid");
        c(n) = (lam == 0.0 ? cplx(1.0) : std::polar(mag, n * std::arg(alpha))) * (std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0));
        RVec hn(N);
        for (int i = 0; i < N; ++i)
            hn(i) = std::sqrt(2.0 / (n + 1)) * s * g.q(i) * h(i) - std::sqrt(double(n) / (n + 1)) * h_prev(i);
        h_prev = h;
        h = hn;
    }
    return c / c.norm();
}

OperatorMatrix density_matrix(const StateVector& psi) {
    Vec u = psi.coords();
    return OperatorMatrix{psi.grid, u * u.adjoint(), true};
}

void check_boundary(const StateVector& psi, const char* what) {
    const double m = boundary_mass(psi.grid, psi.samples()) / std::max(psi.norm2(), 1e-300);
    if (m > kBoundaryMassLimit) {
        throw Error("boundary_mass", std::string(what) + ": mass near the box edge is " +
                                         std::to_string(m) + " (limit 1e-8)");
    }
}

} // namespace pk
