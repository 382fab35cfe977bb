#include "phasekrylov/complexity.hpp"
#include "phasekrylov/error.hpp"
#include "phasekrylov/fft.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <random>

namespace pk {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

double complexity_direct(const ChainAmplitudes& phi) {
    double c = 0.0;
    for (size_t n = 0; n < phi.phi.size(); ++n) c += double(n) * std::norm(phi.phi[n]);
    return c;
}

double complexity_phase(const PhaseField& W_t, const PhaseField& K_field) {
    require(W_t.norm == Normalization::wigner, "precondition", "complexity_phase needs a wigner field");
    require(K_field.norm == Normalization::symbol, "precondition", "complexity_phase needs the spreading kernel symbol");
    require(W_t.N() == K_field.N() && W_t.grid.base.L == K_field.grid.base.L, "precondition",
            "complexity_phase: grid mismatch");
    return phase_pairing(W_t, K_field).real();
}

std::vector<double> krylov_probabilities_phase(const KrylovPhaseSet& set, const PhaseField& W_t) {
    std::vector<double> p(set.dim());
    for (int n = 0; n < set.dim(); ++n) p[n] = 2 * kPi * phase_pairing(set.field(n, n), W_t).real();
    return p;
}

double generalized_complexity(const ChainAmplitudes& phi, int k) {
    require(k >= 1, "precondition", "generalized complexity needs k >= 1 (k = 0 is the total probability)");
    double c = 0.0;
    for (size_t n = 0; n < phi.phi.size(); ++n) c += std::pow(double(n), k) * std::norm(phi.phi[n]);
    return c;
}

SpreadingDistribution spreading_distribution(const ChainAmplitudes& phi) {
    SpreadingDistribution d;
    for (size_t n = 0; n < phi.phi.size(); ++n) {
        d.support.push_back(int(n));
        d.probabilities.push_back(std::norm(phi.phi[n]));
    }
    return d;
}

double long_time_average(const KrylovStateBasis& basis, const SpectralDecomposition& spec, const StateVector& psi0) {
    const Vec c0 = spec.eigenvectors.adjoint() * psi0.coords();
    const Mat ck = spec.eigenvectors.adjoint() * basis.coords();
    const double scale = std::max(spec.eigenvalues.cwiseAbs().maxCoeff(), 1.0);
    std::vector<int> support;
    for (int a = 0; a < c0.size(); ++a)
        if (std::norm(c0(a)) > 1e-12) support.push_back(a);
    for (size_t i = 1; i < support.size(); ++i) {
        const double gap = spec.eigenvalues(support[i]) - spec.eigenvalues(support[i - 1]);
        require(gap > 1e-9 * scale, "degenerate", "spectrum is degenerate on the support of the seed state");
    }
    double c = 0.0;
    for (int a : support)
        for (int n = 1; n < basis.dim(); ++n) c += n * std::norm(c0(a)) * std::norm(ck(a, n));
    return c;
}

double windowed_average(const KrylovStateBasis& basis, const SpectralDecomposition& spec, const StateVector& psi0,
                        double T, int n_samples) {
    double s = 0.0;
    for (int j = 0; j < n_samples; ++j) {
        const double t = T * (j + 0.5) / n_samples;
        s += complexity_direct(amplitudes(basis, evolve_state(spec, psi0, t)));
    }
    return s / n_samples;
}

PhaseField basis_kernel(const std::vector<StateVector>& basis_vectors) {
    require(!basis_vectors.empty(), "precondition", "empty basis");
    const Grid1D& g = basis_vectors[0].grid;
    const int D = int(basis_vectors.size());
    Mat B(g.N, D);
    for (int n = 0; n < D; ++n) B.col(n) = basis_vectors[n].coords();
    const double err = (B.adjoint() * B - Mat::Identity(D, D)).cwiseAbs().maxCoeff();
    require(err <= 1e-8, "precondition", "cost_in_basis needs an orthonormal basis");
    Mat K = Mat::Zero(g.N, g.N);
    for (int n = 1; n < D; ++n) K += double(n) * B.col(n) * B.col(n).adjoint();
    return weyl_transform(OperatorMatrix{g, K, true});
}

double cost_in_basis(const std::vector<StateVector>& basis_vectors, const PhaseField& W_t) {
    return complexity_phase(W_t, basis_kernel(basis_vectors));
}

namespace {

// real part of the field on a grid refined by `up` through zero padding in the Fourier domain, row-major
std::vector<double> refine(const Mat& values, int up) {
    const int N = int(values.rows()), M = N * up;
    std::vector<cplx> f(size_t(N) * N), g(size_t(M) * M, cplx(0));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) f[size_t(i) * N + k] = values(i, k).real();
    fft::dft2(f.data(), N, N, -1);
    // signed targets of a source frequency: the Nyquist bin is split evenly between -N/2 and +N/2
    auto targets = [&](int a) {
        return a == -N / 2 ? std::vector<int>{-N / 2, N / 2} : std::vector<int>{a};
    };
    for (int a = -N / 2; a < N / 2; ++a)
        for (int b = -N / 2; b < N / 2; ++b) {
            const auto ta = targets(a), tb = targets(b);
            const cplx v = f[size_t(fft::bin(a, N)) * N + fft::bin(b, N)] / double(ta.size() * tb.size());
            for (int sa : ta)
                for (int sb : tb) g[size_t(fft::bin(sa, M)) * M + fft::bin(sb, M)] += v;
        }
    fft::dft2(g.data(), M, M, +1);
    std::vector<double> out(g.size());
    const double scale = 1.0 / (double(N) * N);
    for (size_t j = 0; j < g.size(); ++j) out[j] = g[j].real() * scale;
    return out;
}

double keys(double t) {
    t = std::abs(t);
    if (t < 1) return (1.5 * t - 2.5) * t * t + 1;
    if (t < 2) return ((-0.5 * t + 2.5) * t - 4) * t + 2;
    return 0.0;
}

} // namespace

double harmonics_complexity(const PhaseField& W_t, double omega) {
    require(omega > 0, "precondition", "harmonics complexity needs the oscillator frequency");
    require(W_t.norm == Normalization::wigner, "precondition", "harmonics complexity needs a wigner field");
    const PhaseGrid& pg = W_t.grid;
    const int N = pg.N();
    const double m = pg.base.mass;
    constexpr int n_theta = 256, n_shells = 4096, up = 4;
    const double q_lim = 0.875 * pg.base.L / 2;
    const double p_lim = 0.875 * pg.dp * (N / 2);
    const double I_max = std::min(m * omega * q_lim * q_lim / 2, p_lim * p_lim / (2 * m * omega));

    const int M = N * up;
    const std::vector<double> fine = refine(W_t.values, up);
    const double hq = pg.base.dx / up, hp = pg.dp / up;
    auto interp = [&](double q, double p) {
        const double fi = (q - pg.q(0)) / hq, fk = (p - pg.p(0)) / hp;
        const int i0 = int(std::floor(fi)), k0 = int(std::floor(fk));
        if (i0 < 1 || k0 < 1 || i0 + 2 >= M || k0 + 2 >= M) return 0.0;
        double v = 0.0;
        for (int a = -1; a <= 2; ++a) {
            const double wa = keys(fi - (i0 + a));
            const double* row = &fine[size_t(i0 + a) * M];
            for (int b = -1; b <= 2; ++b) v += wa * keys(fk - (k0 + b)) * row[k0 + b];
        }
        return v;
    };

    std::vector<double> n2w(n_shells), w(n_shells);
    std::vector<cplx> ring(n_theta);
    for (int j = 0; j < n_shells; ++j) {
        const double I = I_max * j / (n_shells - 1);
        const double rq = std::sqrt(2 * I / (m * omega)), rp = std::sqrt(2 * I * m * omega);
        for (int l = 0; l < n_theta; ++l) {
            const double th = 2 * kPi * l / n_theta;
            ring[l] = interp(rq * std::cos(th), -rp * std::sin(th));
        }
        fft::dft(ring.data(), n_theta, -1);
        double s2 = 0.0, s0 = 0.0;
        for (int b = 0; b < n_theta; ++b) {
            const int n = b < n_theta / 2 ? b : b - n_theta;
            // W_n = (1/2) integral W e^{-in theta} d theta
            const double a2 = std::norm(0.5 * ring[b] * (2 * kPi / n_theta));
            s2 += double(n) * n * a2;
            s0 += a2;
        }
        n2w[j] = s2;
        w[j] = s0;
    }
    double num = 0.0, den = 0.0;
    const double dI = I_max / (n_shells - 1);
    for (int j = 0; j < n_shells; ++j) {
        const double c = (j == 0 || j == n_shells - 1) ? 0.5 : 1.0;
        num += c * n2w[j] * dI;
        den += c * w[j] * dI;
    }
    require(den > 0, "precondition", "harmonics complexity of a vanishing field");
    return std::sqrt(num / den);
}

double harmonics_complexity(const PhaseField& W_t, const Potential& V) {
    require(V.name == "harmonic" && V.omega > 0, "no_action_angle",
            "harmonics complexity has an action-angle map only for the harmonic oscillator");
    return harmonics_complexity(W_t, V.omega);
}

MinimizationProbe minimization_probe(const KrylovStateBasis& basis, const SpectralDecomposition& spec,
                                     const StateVector& psi0, int n_bases, std::uint64_t seed, double t_max,
                                     int n_times) {
    const int D = basis.dim();
    require(D >= 2, "precondition", "minimization probe needs D_K >= 2");
    const Mat K = basis.coords();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Mat> bases;
    for (int r = 0; r < n_bases; ++r) {
        Mat G(D - 1, D - 1);
        for (int i = 0; i < D - 1; ++i)
            for (int j = 0; j < D - 1; ++j) G(i, j) = cplx(gauss(rng), gauss(rng));
        Eigen::HouseholderQR<Mat> qr(G);
        Mat U = qr.householderQ();
        const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < D - 1; ++j) {
            const cplx d = R(j, j);
            U.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1);
        }
        Mat B(K.rows(), D);
        B.col(0) = K.col(0);
        B.rightCols(D - 1) = K.rightCols(D - 1) * U;
        bases.push_back(B);
    }

    MinimizationProbe out;
    out.n_bases = n_bases;
    bool open = true;
    for (int j = 0; j < n_times; ++j) {
        const double t = t_max * j / (n_times - 1);
        const Vec u = evolve_state(spec, psi0, t).coords();
        auto cost = [&](const Mat& B) {
            const Vec c = B.adjoint() * u;
            double s = 0.0;
            for (int n = 1; n < D; ++n) s += n * std::norm(c(n));
            return s;
        };
        const double ck = cost(K);
        double margin = std::numeric_limits<double>::infinity();
        for (const Mat& B : bases) margin = std::min(margin, cost(B) - ck);
        out.times.push_back(t);
        out.krylov_cost.push_back(ck);
        out.min_margin.push_back(margin);
        if (open && margin >= -1e-8) {
            out.window_end = t;
            if (j > 0) ++out.window_samples;
        } else {
            open = false;
        }
    }
    return out;
}

} // namespace pk
