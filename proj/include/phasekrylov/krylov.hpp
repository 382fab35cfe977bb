#pragma once

#include "phasekrylov/quantum.hpp"

#include <vector>

namespace pk {

struct KrylovStateBasis {
    Grid1D grid;
    std::vector<StateVector> vectors;
    std::vector<double> a;
    std::vector<double> b;  // b[0] = 0

    int dim() const { return int(vectors.size()); }
    Mat coords() const;  // N x D_K, orthonormal coordinates as columns
};

struct KrylovOperatorBasis {
    Grid1D grid;
    std::vector<OperatorMatrix> ops;
    std::vector<double> a;  // diagnostic only, vanishes for Hermitian O0 and H
    std::vector<double> b;  // b[0] = 0

    int dim() const { return int(ops.size()); }
};

struct ChainAmplitudes {
    std::vector<cplx> phi;
    double t = 0.0;
};

inline constexpr double kLanczosTol = 1e-10;

// energy-basis seed components below kSeedFloor * |c| are rounding noise and are dropped
inline constexpr double kSeedFloor = 1e-12;

// runs in the eigenbasis of H: grid-basis Lanczos amplifies rounding noise by (|H| / b)^n
KrylovStateBasis lanczos_state(const OperatorMatrix& H, const StateVector& psi0, int k_max,
                               double tol = kLanczosTol);
KrylovStateBasis lanczos_state(const SpectralDecomposition& spec, const StateVector& psi0, int k_max,
                               double tol = kLanczosTol, double seed_floor = kSeedFloor);
// seed given by its energy-basis coefficients, used as is
KrylovStateBasis lanczos_energy(const SpectralDecomposition& spec, const Vec& c, int k_max,
                                double tol = kLanczosTol);
KrylovOperatorBasis lanczos_operator(const OperatorMatrix& H, const OperatorMatrix& O0, int k_max,
                                     double tol = kLanczosTol);
// every residual is projected to S X S, S a projector commuting with H (e.g. a compressed eigenspace)
KrylovOperatorBasis lanczos_operator(const OperatorMatrix& H, const OperatorMatrix& O0, int k_max, double tol,
                                     const Mat& sector);

ChainAmplitudes amplitudes(const KrylovStateBasis& basis, const StateVector& psi_t);
// <<O_n|O(t)>>
std::vector<cplx> operator_amplitudes(const KrylovOperatorBasis& basis, const OperatorMatrix& O_t);

// i d/dt phi_n = a_n phi_n + b_{n+1} phi_{n+1} + b_n phi_{n-1}, phi_n(0) = delta_n0
ChainAmplitudes chain_evolve(const std::vector<double>& a, const std::vector<double>& b, double t);

// Krylov polynomials P_n(E) by the three-term recursion, n < a.size()
std::vector<double> krylov_polynomials(const std::vector<double>& a, const std::vector<double>& b,
                                       double E);

Mat tridiagonal(const std::vector<double>& a, const std::vector<double>& b);

} // namespace pk
