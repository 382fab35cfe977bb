#pragma once

#include "phasekrylov/grid.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace pk {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// amp holds psi(q_i); the orthonormal-basis coordinates are sqrt(dx) * psi
struct StateVector {
    Grid1D grid;
    Vec amp;

    double norm2() const { return amp.squaredNorm() * grid.dx; }
    Vec coords() const { return amp * std::sqrt(grid.dx); }
    std::vector<cplx> samples() const { return {amp.data(), amp.data() + amp.size()}; }
};

StateVector state_from_coords(const Grid1D& g, const Vec& u);
cplx inner(const StateVector& a, const StateVector& b);
StateVector normalized(StateVector s);

// entries in the orthonormal position basis
struct OperatorMatrix {
    Grid1D grid;
    Mat m;
    bool hermitian = false;
};

OperatorMatrix make_operator(const Grid1D& g, Mat m);
bool is_hermitian(const Mat& m, double rel_tol = 1e-10);

struct SpectralDecomposition {
    Grid1D grid;
    RVec eigenvalues;   // ascending
    Mat eigenvectors;   // columns, orthonormal coordinates
};

struct Potential {
    std::string name;
    std::vector<double> coeffs;            // c_0 + c_1 q + c_2 q^2 + ... when polynomial
    std::function<double(double)> custom;  // used when coeffs is empty
    double omega = 0.0;                    // oscillator frequency when one is registered

    bool is_polynomial() const { return !coeffs.empty(); }
    double value(double q) const;
    double derivative(int order, double q) const;  // polynomial only
};

Potential harmonic_potential(double mass, double omega);
Potential quartic_potential(double mass, double omega, double g);
Potential polynomial_potential(std::vector<double> coeffs);
Potential custom_potential(std::string name, std::function<double(double)> fn);

// d^order V / dq^order on the grid: analytic for polynomials, spectral otherwise
std::vector<double> potential_derivative_samples(const Grid1D& g, const Potential& V, int order);

OperatorMatrix build_hamiltonian(const Grid1D& g, const Potential& V);
OperatorMatrix kinetic_operator(const Grid1D& g);
OperatorMatrix position_operator(const Grid1D& g);
OperatorMatrix momentum_operator(const Grid1D& g);
OperatorMatrix identity_operator(const Grid1D& g);

// projector on FFT modes j in [-N/4, N/4): the momenta resolved by the PhaseGrid
Mat band_projector(int N);
OperatorMatrix band_identity(const Grid1D& g);
// P H P + lambda_out (I - P), lambda_out = 2 max|eig H|
OperatorMatrix band_limit(const OperatorMatrix& H);
// P_S O P_S with S the span of the lowest M eigenvectors
OperatorMatrix compress(const OperatorMatrix& O, const SpectralDecomposition& spec, int M);

SpectralDecomposition eigendecompose(const OperatorMatrix& H);
StateVector evolve_state(const SpectralDecomposition& spec, const StateVector& psi0, double t);
OperatorMatrix evolve_operator(const SpectralDecomposition& spec, const OperatorMatrix& O0, double t);
Mat propagator(const SpectralDecomposition& spec, double t);

cplx hs_inner(const OperatorMatrix& A, const OperatorMatrix& B);
double hs_norm(const OperatorMatrix& A);
double spectral_norm(const OperatorMatrix& A);

StateVector gaussian_state(const Grid1D& g, double q0, double p0, double width);
StateVector eigenstate(const SpectralDecomposition& spec, int n);
StateVector from_energy_basis(const SpectralDecomposition& spec, const Vec& c);
// Poisson amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!) on the levels of an oscillator spectrum, each
// level phased to match the analytic Hermite function
Vec coherent_coefficients(const SpectralDecomposition& spec, cplx alpha, double mass, double omega);
OperatorMatrix density_matrix(const StateVector& psi);

// throws Error("boundary_mass") when mass near the box edge exceeds the limit
void check_boundary(const StateVector& psi, const char* what);

} // namespace pk
