#pragma once

#include <complex>
#include <vector>

namespace pk {

using cplx = std::complex<double>;

struct Grid1D {
    int N = 0;
    double L = 0.0;
    double mass = 1.0;
    double dx = 0.0;
    std::vector<double> q_points;

    double q(int i) const { return q_points[i]; }
};

Grid1D make_grid(int N, double L, double mass);

// p_k = pi k / L for k = -N/2 .. N/2-1, stored at index k + N/2
struct PhaseGrid {
    Grid1D base;
    std::vector<double> p_points;
    double dp = 0.0;
    double cell_area = 0.0;

    int N() const { return base.N; }
    double q(int i) const { return base.q_points[i]; }
    double p(int k) const { return p_points[k]; }
};

PhaseGrid make_phase_grid(const Grid1D& g);

// spacing (2 dx, 2 pi / L): the exact DFT dual of the PhaseGrid
struct ChordGrid {
    std::vector<double> xi_q_points;
    std::vector<double> xi_p_points;
    double dxi_q = 0.0;
    double dxi_p = 0.0;
    double cell_area = 0.0;
};

ChordGrid make_chord_grid(const PhaseGrid& pg);

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

// <x, xi>_s = q xi_p - xi_q p
double symplectic_product(PhasePoint x, PhasePoint xi);

bool same_grid(const Grid1D& a, const Grid1D& b);

// sum of dx |psi|^2 over the outer N/16 points on each side
double boundary_mass(const Grid1D& g, const std::vector<cplx>& psi);
inline constexpr double kBoundaryMassLimit = 1e-8;

bool is_power_of_two(int n);

} // namespace pk
