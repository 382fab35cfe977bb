#include "phasekrylov/grid.hpp"
#include "phasekrylov/error.hpp"

#include <cmath>
#include <numbers>

namespace pk {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid1D make_grid(int N, double L, double mass) {
    require(is_power_of_two(N) && N >= 8, "precondition",
            "grid size N must be a power of two >= 8, got " + std::to_string(N));
    require(std::isfinite(L) && L > 0, "precondition", "box length L must be positive");
    require(std::isfinite(mass) && mass > 0, "precondition", "mass must be positive");
    Grid1D g;
    g.N = N;
    g.L = L;
    g.mass = mass;
    g.dx = L / N;
    g.q_points.resize(N);
    for (int i = 0; i < N; ++i) g.q_points[i] = -L / 2 + i * g.dx;
    return g;
}

PhaseGrid make_phase_grid(const Grid1D& g) {
    PhaseGrid pg;
    pg.base = g;
    pg.dp = std::numbers::pi / g.L;
    pg.cell_area = g.dx * pg.dp;
    pg.p_points.resize(g.N);
    for (int k = 0; k < g.N; ++k) pg.p_points[k] = (k - g.N / 2) * pg.dp;
    return pg;
}

ChordGrid make_chord_grid(const PhaseGrid& pg) {
    const int N = pg.N();
    ChordGrid c;
    c.dxi_q = 2 * pg.base.dx;
    c.dxi_p = 2 * std::numbers::pi / pg.base.L;
    c.cell_area = c.dxi_q * c.dxi_p;
    c.xi_q_points.resize(N);
    c.xi_p_points.resize(N);
    for (int j = 0; j < N; ++j) {
        c.xi_q_points[j] = (j - N / 2) * c.dxi_q;
        c.xi_p_points[j] = (j - N / 2) * c.dxi_p;
    }
    return c;
}

double symplectic_product(PhasePoint x, PhasePoint xi) { return x.q * xi.p - xi.q * x.p; }

bool same_grid(const Grid1D& a, const Grid1D& b) {
    return a.N == b.N && a.L == b.L && a.mass == b.mass;
}

double boundary_mass(const Grid1D& g, const std::vector<cplx>& psi) {
    const int edge = g.N / 16;
    double m = 0.0;
    for (int i = 0; i < edge; ++i) {
        m += std::norm(psi[i]) + std::norm(psi[g.N - 1 - i]);
    }
    return m * g.dx;
}

} // namespace pk
