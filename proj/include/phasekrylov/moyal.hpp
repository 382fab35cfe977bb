#pragma once

#include "phasekrylov/wigner.hpp"

#include <utility>
#include <vector>

namespace pk {

// T(Q(A) Q(B)) on the stored values; symbol if both operands are symbols, wigner otherwise
PhaseField star(const PhaseField& A, const PhaseField& B);
PhaseField moyal_bracket(const PhaseField& A, const PhaseField& B);

// max|H*W - Ea W| + max|W*H - Eb W|
double star_genvalue_residual(const PhaseField& H_field, const PhaseField& W_ab, double E_a, double E_b);

// H*W_nn - a_n W_nn - b_n W_(n-1)n, expected to equal b_(n+1) W_(n+1)n
PhaseField star_lanczos_step(const PhaseField& H_field, const KrylovPhaseSet& set, int n);

struct LanczosCoefficients {
    std::vector<double> a;
    std::vector<double> b;
};

LanczosCoefficients lanczos_coeffs_from_phase(const PhaseField& H_field, const KrylovPhaseSet& set);

// a_n split into <p^2/2m> from the momentum density and <V> from the position density
std::pair<std::vector<double>, std::vector<double>> lanczos_a_split(const KrylovPhaseSet& set,
                                                                     const Potential& V);

// (1/pi^2) sum A(x+x1) B(x+x2) e^{2i<x1,x2>} cell^2 with zero extension outside the box
cplx star_quadrature_at(const PhaseField& A, const PhaseField& B, int i, int k);

} // namespace pk
