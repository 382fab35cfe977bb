#pragma once

#include "phasekrylov/krylov.hpp"
#include "phasekrylov/wigner.hpp"

#include <cstdint>
#include <vector>

namespace pk {

enum class TraceKind { krylov_direct, krylov_phase, generalized_k, harmonics, cost_generic_basis };

struct ComplexityTrace {
    std::vector<double> times;
    std::vector<double> values;
    TraceKind kind = TraceKind::krylov_direct;
};

struct SpreadingDistribution {
    std::vector<int> support;
    std::vector<double> probabilities;
};

double complexity_direct(const ChainAmplitudes& phi);
// C = integral of W K, W wigner-normalized, K the spreading kernel (symbol)
double complexity_phase(const PhaseField& W_t, const PhaseField& K_field);
// p_n = 2 pi integral W^K_nn W
std::vector<double> krylov_probabilities_phase(const KrylovPhaseSet& set, const PhaseField& W_t);

double generalized_complexity(const ChainAmplitudes& phi, int k);
SpreadingDistribution spreading_distribution(const ChainAmplitudes& phi);

// sum_{a,n} n |<E_a|psi0>|^2 |<E_a|K_n>|^2
double long_time_average(const KrylovStateBasis& basis, const SpectralDecomposition& spec,
                         const StateVector& psi0);
// windowed average of the direct complexity over [0, T] with n_samples points
double windowed_average(const KrylovStateBasis& basis, const SpectralDecomposition& spec,
                        const StateVector& psi0, double T, int n_samples);

// 2 pi sum_n n integral W^B_nn W_t over an orthonormal basis B
double cost_in_basis(const std::vector<StateVector>& basis_vectors, const PhaseField& W_t);
// the kernel 2 pi sum_n n W^B_nn; cost_in_basis is its pairing with W_t
PhaseField basis_kernel(const std::vector<StateVector>& basis_vectors);

double harmonics_complexity(const PhaseField& W_t, double omega);
double harmonics_complexity(const PhaseField& W_t, const Potential& V);

struct MinimizationProbe {
    std::vector<double> times;
    std::vector<double> krylov_cost;
    std::vector<double> min_margin;  // min over bases of cost(B) - cost(Krylov) at each t
    double window_end = 0.0;         // largest t with all margins >= -1e-8 up to it
    int window_samples = 0;          // nonzero t samples inside the window
    int n_bases = 0;
};

// random bases keep B_0 = K_0 and rotate K_1..K_(D-1) by a Haar unitary
MinimizationProbe minimization_probe(const KrylovStateBasis& basis, const SpectralDecomposition& spec,
                                     const StateVector& psi0, int n_bases, std::uint64_t seed,
                                     double t_max, int n_times);

} // namespace pk
