#pragma once

#include "phasekrylov/krylov.hpp"
#include "phasekrylov/quantum.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace pk {

// symbol: Weyl transform of an operator; wigner: Weyl transform divided by 2 pi
enum class Normalization { symbol, wigner };

const char* to_string(Normalization n);

// values(i, k) = f(q_i, p_k), k index = signed k + N/2
struct PhaseField {
    PhaseGrid grid;
    Mat values;
    Normalization norm = Normalization::symbol;

    int N() const { return grid.N(); }
    cplx integral() const;
    double max_abs_imag() const;
};

PhaseField zero_field(const PhaseGrid& pg, Normalization n);
template <class F>
PhaseField sample_field(const PhaseGrid& pg, F f, Normalization n = Normalization::symbol) {
    PhaseField out = zero_field(pg, n);
    for (int i = 0; i < pg.N(); ++i)
        for (int k = 0; k < pg.N(); ++k) out.values(i, k) = f(pg.q(i), pg.p(k));
    return out;
}

// sum A B cell, no conjugation
cplx phase_pairing(const PhaseField& A, const PhaseField& B);
double max_abs_diff(const PhaseField& A, const PhaseField& B);

PhaseField weyl_transform(const OperatorMatrix& O);
// Weyl transform of |u><v| from orthonormal coordinates
PhaseField weyl_transform_outer(const PhaseGrid& pg, const Vec& u, const Vec& v);
OperatorMatrix weyl_quantize(const PhaseField& field);
PhaseField wigner_of_state(const StateVector& psi);

// psi~(p_k) = (2 pi)^(-1/2) sum_i dx psi_i e^{-i p_k q_i}
std::vector<cplx> momentum_wavefunction(const StateVector& psi, const PhaseGrid& pg);

class KrylovPhaseSet {
public:
    KrylovPhaseSet(const PhaseGrid& pg, Mat coords);

    int dim() const { return int(coords_.cols()); }
    const PhaseGrid& grid() const { return grid_; }
    const Mat& coords() const { return coords_; }
    // W^K_nm, wigner normalization; computed on first use
    const PhaseField& field(int n, int m) const;

    // Lanczos coefficients of the chain, when the set came from a Krylov basis
    std::vector<double> a;
    std::vector<double> b;

private:
    struct Cache {
        std::mutex mu;
        std::vector<std::unique_ptr<PhaseField>> slots;
    };
    PhaseGrid grid_;
    Mat coords_;
    std::shared_ptr<Cache> cache_;
};

KrylovPhaseSet krylov_phase_set(const KrylovStateBasis& basis);
KrylovPhaseSet phase_set_from_vectors(const Grid1D& g, const std::vector<StateVector>& vectors);

// 2 pi sum_n n W^K_nn, symbol normalization
PhaseField spreading_kernel(const KrylovPhaseSet& set);

struct ChordField {
    ChordGrid grid;
    PhaseGrid phase;
    Mat values;  // (xi_q index, xi_p index)
};

ChordField characteristic_function(const PhaseField& field);
PhaseField inverse_characteristic(const ChordField& chi, Normalization n);

// exp[i(xi_p Q - xi_q P)]; xi_q must be a multiple of dx
OperatorMatrix displacement_operator(const Grid1D& g, PhasePoint xi);
// D_x Pi D_x^dagger with periodic wrap; q on the half-grid, p a multiple of pi/L
OperatorMatrix parity_operator(const Grid1D& g, PhasePoint x);

PhaseField generating_function(const KrylovPhaseSet& set, cplx mu1, cplx mu2);

} // namespace pk
