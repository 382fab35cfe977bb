#pragma once

#include "phasekrylov/krylov.hpp"
#include "phasekrylov/wigner.hpp"

#include <memory>
#include <mutex>
#include <vector>

namespace pk {

inline constexpr int kDoubleFieldMaxN = 64;
inline constexpr int kSuperopMaxN = 32;

enum class ChordParity { general, minus, plus };

// Values on the chord-endpoint lattice: x+ = x + xi/2 and x- = x - xi/2 both run over the PhaseGrid.
// Centre x = (x+ + x-)/2, chord xi = x+ - x-; xi -> -xi is the swap x+ <-> x-.
struct DoublePhaseField {
    PhaseGrid grid;
    std::vector<cplx> values;
    ChordParity parity = ChordParity::general;

    int N() const { return grid.N(); }
    size_t index(int ip, int kp, int im, int km) const {
        const size_t n = size_t(N());
        return ((size_t(ip) * n + kp) * n + im) * n + km;
    }
    cplx& at(int ip, int kp, int im, int km) { return values[index(ip, kp, im, km)]; }
    cplx at(int ip, int kp, int im, int km) const { return values[index(ip, kp, im, km)]; }
    double measure() const { return grid.cell_area * grid.cell_area; }
    cplx integral() const;
    double max_abs_imag() const;
};

DoublePhaseField zero_double_field(const PhaseGrid& pg);
// sum A B cell^2
cplx double_pairing(const DoublePhaseField& A, const DoublePhaseField& B);
// sum A conj(B) cell^2
cplx double_overlap(const DoublePhaseField& A, const DoublePhaseField& B);
double max_abs_diff(const DoublePhaseField& A, const DoublePhaseField& B);
// max |F(x+, x-) -+ F(x-, x+)| for the declared parity
double parity_defect(const DoublePhaseField& F);
// sum F(x+, x-) f(x+) g(x-) cell^2
cplx pair_separable(const DoublePhaseField& F, const PhaseField& f, const PhaseField& g);
PhaseField unit_symbol(const PhaseGrid& pg);

// T(A Pi_{x-} B^dagger)(x+) / (2 pi^2 D)
DoublePhaseField dwf_pair(const OperatorMatrix& A, const OperatorMatrix& B);

// A(x+) - A(x-) and (A(x+) + A(x-)) / 2
DoublePhaseField dwt_minus(const PhaseField& A_field);
DoublePhaseField dwt_plus(const PhaseField& A_field);
// f(x+) g(x-)
DoublePhaseField dwt_product(const PhaseField& f, const PhaseField& g);

// S(X)_ad = sum S_{ab;cd} X_bc, stored as m[(a N + d), (b N + c)]
struct Superoperator {
    Grid1D grid;
    Mat m;

    int N() const { return grid.N; }
};

Superoperator superop_lr(const OperatorMatrix& L, const OperatorMatrix& R);
// |A>><<B| with <<B|X>> = Tr(B^dagger X) / D
Superoperator superop_ket_bra(const OperatorMatrix& A, const OperatorMatrix& B);
Superoperator superop_identity(const Grid1D& g);
Superoperator superop_minus(const OperatorMatrix& A);
Superoperator superop_plus(const OperatorMatrix& A);
Superoperator compose(const Superoperator& S1, const Superoperator& S2);
OperatorMatrix apply(const Superoperator& S, const OperatorMatrix& X);

DoublePhaseField dwt_of_superop(const Superoperator& S);
Superoperator quantize_superop(const DoublePhaseField& F);
// dwt_of_superop(quantize_superop(F))
DoublePhaseField canonical(const DoublePhaseField& F);
DoublePhaseField dwt_star(const DoublePhaseField& A, const DoublePhaseField& B);

// Pi_{x+} O Pi_{x-} with x+- = x +- xi/2
OperatorMatrix parity_superop_apply(PhasePoint x, PhasePoint xi, const OperatorMatrix& O);
// 4 Tr[(Pi_{x+} . Pi_{x-}) S] at one endpoint pair
cplx dwt_point_via_parity(const Superoperator& S, PhasePoint x_plus, PhasePoint x_minus);

class OperatorKrylovPhaseSet {
public:
    explicit OperatorKrylovPhaseSet(KrylovOperatorBasis basis);

    int dim() const { return basis_.dim(); }
    const KrylovOperatorBasis& basis() const { return basis_; }
    const PhaseGrid& grid() const { return grid_; }
    // W^K_nm = dwf_pair(O_n, O_m); computed on first use
    const DoublePhaseField& field(int n, int m) const;
    void release() const;

private:
    struct Cache {
        std::mutex mu;
        std::vector<std::unique_ptr<DoublePhaseField>> slots;
    };
    KrylovOperatorBasis basis_;
    PhaseGrid grid_;
    std::shared_ptr<Cache> cache_;
};

// (2 pi)^2 sum_n n W^K_nn
DoublePhaseField operator_spreading_kernel(const OperatorKrylovPhaseSet& set);
double operator_complexity_phase(const DoublePhaseField& kernel, const OperatorMatrix& O_t);
double operator_complexity_phase(const OperatorKrylovPhaseSet& set, const OperatorMatrix& O_t);
// sum n |<<O_n|O(t)>>|^2
double operator_complexity_direct(const KrylovOperatorBasis& basis, const OperatorMatrix& O_t);
// sum n |integral conj(T(O_n)) T(O(t)) cell / (2 pi D)|^2, centre variables only
double operator_complexity_reduced(const KrylovOperatorBasis& basis, const OperatorMatrix& O_t);

// <<[V, O]|[V, O]>>
double otoc_direct(const OperatorMatrix& V, const OperatorMatrix& O_t);
// integral W_O [V*V(x+) + V*V(x-) - 2 V(x+) V(x-)]
double otoc_phase(const OperatorMatrix& V, const OperatorMatrix& O_t);

// F_n = Tr(rho (M^-)^n rho) / D, n = 0..n_max
std::vector<double> fidelity_moments(const OperatorMatrix& rho_T, const OperatorMatrix& M, int n_max);
// F_n from the double-phase pairing of W_rho with the binomial DWT of (M^-)^n
double fidelity_moment_phase(const DoublePhaseField& W_rho, const OperatorMatrix& M, int n);
// Tr(P rho P^dagger rho) / Tr(rho^2), P = exp(-i theta M)
double fidelity_direct(const OperatorMatrix& rho_T, const OperatorMatrix& M, double theta);
// (D / Tr rho^2) sum_n (-i theta)^n F_n / n!
double fidelity_resummed(const std::vector<double>& moments, double purity, int D, double theta);
// |theta|^7 max |f^(7)| / 7! over 33 samples of [0, theta]
double fidelity_remainder_bound(const OperatorMatrix& rho_T, const OperatorMatrix& M, double theta, int order);

void check_density_matrix(const OperatorMatrix& rho);

} // namespace pk
