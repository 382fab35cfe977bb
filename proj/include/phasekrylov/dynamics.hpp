#pragma once

#include "phasekrylov/krylov.hpp"
#include "phasekrylov/moyal.hpp"
#include "phasekrylov/wigner.hpp"

#include <map>

namespace pk {

inline constexpr int kLambdaCap = 9;

struct LiouvilleSplit {
    PhaseField classical;                  // -(p/m) dW/dq + V'(q) dW/dp
    std::map<int, PhaseField> quantum_terms;  // odd lambda >= 3 where V^(lambda) does not vanish
    int lambda_max = 1;

    PhaseField total() const;
};

struct RateSplit {
    double rate_classical = 0.0;
    std::map<int, double> rate_quantum;

    double total() const;
};

// M_nm = phi_n (a_m phi_m^* + b_(m+1) phi_(m+1)^* + b_m phi_(m-1)^*)
struct MnmMatrix {
    Mat entries;
};

// dW/dq by FFT along q (full-band frequencies), exact for half-band states
PhaseField d_dq(const PhaseField& W);
// d^lambda W/dp^lambda through the (2 i s dx)^lambda kernel multiplier
PhaseField d_dp(const PhaseField& W, int lambda);

// -i [H, W]_star
PhaseField moyal_rhs(const PhaseField& W, const PhaseField& H_field);

LiouvilleSplit liouville_split(const PhaseField& W, const Potential& V, int lambda_max);

RateSplit complexity_rate_split(const PhaseField& K_field, const LiouvilleSplit& split);

MnmMatrix mnm_matrix(const ChainAmplitudes& phi, const std::vector<double>& a, const std::vector<double>& b);

// i sum W^K_nm (M_nm - M_mn^*)
PhaseField wigner_rhs_krylov(const KrylovPhaseSet& set, const ChainAmplitudes& phi,
                             const std::vector<double>& a, const std::vector<double>& b);

// d^2 W/dt^2 at t = 0 assembled from W^K_00, W^K_11, W^K_01, W^K_10, W^K_02, W^K_20
PhaseField wigner_second_derivative_t0(const KrylovPhaseSet& set);

} // namespace pk
