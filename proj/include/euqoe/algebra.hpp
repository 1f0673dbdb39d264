#pragma once

#include <Eigen/Dense>
#include <complex>

namespace euqoe {

using cplx = std::complex<double>;

// All two-qubit operators live on the basis {|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>}
// in this fixed order.
using Mat4 = Eigen::Matrix4cd;

enum class EntangledParity { symmetric, antisymmetric };

// rho_0 = p |e><e| + q |chi><chi| with |chi> = b1 |e1 g2> + b2 |g1 e2>, q = 1 - p.
struct InitialState {
    double p = 0.0;
    cplx b1{1.0, 0.0};
    cplx b2{0.0, 0.0};

    double q() const { return 1.0 - p; }
    void validate() const;  // throws std::domain_error on invariant violation
};

// (b1, b2) = (1, 1)/sqrt(2) for symmetric, (1, -1)/sqrt(2) for antisymmetric,
// so b1 b2* = +1/2 or -1/2.
InitialState maximally_entangled(EntangledParity parity, double p = 0.0);

// diag((1+a)/2, (1-a)/2, (-1+a)/2, (-1-a)/2); the free Hamiltonian is
// omega * h_alpha.
Mat4 h_alpha(double alpha);

// Interaction-picture monopole operator of detector 1: entries
// (1,3) = (2,4) = mu e^{i omega dtau}, (3,1) = (4,2) = conj.
Mat4 monopole_m1(double delta_tau, double omega, double mu);

// Detector 2: entries (1,2) = (3,4) = mu e^{i omega dtau}, (2,1) = (4,3) = conj.
Mat4 monopole_m2(double delta_tau, double omega, double mu);

Mat4 initial_density(const InitialState& state);

// Real part of Tr(rho h_alpha'); throws if rho is non-Hermitian or the
// imaginary residue exceeds 1e-12.
double trace_rho_h(const Mat4& rho, double alpha_prime);

// The six second-order commutator combinations entering the perturbed
// density matrix, paired with the correlator channels below.
enum class GammaChannel {
    g12_first,   // M1(t1') M2(t2'') rho - M2(t2'') rho M1(t1')
    g12_second,  // rho M1(t1'') M2(t2') - M2(t2') rho M1(t1'')
    g21_first,   // M2(t2') M1(t1'') rho - M1(t1'') rho M2(t2')
    g21_second,  // rho M2(t2'') M1(t1') - M1(t1') rho M2(t2'')
    g11,         // full double commutator of M1 with rho
    g22,         // full double commutator of M2 with rho
};

// Closed-form Tr(Gamma h_alpha') including the measure factor that converts
// the detector-2 time integrals to detector-1 time (alpha_a per M2 argument)
// and an overall factor 2. The time offsets Delta tau = tau + tau_a are
// applied internally; detector 2 runs on tau_2 = alpha_a tau_1 with
// tau_b = alpha_a tau_a.
cplx gamma_trace_closed(GammaChannel which, double tau1p, double tau1pp,
                        double tau_a, double alpha_a, double alpha_prime,
                        const InitialState& state, double omega, double mu);

// Factor relating gamma_trace_closed to the bare matrix trace
// Tr(Gamma h_alpha'): 2*alpha_a for the mixed channels, 2 for g11,
// 2*alpha_a^2 for g22.
double gamma_measure_factor(GammaChannel which, double alpha_a);

}  // namespace euqoe
