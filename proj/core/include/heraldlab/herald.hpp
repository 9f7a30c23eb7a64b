#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "heraldlab/fock.hpp"

namespace heraldlab::herald {

/// Squeezing level S in dB <-> parameter r: r = ln(10^{S/20}), so that the
/// x-quadrature variance of S(r)|0> is e^{-2r}/2 = 10^{-S/10}/2.
inline double squeeze_r_from_db(double db) {
  return db * std::log(10.0) / 20.0;
}
inline double squeeze_db_from_r(double r) {
  return 20.0 * r / std::log(10.0);
}

/// Two orthogonally squeezed vacua (real r0, r1) interfered on a variable
/// beam splitter of transmissivity T (R = 1 - T).
struct GaussianResourceParams {
  double r0 = 0.0;
  double r1 = 0.0;
  double T = 0.5;
};

/// Entries of the inverse covariance matrix of (x0, x1) for the resource
/// state; s21 = s12.
struct InverseCovariance {
  double s11 = 0.0;
  double s12 = 0.0;
  double s22 = 0.0;
};

struct ACoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
};

InverseCovariance inverse_covariance(const GaussianResourceParams& p);
ACoefficients a_coefficients(const GaussianResourceParams& p);

/// Output squeezing parameter of the heralded state: e^{-2 r_out} is the
/// x-quadrature squeezing level, independent of the detected photon number.
double r_out(const GaussianResourceParams& p);

/// Degeneracy witness: the resource is a product state iff s12 = 0
/// (r0 = r1, or T in {0, 1}); heralding then does nothing.
bool is_entangled(const GaussianResourceParams& p);

/// Mean photon number in the trigger mode (mode 1), closed form.
double mean_trigger_photons(const GaussianResourceParams& p);

struct ResourceBuild {
  fock::TwoModeState state;
  double leakage = 0.0;  // truncation tail before normalization
};

/// B(T) (S(r0) x S(r1)) |0,0>, normalized; leakage reported.
ResourceBuild build_resource(const GaussianResourceParams& p, int cutoff);

/// n-photon heralded branch: probability P(n), squeezed-Fock expansion
/// coefficients c2[j] = C''_j^{(n)} (after undoing S(r_out)), and the
/// residual amplitude found above index n (truncation-limited).
struct HeraldDecomposition {
  int n = 0;
  double prob = 0.0;
  Eigen::VectorXcd c2;
  double r_out = 0.0;
  double residual = 0.0;
};

struct HeraldedState {
  HeraldDecomposition decomp;
  fock::FockVector state;  // normalized |psi^(n)>
};

HeraldedState herald_fock(const GaussianResourceParams& p, int n, int cutoff);
/// Same, reusing a prebuilt resource state.
HeraldedState herald_fock(const fock::TwoModeState& resource,
                          const GaussianResourceParams& p, int n);

/// Normalized sum_n cprime[n] sqrt(P(n)) |psi^(n)>; equals
/// S(r_out) sum_n C_n |n> for the C_n of the triangular relation.
fock::FockVector herald_superposition(const GaussianResourceParams& p,
                                      const Eigen::VectorXcd& cprime,
                                      int cutoff);

struct OracleResult {
  fock::FockVector state;   // normalized heralded signal state
  double prob = 0.0;        // squared norm before normalization
  std::vector<std::string> warnings;
};

/// Independent brute-force heralding path: split the trigger mode into N
/// channels with an explicit beam-splitter cascade (each channel coupling
/// 1/sqrt(N)), then contract every channel with the linearized
/// displaced-single-photon detection functional <0|(a/cnorm + alpha_j).
/// Used as a cross-check oracle against herald_superposition.
OracleResult trigger_forward_oracle(const GaussianResourceParams& p,
                                    const Eigen::VectorXcd& alphas,
                                    double cnorm, int cutoff);

}  // namespace heraldlab::herald
