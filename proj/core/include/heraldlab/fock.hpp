#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "heraldlab/errors.hpp"

namespace heraldlab::fock {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Pure state of one bosonic mode on the truncated Fock space {|0>..|cutoff>}.
struct FockVector {
  CVec amps;   // length cutoff + 1
  int cutoff = 0;

  FockVector() = default;
  FockVector(CVec a, int c) : amps(std::move(a)), cutoff(c) {}

  double norm2() const { return amps.squaredNorm(); }
  void normalize();

  Complex overlap(const FockVector& other) const;  // <this|other>
};

/// Hermitian trace-1 operator on the truncated Fock space.
struct DensityMatrix {
  CMat elems;  // (cutoff+1) x (cutoff+1)
  int cutoff = 0;

  DensityMatrix() = default;
  DensityMatrix(CMat e, int c) : elems(std::move(e)), cutoff(c) {}

  static DensityMatrix from_pure(const FockVector& psi);

  double trace() const { return elems.trace().real(); }
  void normalize();  // divide by trace
  double hermiticity_error() const;
  double min_eigenvalue() const;
  Eigen::VectorXd photon_distribution() const;  // real diagonal
};

/// Pure state of two modes; amps indexed by (n0, n1) with the same cutoff on
/// each mode, flattened as n0 * (cutoff + 1) + n1.
struct TwoModeState {
  CVec amps;   // length (cutoff+1)^2
  int cutoff = 0;

  TwoModeState() = default;
  TwoModeState(CVec a, int c) : amps(std::move(a)), cutoff(c) {}

  int dim() const { return cutoff + 1; }
  Complex& at(int n0, int n1) { return amps[n0 * dim() + n1]; }
  Complex at(int n0, int n1) const { return amps[n0 * dim() + n1]; }
  double norm2() const { return amps.squaredNorm(); }
  void normalize();
};

FockVector vacuum(int cutoff);
FockVector fock_state(int n, int cutoff);
FockVector coherent(Complex alpha, int cutoff);

TwoModeState tensor(const FockVector& mode0, const FockVector& mode1);

/// Cropped Gaussian unitary built on a padded cutoff (2*cutoff + 8) via a
/// dense matrix exponential. col_leakage[j] = 1 - ||column j||^2 is the
/// amplitude lost above the crop when the operator acts on |j>.
struct GaussianOp {
  CMat m;
  Eigen::VectorXd col_leakage;

  /// Largest leakage over input columns 0..max_col.
  double leakage(int max_col) const;
  /// Throw CutoffTooSmall if leakage(max_col) exceeds tol (default 1e-6).
  void require_columns(int max_col, double tol = 1e-6) const;
};

/// Single-mode squeezer S(r) = exp[(r/2)(a^2 - a^dag^2)], real r.
/// S(r)|0> has Var(x) = e^{-2r}/2 with x = (a + a^dag)/sqrt(2), hbar = 1.
GaussianOp squeeze_op(double r, int cutoff);

/// Displacement D(alpha) = exp(alpha a^dag - conj(alpha) a).
GaussianOp displace_op(Complex alpha, int cutoff);

/// Two-mode beam splitter with transmissivity T (T = 1 is the identity).
/// Mixes photon-number sectors exactly:
///   B a0 B^dag-style Heisenberg action:  a0 -> sqrt(T) a0 + sqrt(1-T) a1,
///                                        a1 -> -sqrt(1-T) a0 + sqrt(T) a1.
/// Sectors with total photon number above the per-mode cutoff are cropped;
/// the lost amplitude is the truncation tail of the input state.
TwoModeState beam_splitter(const TwoModeState& state, double T);

/// Apply <n|_1 to a two-mode state. Returns the unnormalized mode-0 vector
/// and its squared norm (the detection probability of that outcome).
std::pair<FockVector, double> project_mode1(const TwoModeState& state, int n);

/// Pure-loss channel of transmission eta (beam splitter to vacuum, Kraus
/// form). Trace preserving and completely positive.
DensityMatrix loss_channel(const DensityMatrix& rho, double eta);

/// Wigner function W(x, p) in the hbar = 1 convention (vacuum peak 1/pi),
/// evaluated with the displaced-parity / associated-Laguerre closed form.
double wigner(const DensityMatrix& rho, double x, double p);

double fidelity(const FockVector& a, const FockVector& b);
/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// <x> and Var(x) of a pure state, x = (a + a^dag)/sqrt(2).
double mean_x(const FockVector& psi);
double var_x(const FockVector& psi);

}  // namespace heraldlab::fock
