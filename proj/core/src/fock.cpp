#include "heraldlab/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <vector>

namespace heraldlab::fock {

namespace {

constexpr double kGaussianParamGuard = 2.0;  // ~17 dB
constexpr int kMinGaussianCutoff = 4;

void check_gaussian_args(double magnitude, int cutoff, const char* name) {
  if (cutoff < kMinGaussianCutoff) {
    throw DomainError(std::string(name) + ": cutoff must be >= 4");
  }
  if (magnitude > kGaussianParamGuard) {
    throw DomainError(std::string(name) + ": parameter magnitude exceeds 2");
  }
}

GaussianOp crop_padded(const CMat& padded, int cutoff) {
  GaussianOp op;
  op.m = padded.topLeftCorner(cutoff + 1, cutoff + 1);
  op.col_leakage.resize(cutoff + 1);
  for (int j = 0; j <= cutoff; ++j) {
    op.col_leakage[j] = 1.0 - op.m.col(j).squaredNorm();
  }
  return op;
}

}  // namespace

void FockVector::normalize() {
  const double n = amps.norm();
  if (n > 0.0) amps /= n;
}

Complex FockVector::overlap(const FockVector& other) const {
  if (cutoff != other.cutoff) {
    throw DomainError("overlap: cutoffs differ");
  }
  return amps.dot(other.amps);  // conjugates *this
}

DensityMatrix DensityMatrix::from_pure(const FockVector& psi) {
  DensityMatrix rho;
  rho.cutoff = psi.cutoff;
  rho.elems = psi.amps * psi.amps.adjoint();
  return rho;
}

void DensityMatrix::normalize() {
  const double t = trace();
  if (t > 0.0) elems /= t;
}

double DensityMatrix::hermiticity_error() const {
  return (elems - elems.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (elems + elems.adjoint()));
  return es.eigenvalues().minCoeff();
}

Eigen::VectorXd DensityMatrix::photon_distribution() const {
  return elems.diagonal().real();
}

void TwoModeState::normalize() {
  const double n = amps.norm();
  if (n > 0.0) amps /= n;
}

FockVector vacuum(int cutoff) {
  if (cutoff < 0) throw DomainError("vacuum: cutoff must be >= 0");
  CVec a = CVec::Zero(cutoff + 1);
  a[0] = 1.0;
  return {std::move(a), cutoff};
}

FockVector fock_state(int n, int cutoff) {
  if (cutoff < 0 || n < 0 || n > cutoff) {
    throw DomainError("fock_state: need 0 <= n <= cutoff");
  }
  CVec a = CVec::Zero(cutoff + 1);
  a[n] = 1.0;
  return {std::move(a), cutoff};
}

FockVector coherent(Complex alpha, int cutoff) {
  if (cutoff < 0) throw DomainError("coherent: cutoff must be >= 0");
  CVec a(cutoff + 1);
  a[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= cutoff; ++n) {
    a[n] = a[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  }
  return {std::move(a), cutoff};
}

TwoModeState tensor(const FockVector& mode0, const FockVector& mode1) {
  if (mode0.cutoff != mode1.cutoff) {
    throw DomainError("tensor: per-mode cutoffs must match");
  }
  const int d = mode0.cutoff + 1;
  TwoModeState out;
  out.cutoff = mode0.cutoff;
  out.amps.resize(d * d);
  for (int n0 = 0; n0 < d; ++n0) {
    for (int n1 = 0; n1 < d; ++n1) {
      out.amps[n0 * d + n1] = mode0.amps[n0] * mode1.amps[n1];
    }
  }
  return out;
}

double GaussianOp::leakage(int max_col) const {
  max_col = std::min<int>(max_col, static_cast<int>(col_leakage.size()) - 1);
  double worst = 0.0;
  for (int j = 0; j <= max_col; ++j) worst = std::max(worst, col_leakage[j]);
  return worst;
}

void GaussianOp::require_columns(int max_col, double tol) const {
  const double leak = leakage(max_col);
  if (leak > tol) {
    throw CutoffTooSmall("Gaussian operator leaks above the cutoff", leak);
  }
}

GaussianOp squeeze_op(double r, int cutoff) {
  check_gaussian_args(std::abs(r), cutoff, "squeeze_op");
  const int pd = 2 * cutoff + 8 + 1;  // padded dimension
  // Generator (r/2)(a^2 - a^dag^2) is real skew-symmetric; e^G is orthogonal.
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(pd, pd);
  for (int n = 0; n + 2 < pd; ++n) {
    const double c = 0.5 * r * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    gen(n, n + 2) += c;       // a^2 term
    gen(n + 2, n) -= c;       // -a^dag^2 term
  }
  const Eigen::MatrixXd u = gen.exp();
  return crop_padded(u.cast<Complex>(), cutoff);
}

GaussianOp displace_op(Complex alpha, int cutoff) {
  check_gaussian_args(std::abs(alpha), cutoff, "displace_op");
  const int pd = 2 * cutoff + 8 + 1;
  CMat gen = CMat::Zero(pd, pd);
  for (int n = 0; n + 1 < pd; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    gen(n + 1, n) += alpha * s;              // alpha a^dag
    gen(n, n + 1) -= std::conj(alpha) * s;   // -conj(alpha) a
  }
  const CMat u = gen.exp();
  return crop_padded(u, cutoff);
}

TwoModeState beam_splitter(const TwoModeState& state, double T) {
  if (!(T >= 0.0 && T <= 1.0)) {
    throw DomainError("beam_splitter: T must lie in [0, 1]");
  }
  const int c = state.cutoff;
  const int d = c + 1;
  const double phi = std::acos(std::min(1.0, std::sqrt(T)));

  TwoModeState out;
  out.cutoff = c;
  out.amps = CVec::Zero(d * d);

  // Work sector by sector: total photon number S is conserved, and within a
  // sector the generator phi*(a0^dag a1 - a1^dag a0) is real skew-symmetric
  // tridiagonal in the basis |k, S-k>, k = 0..S.
  for (int S = 0; S <= 2 * c; ++S) {
    const int kmin = std::max(0, S - c);
    const int kmax = std::min(S, c);
    if (kmin > kmax) continue;

    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(S + 1);
    bool any = false;
    for (int k = kmin; k <= kmax; ++k) {
      const Complex a = state.at(k, S - k);
      in[k] = a;
      if (std::norm(a) > 0.0) any = true;
    }
    if (!any) continue;

    if (S == 0) {
      out.at(0, 0) = in[0];
      continue;
    }

    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(S + 1, S + 1);
    for (int k = 0; k < S; ++k) {
      // a0^dag a1 |k, S-k> = sqrt((k+1)(S-k)) |k+1, S-k-1>
      const double g = phi * std::sqrt(static_cast<double>((k + 1) * (S - k)));
      gen(k + 1, k) += g;
      gen(k, k + 1) -= g;
    }
    const Eigen::MatrixXd u = gen.exp();
    const Eigen::VectorXcd mixed = u.cast<Complex>() * in;
    for (int k = kmin; k <= kmax; ++k) {
      out.at(k, S - k) = mixed[k];
    }
    // Components with k outside [kmin, kmax] fall outside the per-mode
    // cutoff and are dropped; they carry only the input's truncation tail.
  }
  return out;
}

std::pair<FockVector, double> project_mode1(const TwoModeState& state, int n) {
  if (n < 0 || n > state.cutoff) {
    throw DomainError("project_mode1: need 0 <= n <= cutoff");
  }
  const int d = state.dim();
  FockVector v;
  v.cutoff = state.cutoff;
  v.amps.resize(d);
  for (int n0 = 0; n0 < d; ++n0) v.amps[n0] = state.at(n0, n);
  return {v, v.norm2()};
}

DensityMatrix loss_channel(const DensityMatrix& rho, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("loss_channel: eta must lie in [0, 1]");
  }
  const int d = rho.cutoff + 1;
  DensityMatrix out;
  out.cutoff = rho.cutoff;
  out.elems = CMat::Zero(d, d);

  // Kraus operators A_k with (A_k)_{n-k, n} = sqrt(C(n,k) eta^{n-k} (1-eta)^k)
  std::vector<std::vector<double>> log_binom(d, std::vector<double>(d, 0.0));
  for (int n = 0; n < d; ++n) {
    for (int k = 1; k <= n; ++k) {
      log_binom[n][k] = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                        std::lgamma(n - k + 1.0);
    }
  }
  const double log_eta = eta > 0.0 ? std::log(eta) : 0.0;
  const double log_loss = eta < 1.0 ? std::log(1.0 - eta) : 0.0;

  for (int k = 0; k < d; ++k) {
    if (k > 0 && eta == 1.0) break;   // only A_0 contributes
    Eigen::VectorXd diag(d - k);
    for (int n = k; n < d; ++n) {
      double log_w = 0.5 * log_binom[n][k];
      if (n - k > 0) {
        if (eta == 0.0) { diag[n - k] = 0.0; continue; }
        log_w += 0.5 * (n - k) * log_eta;
      }
      if (k > 0) log_w += 0.5 * k * log_loss;
      diag[n - k] = std::exp(log_w);
    }
    // out += A_k rho A_k^dag, with A_k a shifted diagonal.
    for (int i = 0; i + k < d; ++i) {
      for (int j = 0; j + k < d; ++j) {
        out.elems(i, j) += diag[i] * diag[j] * rho.elems(i + k, j + k);
      }
    }
  }
  return out;
}

double wigner(const DensityMatrix& rho, double x, double p) {
  const int d = rho.cutoff + 1;
  const Complex beta = std::sqrt(2.0) * Complex(x, p);  // 2 * alpha
  const double u = std::norm(beta);
  const double pref = std::exp(-0.5 * u);

  // Laguerre table L[k][a] = L_k^{(a)}(u) for k + a < d.
  static thread_local std::vector<double> lag;
  lag.assign(d * d, 0.0);
  for (int a = 0; a < d; ++a) {
    lag[0 * d + a] = 1.0;
    if (d > 1) lag[1 * d + a] = 1.0 + a - u;
  }
  for (int k = 1; k + 1 < d; ++k) {
    for (int a = 0; a + k + 1 < d; ++a) {
      lag[(k + 1) * d + a] =
          ((2.0 * k + 1.0 + a - u) * lag[k * d + a] -
           (k + a) * lag[(k - 1) * d + a]) /
          (k + 1.0);
    }
  }

  // sqrt-factorial ratios sfr[n][m] = sqrt(n!/m!) for n <= m.
  static thread_local std::vector<double> sfr;
  sfr.assign(d * d, 0.0);
  for (int n = 0; n < d; ++n) {
    sfr[n * d + n] = 1.0;
    for (int m = n + 1; m < d; ++m) {
      sfr[n * d + m] = sfr[n * d + m - 1] / std::sqrt(static_cast<double>(m));
    }
  }

  // Powers of beta and of -conj(beta).
  std::vector<Complex> bp(d), bm(d);
  bp[0] = bm[0] = 1.0;
  for (int k = 1; k < d; ++k) {
    bp[k] = bp[k - 1] * beta;
    bm[k] = bm[k - 1] * (-std::conj(beta));
  }

  Complex acc = 0.0;
  for (int n = 0; n < d; ++n) {
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    // m = n term
    acc += rho.elems(n, n) * parity * lag[n * d + 0];
    for (int m = n + 1; m < d; ++m) {
      const int dd = m - n;
      // <m|D(beta)|n> = sqrt(n!/m!) beta^dd e^{-u/2} L_n^{(dd)}(u)
      const Complex amp_mn = sfr[n * d + m] * bp[dd] * lag[n * d + dd];
      // <n|D(beta)|m> = sqrt(n!/m!) (-conj(beta))^dd e^{-u/2} L_n^{(dd)}(u)
      const Complex amp_nm = sfr[n * d + m] * bm[dd] * lag[n * d + dd];
      const double parity_m = (m % 2 == 0) ? 1.0 : -1.0;
      acc += rho.elems(n, m) * parity * amp_mn;
      acc += rho.elems(m, n) * parity_m * amp_nm;
    }
  }
  return pref * acc.real() / M_PI;
}

double fidelity(const FockVector& a, const FockVector& b) {
  return std::norm(a.overlap(b));
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.cutoff != b.cutoff) throw DomainError("fidelity: cutoffs differ");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (a.elems + a.elems.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMat sqrt_a =
      es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  const CMat inner = sqrt_a * b.elems * sqrt_a;
  Eigen::SelfAdjointEigenSolver<CMat> es2(0.5 * (inner + inner.adjoint()));
  const double root_sum = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

double mean_x(const FockVector& psi) {
  Complex a_exp = 0.0;  // <a>
  for (int n = 0; n + 1 <= psi.cutoff; ++n) {
    a_exp += std::conj(psi.amps[n]) * psi.amps[n + 1] *
             std::sqrt(static_cast<double>(n + 1));
  }
  return std::sqrt(2.0) * a_exp.real();
}

double var_x(const FockVector& psi) {
  Complex a2 = 0.0;
  double nbar = 0.0;
  for (int n = 0; n <= psi.cutoff; ++n) {
    nbar += n * std::norm(psi.amps[n]);
    if (n + 2 <= psi.cutoff) {
      a2 += std::conj(psi.amps[n]) * psi.amps[n + 2] *
            std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    }
  }
  const double x2 = 0.5 * (1.0 + 2.0 * nbar + 2.0 * a2.real());
  const double m = mean_x(psi);
  return x2 - m * m;
}

}  // namespace heraldlab::fock
