#include "heraldlab/herald.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numeric>

namespace heraldlab::herald {

using fock::Complex;
using fock::CVec;

namespace {

constexpr double kEntanglementWitnessTol = 1e-10;
constexpr double kResourceLeakageTol = 1e-4;
constexpr double kProbFloor = 1e-14;
constexpr double kSmallAlphaAssumption = 0.5;

void check_params(const GaussianResourceParams& p) {
  if (!(p.T >= 0.0 && p.T <= 1.0)) {
    throw DomainError("resource: T must lie in [0, 1]");
  }
  if (std::abs(p.r0) > 2.0 || std::abs(p.r1) > 2.0) {
    throw DomainError("resource: |r| must be <= 2");
  }
}

}  // namespace

InverseCovariance inverse_covariance(const GaussianResourceParams& p) {
  check_params(p);
  const double T = p.T, R = 1.0 - p.T;
  const double e0 = std::exp(2.0 * p.r0), e1 = std::exp(2.0 * p.r1);
  InverseCovariance s;
  s.s11 = 2.0 * (R * e0 + T * e1);
  s.s12 = 2.0 * std::sqrt(R * T) * (-e0 + e1);
  s.s22 = 2.0 * (T * e0 + R * e1);
  return s;
}

ACoefficients a_coefficients(const GaussianResourceParams& p) {
  const InverseCovariance s = inverse_covariance(p);
  ACoefficients a;
  a.a1 = std::sqrt(0.5 + 0.25 * s.s22);
  a.a2 = -s.s12 / (4.0 * a.a1);
  a.a3 = std::sqrt(0.5 * s.s11 - s.s12 * s.s12 / (4.0 + 2.0 * s.s22));
  return a;
}

double r_out(const GaussianResourceParams& p) {
  check_params(p);
  const double T = p.T, R = 1.0 - p.T;
  const double e0 = std::exp(2.0 * p.r0), e1 = std::exp(2.0 * p.r1);
  const double squeeze_level = std::exp(-2.0 * (p.r0 + p.r1)) *
                               (1.0 + T * e0 + R * e1) /
                               (1.0 + T / e0 + R / e1);
  return -0.5 * std::log(squeeze_level);
}

bool is_entangled(const GaussianResourceParams& p) {
  return std::abs(inverse_covariance(p).s12) >= kEntanglementWitnessTol;
}

double mean_trigger_photons(const GaussianResourceParams& p) {
  check_params(p);
  const double T = p.T, R = 1.0 - p.T;
  return 0.5 * (R * std::cosh(2.0 * p.r1) + T * std::cosh(2.0 * p.r0) - 1.0);
}

ResourceBuild build_resource(const GaussianResourceParams& p, int cutoff) {
  check_params(p);
  const fock::GaussianOp s0 = fock::squeeze_op(p.r0, cutoff);
  const fock::GaussianOp s1 = fock::squeeze_op(p.r1, cutoff);
  s0.require_columns(0);
  s1.require_columns(0);

  fock::FockVector v0{s0.m.col(0), cutoff};
  fock::FockVector v1{s1.m.col(0), cutoff};
  // The source's variable BS with transmissivity T corresponds to the
  // fock::beam_splitter parameter 1 - T (its Heisenberg convention keeps
  // mode 0 with amplitude sqrt(T_bs)); this reproduces the inverse
  // covariance above, which is the contract checked by the tests.
  fock::TwoModeState mixed = fock::beam_splitter(fock::tensor(v0, v1), 1.0 - p.T);

  ResourceBuild out;
  out.leakage = 1.0 - mixed.norm2();
  if (out.leakage > kResourceLeakageTol) {
    throw CutoffTooSmall("build_resource: truncation leakage too large",
                         out.leakage);
  }
  mixed.normalize();
  out.state = std::move(mixed);
  return out;
}

HeraldedState herald_fock(const fock::TwoModeState& resource,
                          const GaussianResourceParams& p, int n) {
  if (n > 0 && !is_entangled(p)) {
    throw NotEntangled("herald_fock: resource degenerates to a product state");
  }
  auto [vec, prob] = fock::project_mode1(resource, n);
  if (n > 0 && prob < kProbFloor) {
    throw NotEntangled("herald_fock: P(n) vanished for n > 0");
  }

  HeraldedState out;
  out.decomp.n = n;
  out.decomp.prob = prob;
  out.decomp.r_out = r_out(p);
  vec.normalize();

  // Undo the output squeezing and read the Fock amplitudes 0..n; anything
  // above n is truncation residue.
  const fock::GaussianOp unsqueeze = fock::squeeze_op(-out.decomp.r_out,
                                                      resource.cutoff);
  CVec w = unsqueeze.m * vec.amps;
  out.decomp.c2 = w.head(n + 1);
  out.decomp.residual = w.tail(w.size() - n - 1).norm();
  if (out.decomp.residual > 1e-4) {
    throw CutoffTooSmall("herald_fock: squeezed-Fock readout residual too large",
                         out.decomp.residual);
  }
  out.state = std::move(vec);
  return out;
}

HeraldedState herald_fock(const GaussianResourceParams& p, int n, int cutoff) {
  const ResourceBuild rb = build_resource(p, cutoff);
  return herald_fock(rb.state, p, n);
}

fock::FockVector herald_superposition(const GaussianResourceParams& p,
                                      const Eigen::VectorXcd& cprime,
                                      int cutoff) {
  const int n_detect = static_cast<int>(cprime.size()) - 1;
  if (n_detect < 0) throw DomainError("herald_superposition: empty cprime");

  const ResourceBuild rb = build_resource(p, cutoff);
  CVec acc = CVec::Zero(cutoff + 1);
  for (int n = 0; n <= n_detect; ++n) {
    if (cprime[n] == Complex(0.0, 0.0)) continue;
    auto [vec, prob] = fock::project_mode1(rb.state, n);
    if (n > 0 && prob < kProbFloor && !is_entangled(p)) {
      throw NotEntangled("herald_superposition: degenerate resource");
    }
    // cprime[n] * sqrt(P(n)) |psi^(n)> is just cprime[n] times the
    // unnormalized projection.
    acc += cprime[n] * vec.amps;
  }
  fock::FockVector out{std::move(acc), cutoff};
  if (out.norm2() < kProbFloor) {
    throw NotEntangled("herald_superposition: heralded amplitude vanished");
  }
  out.normalize();
  return out;
}

namespace {

/// Dense state on 1 signal mode plus n_ch trigger channels, all with the
/// same per-axis dimension. Only used by the forward oracle.
class MultiState {
 public:
  MultiState(int n_axes, int dim) : n_axes_(n_axes), dim_(dim) {
    std::size_t total = 1;
    for (int i = 0; i < n_axes; ++i) total *= dim;
    amps_.assign(total, Complex(0.0, 0.0));
    strides_.assign(n_axes, 1);
    for (int i = n_axes - 2; i >= 0; --i) {
      strides_[i] = strides_[i + 1] * dim;
    }
  }

  Complex& at(const std::vector<int>& idx) {
    std::size_t off = 0;
    for (int i = 0; i < n_axes_; ++i) off += idx[i] * strides_[i];
    return amps_[off];
  }

  /// Mix axes (a, b) with the signed beam-splitter angle phi:
  /// a_a -> cos(phi) a_a + sin(phi) a_b in the Heisenberg picture.
  void mix(int axis_a, int axis_b, double phi) {
    const int d = dim_;
    // Per-sector rotations, as in fock::beam_splitter.
    std::vector<Eigen::MatrixXd> sector(2 * d - 1);
    for (int S = 0; S <= 2 * (d - 1); ++S) {
      Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(S + 1, S + 1);
      for (int k = 0; k < S; ++k) {
        const double g = phi * std::sqrt(static_cast<double>((k + 1) * (S - k)));
        gen(k + 1, k) += g;
        gen(k, k + 1) -= g;
      }
      sector[S] = gen.exp();
    }

    const std::size_t sa = strides_[axis_a], sb = strides_[axis_b];
    std::vector<int> idx(n_axes_, 0);
    // Iterate over all index combinations with axes a, b fixed at 0.
    for (;;) {
      std::size_t base = 0;
      for (int i = 0; i < n_axes_; ++i) base += idx[i] * strides_[i];

      for (int S = 0; S <= 2 * (d - 1); ++S) {
        const int kmin = std::max(0, S - (d - 1));
        const int kmax = std::min(S, d - 1);
        Eigen::VectorXcd in = Eigen::VectorXcd::Zero(S + 1);
        bool any = false;
        for (int k = kmin; k <= kmax; ++k) {
          const Complex v = amps_[base + k * sa + (S - k) * sb];
          in[k] = v;
          if (std::norm(v) > 0.0) any = true;
        }
        if (!any) continue;
        const Eigen::VectorXcd mixed = sector[S].cast<Complex>() * in;
        for (int k = kmin; k <= kmax; ++k) {
          amps_[base + k * sa + (S - k) * sb] = mixed[k];
        }
      }

      // Advance the multi-index, skipping the two mixed axes.
      int i = n_axes_ - 1;
      for (; i >= 0; --i) {
        if (i == axis_a || i == axis_b) continue;
        if (++idx[i] < dim_) break;
        idx[i] = 0;
      }
      if (i < 0) break;
    }
  }

  /// Contract the last axis with <0|(w a + alpha); the state loses that axis.
  void contract_last(double w, Complex alpha) {
    const int d = dim_;
    const std::size_t new_total = amps_.size() / d;
    std::vector<Complex> next(new_total);
    for (std::size_t rest = 0; rest < new_total; ++rest) {
      // <0| (w a + alpha) |...> picks w*psi[n=1] + alpha*psi[n=0].
      next[rest] = w * amps_[rest * d + 1] + alpha * amps_[rest * d + 0];
    }
    amps_ = std::move(next);
    --n_axes_;
    strides_.pop_back();
    for (auto& s : strides_) s /= d;
  }

  const std::vector<Complex>& amps() const { return amps_; }

 private:
  int n_axes_;
  int dim_;
  std::vector<Complex> amps_;
  std::vector<std::size_t> strides_;
};

}  // namespace

OracleResult trigger_forward_oracle(const GaussianResourceParams& p,
                                    const Eigen::VectorXcd& alphas,
                                    double cnorm, int cutoff) {
  const int n_ch = static_cast<int>(alphas.size());
  if (cnorm <= 0.0) throw DomainError("trigger_forward_oracle: cnorm must be > 0");

  OracleResult out;
  for (int j = 0; j < n_ch; ++j) {
    if (std::abs(alphas[j]) > kSmallAlphaAssumption) {
      out.warnings.push_back(
          "AssumptionViolated: |alpha_" + std::to_string(j + 1) +
          "| > 0.5, displaced single-photon detection model is strained");
    }
  }

  const ResourceBuild rb = build_resource(p, cutoff);
  const int d = cutoff + 1;

  if (n_ch == 0) {
    // No detection channels: project the whole trigger mode onto vacuum.
    auto [vec, prob] = fock::project_mode1(rb.state, 0);
    out.prob = prob;
    vec.normalize();
    out.state = std::move(vec);
    return out;
  }

  MultiState ms(1 + n_ch, d);
  {
    std::vector<int> idx(1 + n_ch, 0);
    for (int s = 0; s < d; ++s) {
      for (int n1 = 0; n1 < d; ++n1) {
        idx[0] = s;
        idx[1] = n1;
        ms.at(idx) = rb.state.at(s, n1);
      }
    }
  }

  // Equal-split cascade: after step j the j-th channel keeps amplitude
  // 1/sqrt(n_ch) of the original trigger field, with positive sign.
  for (int j = 1; j < n_ch; ++j) {
    const double keep = 1.0 / std::sqrt(static_cast<double>(n_ch - j + 1));
    const double phi = -std::acos(keep);  // negative angle -> +sin transfer
    ms.mix(j, j + 1, phi);
  }

  // The displaced on/off detection in each channel reduces to the linear
  // functional <0|(a/cnorm + alpha_j) on that channel's wave-packet mode.
  for (int j = n_ch; j >= 1; --j) {
    ms.contract_last(1.0 / cnorm, alphas[j - 1]);
  }

  CVec signal(d);
  for (int s = 0; s < d; ++s) signal[s] = ms.amps()[s];
  fock::FockVector state{std::move(signal), cutoff};
  out.prob = state.norm2();
  if (out.prob < kProbFloor) {
    throw NotEntangled("trigger_forward_oracle: heralded amplitude vanished");
  }
  state.normalize();
  out.state = std::move(state);
  return out;
}

}  // namespace heraldlab::herald
