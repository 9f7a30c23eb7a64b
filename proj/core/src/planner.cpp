#include "heraldlab/planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

namespace heraldlab::planner {

using fock::Complex;
using fock::CVec;
using herald::GaussianResourceParams;

namespace {

constexpr double kRootTol = 1e-12;
constexpr double kMaxTargetRout = 1.5;
constexpr double kMeanTriggerBudget = 0.2;
constexpr double kAlphaWarnThreshold = 0.5;

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, double fhi) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw NoSolution("solve_gaussian_params: root bracket failed");
  }
  for (int it = 0; it < 200 && hi - lo > kRootTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

GaussianResourceParams solve_symmetric(double target, double margin) {
  // Negative targets by the sign symmetry r_out(-r0, -r1, T) = -r_out.
  if (target < 0.0) {
    GaussianResourceParams p = solve_symmetric(-target, margin);
    p.r0 = -p.r0;
    p.r1 = -p.r1;
    return p;
  }
  const double r0 = target + margin;
  auto f = [&](double delta) {
    GaussianResourceParams p{r0, -r0 + delta, 0.5};
    return herald::r_out(p) - target;
  };
  // delta = 0 gives r_out = 0; delta -> 2 r0 approaches the degenerate
  // r0 = r1 line where r_out = r0 > target, so a root sits strictly inside.
  const double lo = 0.0, hi = 2.0 * r0 - 1e-9;
  const double delta = bisect(f, lo, hi, f(lo), f(hi));
  return {r0, -r0 + delta, 0.5};
}

std::optional<double> solve_r1_for_rout(double r0, double T, double target) {
  auto f = [&](double r1) {
    return herald::r_out({r0, r1, T}) - target;
  };
  // Scan for a sign change on a coarse grid, then bisect.
  const double lo = -2.0, hi = 2.0;
  const int steps = 80;
  double prev_x = lo, prev_f = f(lo);
  for (int i = 1; i <= steps; ++i) {
    const double x = lo + (hi - lo) * i / steps;
    const double fx = f(x);
    if (prev_f == 0.0) return prev_x;
    if (prev_f * fx <= 0.0) {
      return bisect(f, prev_x, x, prev_f, fx);
    }
    prev_x = x;
    prev_f = fx;
  }
  return std::nullopt;
}

GaussianResourceParams solve_max_prob(double target, const Strategy& strategy,
                                      int cutoff) {
  double best_p = -1.0;
  GaussianResourceParams best{};
  for (double r0 = std::abs(target) + 0.1; r0 <= std::abs(target) + 1.2;
       r0 += 0.1) {
    const double r0s = target >= 0.0 ? r0 : -r0;
    for (double T = 0.15; T <= 0.86; T += 0.1) {
      const auto r1 = solve_r1_for_rout(r0s, T, target);
      if (!r1) continue;
      GaussianResourceParams cand{r0s, *r1, T};
      if (!herald::is_entangled(cand)) continue;
      if (herald::mean_trigger_photons(cand) > kMeanTriggerBudget) continue;
      double p;
      try {
        p = herald::herald_fock(cand, strategy.n_detect, cutoff).decomp.prob;
      } catch (const Error&) {
        continue;
      }
      if (p > best_p) {
        best_p = p;
        best = cand;
      }
    }
  }
  if (best_p < 0.0) {
    throw NoSolution("solve_gaussian_params: no feasible (r0, r1, T) found");
  }
  if (best_p < strategy.p_min) {
    throw NoSolution("solve_gaussian_params: best P(N) below p_min");
  }
  return best;
}

}  // namespace

void TargetState::validate() const {
  if (c.size() < 1) throw DomainError("target: empty coefficient vector");
  if (std::abs(c.norm() - 1.0) > 1e-10) {
    throw DomainError("target: coefficients must be normalized");
  }
  if (std::abs(c[c.size() - 1]) <= 1e-12) {
    throw DomainError("target: leading coefficient c_N must be nonzero");
  }
  if (std::abs(r_out_target) > kMaxTargetRout) {
    throw DomainError("target: |r_out| must be <= 1.5");
  }
}

GaussianResourceParams solve_gaussian_params(double r_out_target,
                                             const Strategy& strategy) {
  if (std::abs(r_out_target) > kMaxTargetRout) {
    throw DomainError("solve_gaussian_params: |r_out_target| must be <= 1.5");
  }
  if (strategy.kind == Strategy::Kind::Symmetric) {
    return solve_symmetric(r_out_target, strategy.r0_margin);
  }
  return solve_max_prob(r_out_target, strategy, 24);
}

Eigen::VectorXcd solve_cprime(
    const TargetState& target,
    const std::vector<herald::HeraldDecomposition>& table) {
  target.validate();
  const int N = target.stellar_rank();
  if (static_cast<int>(table.size()) != N + 1) {
    throw DomainError("solve_cprime: decomposition table must cover n = 0..N");
  }
  for (int n = 0; n <= N; ++n) {
    const double diag =
        std::abs(table[n].c2[n]) * std::sqrt(std::max(table[n].prob, 0.0));
    if (diag < 1e-12) {
      throw SingularTable("solve_cprime: vanishing diagonal C''_n sqrt(P(n))");
    }
  }

  CVec cprime = CVec::Zero(N + 1);
  for (int row = N; row >= 0; --row) {
    Complex acc = target.c[row];
    for (int n = row + 1; n <= N; ++n) {
      acc -= cprime[n] * std::sqrt(table[n].prob) * table[n].c2[row];
    }
    cprime[row] = acc / (std::sqrt(table[row].prob) * table[row].c2[row]);
  }
  return cprime;
}

Eigen::VectorXcd alphas_from_cprime(const Eigen::VectorXcd& cprime,
                                    double cnorm,
                                    std::vector<std::string>* warnings) {
  const int N = static_cast<int>(cprime.size()) - 1;
  if (N < 0) throw DomainError("alphas_from_cprime: empty cprime");
  if (cnorm <= 0.0) throw DomainError("alphas_from_cprime: cnorm must be > 0");
  if (N == 0) return Eigen::VectorXcd(0);
  if (std::abs(cprime[N]) == 0.0) {
    throw DomainError("alphas_from_cprime: leading C'_N must be nonzero");
  }

  // Polynomial p(z) = sum_n (C'_n / sqrt(n!)) z^n.
  CVec coeff(N + 1);
  double fact = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) fact *= n;
    coeff[n] = cprime[n] / std::sqrt(fact);
  }

  const double cond =
      coeff.cwiseAbs().maxCoeff() / std::abs(coeff[N]);
  if (warnings && cond > 1e8) {
    warnings->push_back("IllConditioned: polynomial coefficient ratio " +
                        std::to_string(cond));
  }

  Eigen::VectorXcd roots(N);
  if (N == 1) {
    roots[0] = -coeff[0] / coeff[1];
  } else {
    fock::CMat companion = fock::CMat::Zero(N, N);
    for (int i = 1; i < N; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < N; ++i) companion(i, N - 1) = -coeff[i] / coeff[N];
    Eigen::ComplexEigenSolver<fock::CMat> es(companion);
    roots = es.eigenvalues();
  }

  Eigen::VectorXcd alphas(N);
  const double scale = std::sqrt(static_cast<double>(N)) * cnorm;
  for (int j = 0; j < N; ++j) alphas[j] = -roots[j] / scale;
  return alphas;
}

double cprime_reexpansion_error(const Eigen::VectorXcd& cprime,
                                const Eigen::VectorXcd& alphas, double cnorm) {
  const int N = static_cast<int>(alphas.size());
  if (static_cast<int>(cprime.size()) != N + 1) {
    throw DomainError("cprime_reexpansion_error: size mismatch");
  }
  if (N == 0) return 0.0;

  // Expand prod_j (z / (sqrt(N) cnorm) + alpha_j).
  const double s = 1.0 / (std::sqrt(static_cast<double>(N)) * cnorm);
  CVec poly = CVec::Zero(N + 1);
  poly[0] = 1.0;
  int deg = 0;
  for (int j = 0; j < N; ++j) {
    CVec next = CVec::Zero(N + 1);
    for (int k = 0; k <= deg; ++k) {
      next[k] += poly[k] * alphas[j];
      next[k + 1] += poly[k] * s;
    }
    poly = next;
    ++deg;
  }

  // Reference coefficients C'_n / sqrt(n!), matched by the leading term.
  CVec ref(N + 1);
  double fact = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) fact *= n;
    ref[n] = cprime[n] / std::sqrt(fact);
  }
  const Complex g = poly[N] / ref[N];
  double err = 0.0;
  const double norm = ref.cwiseAbs().maxCoeff();
  for (int n = 0; n <= N; ++n) {
    err = std::max(err, std::abs(poly[n] - g * ref[n]) / (std::abs(g) * norm));
  }
  return err;
}

fock::FockVector target_fock_vector(const TargetState& target, int cutoff) {
  target.validate();
  const int N = target.stellar_rank();
  if (N > cutoff) throw DomainError("target_fock_vector: N exceeds cutoff");
  CVec base = CVec::Zero(cutoff + 1);
  base.head(N + 1) = target.c;
  const fock::GaussianOp sq = fock::squeeze_op(target.r_out_target, cutoff);
  sq.require_columns(N);
  fock::FockVector out{sq.m * base, cutoff};
  out.normalize();
  return out;
}

HeraldingPlan plan(const TargetState& target, double cnorm,
                   const Strategy& strategy, int cutoff,
                   const GaussianResourceParams* fixed_params) {
  target.validate();
  const int N = target.stellar_rank();

  HeraldingPlan out;
  out.cnorm = cnorm;
  out.n_detect = N;
  if (fixed_params) {
    if (std::abs(herald::r_out(*fixed_params) - target.r_out_target) > 1e-6) {
      throw DomainError("plan: fixed resource params do not realize the "
                        "target r_out");
    }
    out.params = *fixed_params;
  } else {
    out.params = solve_gaussian_params(target.r_out_target, strategy);
  }

  const herald::ResourceBuild rb = herald::build_resource(out.params, cutoff);
  std::vector<herald::HeraldDecomposition> table;
  table.reserve(N + 1);
  for (int n = 0; n <= N; ++n) {
    table.push_back(herald::herald_fock(rb.state, out.params, n).decomp);
  }

  out.cprime = solve_cprime(target, table);
  out.alphas = alphas_from_cprime(out.cprime, cnorm, &out.warnings);

  const herald::OracleResult fwd =
      herald::trigger_forward_oracle(out.params, out.alphas, cnorm, cutoff);
  out.predicted_prob = fwd.prob;
  for (const auto& w : fwd.warnings) out.warnings.push_back(w);
  return out;
}

PlanReport verify_plan(const HeraldingPlan& plan, const TargetState& target,
                       int cutoff) {
  PlanReport rep;
  const fock::FockVector simulated =
      herald::herald_superposition(plan.params, plan.cprime, cutoff);
  const fock::FockVector want = target_fock_vector(target, cutoff);
  rep.fidelity = fock::fidelity(simulated, want);
  rep.prob = plan.predicted_prob;
  rep.max_alpha =
      plan.alphas.size() > 0 ? plan.alphas.cwiseAbs().maxCoeff() : 0.0;
  rep.mean_trigger_photons = herald::mean_trigger_photons(plan.params);
  rep.cprime_reexpansion_error =
      cprime_reexpansion_error(plan.cprime, plan.alphas, plan.cnorm);
  if (rep.max_alpha > kAlphaWarnThreshold) {
    rep.warnings.push_back("max |alpha| exceeds 0.5; displaced on/off "
                           "detection model is strained");
  }
  if (rep.mean_trigger_photons > kMeanTriggerBudget) {
    rep.warnings.push_back("mean trigger photon number exceeds 0.2; "
                           "multiphoton detections are not negligible");
  }
  return rep;
}

}  // namespace heraldlab::planner
