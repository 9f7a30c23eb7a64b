#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "heraldlab/herald.hpp"

namespace heraldlab::planner {

/// Target state S(r_out) sum_n c[n] |n>, with c normalized and c[N] != 0.
struct TargetState {
  double r_out_target = 0.0;
  Eigen::VectorXcd c;  // length N + 1

  int stellar_rank() const { return static_cast<int>(c.size()) - 1; }
  void validate() const;
};

/// How to resolve the freedom in (r0, r1, T) for a given r_out.
struct Strategy {
  enum class Kind { Symmetric, MaxProb };

  Kind kind = Kind::Symmetric;
  // Symmetric: T = 0.5, r0 = |target| + r0_margin, r1 solved by 1-D root.
  double r0_margin = 0.35;
  // MaxProb: maximize P(n_detect) over a (r0, T) grid under the constraint
  // mean_trigger_photons <= 0.2; fails with NoSolution if best < p_min.
  int n_detect = 1;
  double p_min = 0.0;

  static Strategy symmetric(double margin = 0.35) {
    Strategy s;
    s.kind = Kind::Symmetric;
    s.r0_margin = margin;
    return s;
  }
  static Strategy max_prob(int n_detect, double p_min = 0.0) {
    Strategy s;
    s.kind = Kind::MaxProb;
    s.n_detect = n_detect;
    s.p_min = p_min;
    return s;
  }
};

/// Full recipe for one heralded-state experiment.
struct HeraldingPlan {
  herald::GaussianResourceParams params;
  int n_detect = 0;
  Eigen::VectorXcd cprime;   // projector coefficients C'_0..C'_N
  Eigen::VectorXcd alphas;   // displacement amplitudes alpha_1..alpha_N
  double cnorm = 1.0;        // waveform normalization constant c'
  double predicted_prob = 0.0;
  std::vector<std::string> warnings;
};

struct PlanReport {
  double fidelity = 0.0;
  double prob = 0.0;
  double max_alpha = 0.0;
  double mean_trigger_photons = 0.0;
  double cprime_reexpansion_error = 0.0;
  std::vector<std::string> warnings;
};

/// Invert r_out(r0, r1, T) = r_out_target.
herald::GaussianResourceParams solve_gaussian_params(double r_out_target,
                                                     const Strategy& strategy);

/// Back-substitution of the triangular relation
/// sum_n C'_n sqrt(P(n)) C''_j^(n) = c_j, solved in the order N, N-1, .., 0.
Eigen::VectorXcd solve_cprime(
    const TargetState& target,
    const std::vector<herald::HeraldDecomposition>& table);

/// Roots z_j of sum_n (C'_n / sqrt(n!)) z^n, via companion-matrix
/// eigenvalues; alpha_j = -z_j / (sqrt(N) cnorm). Appends an IllConditioned
/// warning for wildly scaled coefficient sets.
Eigen::VectorXcd alphas_from_cprime(const Eigen::VectorXcd& cprime,
                                    double cnorm,
                                    std::vector<std::string>* warnings = nullptr);

/// Expand prod_j (z / (sqrt(N) cnorm) + alpha_j) and compare with
/// cprime[n] / sqrt(n!) up to one global complex factor; returns the largest
/// coefficient mismatch.
double cprime_reexpansion_error(const Eigen::VectorXcd& cprime,
                                const Eigen::VectorXcd& alphas, double cnorm);

/// Steps 2-5 of the parameter-setting procedure. When `fixed_params` is
/// non-null those resource parameters are used as-is (their r_out must match
/// the target within 1e-6).
HeraldingPlan plan(const TargetState& target, double cnorm,
                   const Strategy& strategy, int cutoff,
                   const herald::GaussianResourceParams* fixed_params = nullptr);

/// Forward-simulate the plan and compare against the target.
PlanReport verify_plan(const HeraldingPlan& plan, const TargetState& target,
                       int cutoff);

/// The target as a Fock vector: S(r_out) sum c[n] |n>, normalized.
fock::FockVector target_fock_vector(const TargetState& target, int cutoff);

}  // namespace heraldlab::planner
