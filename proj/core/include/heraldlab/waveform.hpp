#pragma once

#include <Eigen/Dense>
#include <string>

#include "heraldlab/errors.hpp"

namespace heraldlab::waveform {

/// Uniform sampling grid t_k = t0 + k dt, k = 0..n-1.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.32e-9;  // 3.125 GS/s record
  int n = 6250;         // 2 us frame

  double t(int k) const { return t0 + k * dt; }
  double duration() const { return (n - 1) * dt; }
  bool operator==(const TimeGrid& o) const {
    return t0 == o.t0 && dt == o.dt && n == o.n;
  }
  void validate() const {
    if (dt <= 0.0 || n < 2) throw DomainError("TimeGrid: need dt > 0, n >= 2");
  }
};

/// Real sampled waveform; unit L2 norm (integral of f^2 dt = 1) after
/// normalize().
struct TemporalWaveform {
  TimeGrid grid;
  Eigen::VectorXd samples;

  double norm2() const { return samples.squaredNorm() * grid.dt; }
  void normalize();
};

/// Modulation function sin[m(t)] in [-1, 1], supported on [t_m1, t_m2].
struct ModulationProgram {
  TimeGrid grid;
  Eigen::VectorXd sin_m;
  double t_m1 = 0.0;
  double t_m2 = 0.0;
  double gamma = 0.0;  // cavity decay rate, rad/s

  void validate() const;
};

struct CavityResponse {
  double gamma = 0.0;
};

/// Normalized cavity impulse response g(t) = sqrt(2 gamma) e^{-gamma t},
/// t >= 0 (relative to the grid origin).
TemporalWaveform cavity_g(double gamma, const TimeGrid& grid);

/// Displacement-light profile h(t) = g(t - t_m2).
TemporalWaveform displacement_profile(double gamma, double t_m2,
                                      const TimeGrid& grid);

struct WaveformAndNorm {
  TemporalWaveform f1;
  double cnorm = 0.0;  // c' with f1(t) = c' e^{gamma (t - t_m2)} sin_m(t)
};

/// Heralded-state waveform implied by a modulation program.
WaveformAndNorm modulation_to_waveform(const ModulationProgram& m);

/// Invert the relation: sin_m(t) = f(t) e^{-gamma (t - t_m2)} / K with K
/// chosen so that max |sin_m| = 1 (deepest modulation, largest success
/// amplitude). Requires the target to vanish after t_m2.
ModulationProgram target_to_modulation(const TemporalWaveform& f_target,
                                       double gamma, double t_m2);

/// AWG drive voltage V(t) = (2 V0 / pi) asin(sin_m(t)). Throws RangeExceeded
/// (with the modulation rescale that would fit) if any |V| > 0.4 V.
Eigen::VectorXd awg_voltage(const ModulationProgram& m, double v0);

/// Squared overlap of two unit-norm waveforms.
double mode_matching(const TemporalWaveform& a, const TemporalWaveform& b);

/// Trigger photon detection-time density: rate(T) = int g^2(T-t) sin_m^2(t) dt
/// (intensity convolution of the cavity response with the carved pulse).
/// Normalized so that the grid integral is 1 when any signal is present.
Eigen::VectorXd detection_rate(const ModulationProgram& m);

struct SuccessWindow {
  double t_start = 0.0;  // = t_m2
  double tau_suc = 0.0;
};

/// Largest window starting at t_m2 with rate/dark_rate >= snr_min. `rate`
/// must be in absolute counts/s units on the program grid.
SuccessWindow success_window(const ModulationProgram& m,
                             const Eigen::VectorXd& rate, double dark_rate,
                             double snr_min);

/// Fraction of the previous pulse's waveform energy still present one
/// repetition period later. Passes (< 1%) determines a usable tau_rep.
double repetition_check(const ModulationProgram& m, double tau_rep);

enum class BuiltinShape {
  ExpRising,             // conventional e^{gamma (t - t_m2)}, t <= t_m2
  Square,                // flat pulse of `width` ending at t_m2
  SquarePulseModulated,  // exp rise carved by a square modulation window
  BalancedTimeBin,       // +/- bins of `width` separated by `gap`, DC-free
};

BuiltinShape builtin_shape_from_name(const std::string& name);

struct BuiltinSpec {
  BuiltinShape shape = BuiltinShape::ExpRising;
  double width = 100e-9;  // pulse or bin width
  double gap = 10e-9;     // BalancedTimeBin only
};

TemporalWaveform builtin_waveform(const BuiltinSpec& spec, const TimeGrid& grid,
                                  double gamma, double t_m2);

}  // namespace heraldlab::waveform
