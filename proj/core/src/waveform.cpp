#include "heraldlab/waveform.hpp"

#include <algorithm>
#include <cmath>

namespace heraldlab::waveform {

namespace {

constexpr double kAwgVoltageLimit = 0.4;  // volts
constexpr double kKernelFloor = 1e-12;    // relative e^{-gamma t} support cut

int index_at_or_after(const TimeGrid& g, double t) {
  const int k = static_cast<int>(std::ceil((t - g.t0) / g.dt - 1e-9));
  return std::clamp(k, 0, g.n - 1);
}

}  // namespace

void TemporalWaveform::normalize() {
  const double n = std::sqrt(norm2());
  if (n > 0.0) samples /= n;
}

void ModulationProgram::validate() const {
  grid.validate();
  if (gamma <= 0.0) throw DomainError("ModulationProgram: gamma must be > 0");
  if (!(t_m1 <= t_m2)) throw DomainError("ModulationProgram: t_m1 > t_m2");
  if (sin_m.size() != grid.n) {
    throw DomainError("ModulationProgram: sample count does not match grid");
  }
  if (sin_m.size() > 0 && sin_m.cwiseAbs().maxCoeff() > 1.0 + 1e-12) {
    throw DomainError("ModulationProgram: |sin_m| must be <= 1");
  }
}

TemporalWaveform cavity_g(double gamma, const TimeGrid& grid) {
  grid.validate();
  if (gamma <= 0.0) throw DomainError("cavity_g: gamma must be > 0");
  TemporalWaveform g;
  g.grid = grid;
  g.samples.resize(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    const double t = grid.t(k);
    g.samples[k] = t >= 0.0 ? std::exp(-gamma * t) : 0.0;
  }
  g.normalize();
  return g;
}

TemporalWaveform displacement_profile(double gamma, double t_m2,
                                      const TimeGrid& grid) {
  grid.validate();
  if (gamma <= 0.0) throw DomainError("displacement_profile: gamma must be > 0");
  TemporalWaveform h;
  h.grid = grid;
  h.samples.resize(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    const double t = grid.t(k) - t_m2;
    h.samples[k] = t >= 0.0 ? std::exp(-gamma * t) : 0.0;
  }
  h.normalize();
  return h;
}

WaveformAndNorm modulation_to_waveform(const ModulationProgram& m) {
  m.validate();
  if (m.sin_m.cwiseAbs().maxCoeff() == 0.0) {
    throw EmptyModulation("modulation_to_waveform: sin_m is identically zero");
  }
  Eigen::VectorXd raw(m.grid.n);
  for (int k = 0; k < m.grid.n; ++k) {
    raw[k] = std::exp(m.gamma * (m.grid.t(k) - m.t_m2)) * m.sin_m[k];
  }
  const double raw_norm = std::sqrt(raw.squaredNorm() * m.grid.dt);
  WaveformAndNorm out;
  out.f1.grid = m.grid;
  out.f1.samples = raw / raw_norm;
  out.cnorm = 1.0 / raw_norm;
  return out;
}

ModulationProgram target_to_modulation(const TemporalWaveform& f_target,
                                       double gamma, double t_m2) {
  f_target.grid.validate();
  if (gamma <= 0.0) throw DomainError("target_to_modulation: gamma must be > 0");

  const TimeGrid& grid = f_target.grid;
  const int k_end = index_at_or_after(grid, t_m2);
  for (int k = 0; k < grid.n; ++k) {
    if (grid.t(k) > t_m2 + 0.5 * grid.dt && f_target.samples[k] != 0.0) {
      throw UnreachableWaveform(
          "target_to_modulation: target has support after t_m2");
    }
  }

  ModulationProgram m;
  m.grid = grid;
  m.gamma = gamma;
  m.t_m2 = t_m2;
  m.sin_m.setZero(grid.n);
  for (int k = 0; k <= k_end; ++k) {
    m.sin_m[k] = f_target.samples[k] * std::exp(-gamma * (grid.t(k) - t_m2));
  }
  const double peak = m.sin_m.cwiseAbs().maxCoeff();
  if (peak == 0.0) {
    throw EmptyModulation("target_to_modulation: target waveform is zero");
  }
  m.sin_m /= peak;  // K = peak maximizes the modulation depth

  // Report the actual support of the carved pulse.
  int first = grid.n, last = -1;
  for (int k = 0; k < grid.n; ++k) {
    if (m.sin_m[k] != 0.0) {
      first = std::min(first, k);
      last = std::max(last, k);
    }
  }
  m.t_m1 = grid.t(first);
  // Keep the caller-specified modulation end; detection later than t_m2 is
  // what makes the projector detection-time independent.
  return m;
}

Eigen::VectorXd awg_voltage(const ModulationProgram& m, double v0) {
  m.validate();
  if (v0 <= 0.0) throw DomainError("awg_voltage: V0 must be > 0");
  const double peak = m.sin_m.cwiseAbs().maxCoeff();
  const double max_volt = (2.0 * v0 / M_PI) * std::asin(std::min(1.0, peak));
  if (max_volt > kAwgVoltageLimit + 1e-12) {
    // Largest modulation amplitude whose voltage still fits the range.
    const double fit = std::sin(M_PI * kAwgVoltageLimit / (2.0 * v0));
    throw RangeExceeded("awg_voltage: |V| exceeds 0.4 V; rescale sin_m",
                        fit / peak);
  }
  Eigen::VectorXd volts(m.grid.n);
  for (int k = 0; k < m.grid.n; ++k) {
    volts[k] = (2.0 * v0 / M_PI) * std::asin(std::clamp(m.sin_m[k], -1.0, 1.0));
  }
  return volts;
}

double mode_matching(const TemporalWaveform& a, const TemporalWaveform& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("mode_matching: grids differ");
  const double ip = a.samples.dot(b.samples) * a.grid.dt;
  return ip * ip;
}

Eigen::VectorXd detection_rate(const ModulationProgram& m) {
  m.validate();
  const int n = m.grid.n;
  const double dt = m.grid.dt;

  // g^2 kernel, cut where it has decayed below a relative floor.
  const int kern_len = std::min<int>(
      n, static_cast<int>(std::ceil(-std::log(kKernelFloor) /
                                    (2.0 * m.gamma * dt))) + 1);
  Eigen::VectorXd kern(kern_len);
  for (int k = 0; k < kern_len; ++k) {
    kern[k] = 2.0 * m.gamma * std::exp(-2.0 * m.gamma * k * dt);
  }

  Eigen::VectorXd intensity = m.sin_m.array().square();
  Eigen::VectorXd rate = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double w = intensity[j];
    if (w == 0.0) continue;
    const int kmax = std::min(kern_len, n - j);
    for (int k = 0; k < kmax; ++k) {
      rate[j + k] += w * kern[k];
    }
  }
  rate *= dt;
  const double total = rate.sum() * dt;
  if (total > 0.0) rate /= total;  // unit-area density over the grid
  return rate;
}

SuccessWindow success_window(const ModulationProgram& m,
                             const Eigen::VectorXd& rate, double dark_rate,
                             double snr_min) {
  m.validate();
  if (rate.size() != m.grid.n) {
    throw GridMismatch("success_window: rate array does not match grid");
  }
  if (dark_rate < 0.0 || snr_min < 0.0) {
    throw DomainError("success_window: dark_rate and snr_min must be >= 0");
  }

  SuccessWindow win;
  win.t_start = m.t_m2;
  const int k0 = index_at_or_after(m.grid, m.t_m2);
  const double threshold = dark_rate * snr_min;
  int k = k0;
  while (k < m.grid.n && rate[k] >= threshold) ++k;
  win.tau_suc = std::max(0.0, m.grid.t(std::max(k - 1, k0)) - m.t_m2);
  if (k == m.grid.n) win.tau_suc = m.grid.t(m.grid.n - 1) - m.t_m2;
  if (k == k0) win.tau_suc = 0.0;
  return win;
}

double repetition_check(const ModulationProgram& m, double tau_rep) {
  m.validate();
  if (tau_rep <= 0.0) throw DomainError("repetition_check: tau_rep must be > 0");
  // Energy of the heralded-waveform integrand e^{gamma (t - t_m2)} sin_m(t)
  // contributed by the previous pulse, i.e. the same pulse shifted one
  // period earlier: a shift of -tau_rep scales the energy by
  // e^{-2 gamma tau_rep} exactly, evaluated here on the grid.
  double cur = 0.0, prev = 0.0;
  for (int k = 0; k < m.grid.n; ++k) {
    const double s = m.sin_m[k];
    if (s == 0.0) continue;
    const double w = std::exp(m.gamma * (m.grid.t(k) - m.t_m2)) * s;
    cur += w * w;
    const double wp =
        std::exp(m.gamma * (m.grid.t(k) - tau_rep - m.t_m2)) * s;
    prev += wp * wp;
  }
  if (cur == 0.0) {
    throw EmptyModulation("repetition_check: modulation is zero");
  }
  return prev / cur;
}

BuiltinShape builtin_shape_from_name(const std::string& name) {
  if (name == "exp_rising") return BuiltinShape::ExpRising;
  if (name == "square") return BuiltinShape::Square;
  if (name == "square_pulse_modulated") return BuiltinShape::SquarePulseModulated;
  if (name == "balanced_time_bin") return BuiltinShape::BalancedTimeBin;
  throw DomainError("unknown builtin waveform: " + name);
}

TemporalWaveform builtin_waveform(const BuiltinSpec& spec, const TimeGrid& grid,
                                  double gamma, double t_m2) {
  grid.validate();
  if (gamma <= 0.0) throw DomainError("builtin_waveform: gamma must be > 0");
  TemporalWaveform f;
  f.grid = grid;
  f.samples.setZero(grid.n);

  auto fill = [&](double lo, double hi, auto shape) {
    for (int k = 0; k < grid.n; ++k) {
      const double t = grid.t(k);
      if (t >= lo - 0.5 * grid.dt && t <= hi + 0.5 * grid.dt) {
        f.samples[k] = shape(t);
      }
    }
  };

  switch (spec.shape) {
    case BuiltinShape::ExpRising:
      fill(grid.t0, t_m2, [&](double t) { return std::exp(gamma * (t - t_m2)); });
      break;
    case BuiltinShape::Square:
      fill(t_m2 - spec.width, t_m2, [](double) { return 1.0; });
      break;
    case BuiltinShape::SquarePulseModulated:
      // What a square modulation window of `width` produces: the exponential
      // rise carved to the window.
      fill(t_m2 - spec.width, t_m2,
           [&](double t) { return std::exp(gamma * (t - t_m2)); });
      break;
    case BuiltinShape::BalancedTimeBin: {
      const double w = spec.width, g = spec.gap;
      // Equal-width bins of opposite sign; identical sample counts make the
      // time integral cancel exactly.
      const int k_hi_end = index_at_or_after(grid, t_m2);
      const int bin_samples = std::max(1, static_cast<int>(std::round(w / grid.dt)));
      const int gap_samples = std::max(0, static_cast<int>(std::round(g / grid.dt)));
      const int k_hi_start = k_hi_end - bin_samples + 1;
      const int k_lo_end = k_hi_start - gap_samples - 1;
      const int k_lo_start = k_lo_end - bin_samples + 1;
      if (k_lo_start < 0) {
        throw DomainError("balanced_time_bin: bins do not fit on the grid");
      }
      for (int k = k_lo_start; k <= k_lo_end; ++k) f.samples[k] = 1.0;
      for (int k = k_hi_start; k <= k_hi_end; ++k) f.samples[k] = -1.0;
      break;
    }
  }
  if (f.samples.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("builtin_waveform: empty support on this grid");
  }
  f.normalize();
  return f;
}

}  // namespace heraldlab::waveform
