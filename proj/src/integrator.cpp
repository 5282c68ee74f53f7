#include "osclogic/integrator.hpp"

#include <cmath>

namespace osclogic {

namespace {

bool all_finite(const VecX& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

}  // namespace

VecX rk4_step(const Field& field, const VecX& state, double tau, double h) {
  if (!(h > 0.0)) throw DomainError("step size must be positive");
  const double hh = 0.5 * h;
  const auto dim = state.size();

  const VecX k1 = field(state, tau);
  if (!all_finite(k1)) throw IntegrationError(tau, "non-finite stage derivative");

  VecX tmp(dim);
  for (Eigen::Index i = 0; i < dim; ++i) tmp[i] = state[i] + hh * k1[i];
  const VecX k2 = field(tmp, tau + hh);
  if (!all_finite(k2)) throw IntegrationError(tau, "non-finite stage derivative");

  for (Eigen::Index i = 0; i < dim; ++i) tmp[i] = state[i] + hh * k2[i];
  const VecX k3 = field(tmp, tau + hh);
  if (!all_finite(k3)) throw IntegrationError(tau, "non-finite stage derivative");

  for (Eigen::Index i = 0; i < dim; ++i) tmp[i] = state[i] + h * k3[i];
  const VecX k4 = field(tmp, tau + h);
  if (!all_finite(k4)) throw IntegrationError(tau, "non-finite stage derivative");

  VecX out(dim);
  const double h6 = h / 6.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    out[i] = state[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

Trajectory integrate(const Field& field, const VecX& state0, double tau_end,
                     double h, int sample_every, TrajectoryKind kind) {
  if (!(tau_end > 0.0)) throw DomainError("tau_end must be positive");
  if (!(h > 0.0)) throw DomainError("step size must be positive");
  if (sample_every < 1) throw DomainError("sample_every must be >= 1");

  const double stride = h * sample_every;
  // Tolerate one part in 1e9 of grid rounding so tau_end = K*stride counts.
  const long long n_samples = static_cast<long long>(std::floor(tau_end / stride + 1e-9));

  Trajectory traj;
  traj.kind = kind;
  traj.h = h;
  traj.sample_every = sample_every;
  traj.times.reserve(static_cast<std::size_t>(n_samples) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_samples) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(state0);

  VecX state = state0;
  for (long long s = 0; s < n_samples; ++s) {
    for (int k = 0; k < sample_every; ++k) {
      const long long step = s * sample_every + k;
      state = rk4_step(field, state, static_cast<double>(step) * h, h);
    }
    traj.times.push_back(static_cast<double>((s + 1) * sample_every) * h);
    traj.states.push_back(state);
  }
  return traj;
}

double wrap_phase(double x) {
  double w = std::remainder(x, kTwoPi);  // in [-pi, pi]
  if (w <= -0.5 * kTwoPi) w += kTwoPi;
  return w;
}

double circular_mean(const std::vector<double>& angles) {
  double s = 0.0, c = 0.0;
  for (double a : angles) {
    s += std::sin(a);
    c += std::cos(a);
  }
  return std::atan2(s, c);
}

namespace {

// Least-squares slope of y over uniformly spaced samples with spacing dt;
// y is unwrapped phase, so this is the secular drift rate.
double fit_slope(const std::vector<double>& y, double dt) {
  const auto n = y.size();
  if (n < 2) return 0.0;
  const double tm = 0.5 * static_cast<double>(n - 1);
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double t = static_cast<double>(s) - tm;
    num += t * y[s];
    den += t * t;
  }
  return num / (den * dt);
}

}  // namespace

LockReport detect_lock(const Trajectory& traj, std::optional<int> reference_node,
                       double window, double tol) {
  const int n_nodes = traj.n_nodes();
  if (n_nodes == 0 || traj.states.size() < 2) {
    throw DomainError("trajectory too short for lock detection");
  }
  const double dt = traj.sample_spacing();
  const auto total = traj.states.size();
  auto n_window = static_cast<std::size_t>(std::floor(window / dt + 1e-9)) + 1;
  if (n_window < 2 || n_window > total) {
    throw DomainError("lock window does not fit inside the trajectory");
  }
  const std::size_t first = total - n_window;
  if (reference_node && (*reference_node < 0 || *reference_node >= n_nodes)) {
    throw DomainError("reference node out of range");
  }

  const bool full = traj.kind == TrajectoryKind::FullState;
  // Deviations per node over the window.
  std::vector<std::vector<double>> psi(static_cast<std::size_t>(n_nodes));
  for (auto& v : psi) v.reserve(n_window);

  for (std::size_t s = first; s < total; ++s) {
    const VecX& st = traj.states[s];
    double theta_ref;
    if (full) {
      if (reference_node) {
        theta_ref = std::atan2(st[2 * *reference_node + 1], st[2 * *reference_node]);
      } else {
        const Vec2 clock = reference_cycle_state(traj.times[s]);
        theta_ref = std::atan2(clock[1], clock[0]);
      }
    } else {
      theta_ref = reference_node ? st[*reference_node] : 0.0;
    }
    for (int i = 0; i < n_nodes; ++i) {
      double value;
      if (full) {
        const double x = st[2 * i];
        const double y = st[2 * i + 1];
        if (std::hypot(x, y) < 0.1) {
          throw NotOscillatingError("node " + std::to_string(i) +
                                    " amplitude collapsed inside the lock window");
        }
        value = std::atan2(y, x) - theta_ref;
      } else {
        value = st[i] - theta_ref;
      }
      psi[static_cast<std::size_t>(i)].push_back(wrap_phase(value));
    }
  }

  LockReport report;
  report.phase_diffs = VecX(n_nodes);
  double worst = 0.0;
  std::vector<double> unwrapped(n_window);
  for (int i = 0; i < n_nodes; ++i) {
    const auto& series = psi[static_cast<std::size_t>(i)];
    unwrapped[0] = series[0];
    for (std::size_t s = 1; s < n_window; ++s) {
      unwrapped[s] = unwrapped[s - 1] + wrap_phase(series[s] - series[s - 1]);
    }
    worst = std::max(worst, std::abs(fit_slope(unwrapped, dt)));
    report.phase_diffs[i] = wrap_phase(circular_mean(series));
  }
  report.residual = worst;
  report.locked = worst < tol;
  return report;
}

}  // namespace osclogic
