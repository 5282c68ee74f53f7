#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "osclogic/dynamics.hpp"
#include "osclogic/errors.hpp"

namespace osclogic {

// Right-hand side f(state, tau) -> d(state)/dtau.
using Field = std::function<VecX(const VecX&, double)>;

enum class TrajectoryKind { FullState, PhaseState };

// Uniformly sampled solution. times[s] = (s * sample_every) * h exactly, so
// repeated runs produce identical bytes.
struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::FullState;
  double h = 0.0;
  int sample_every = 1;
  std::vector<double> times;
  std::vector<VecX> states;

  int n_nodes() const {
    const auto dim = states.empty() ? 0 : static_cast<int>(states.front().size());
    return kind == TrajectoryKind::FullState ? dim / 2 : dim;
  }
  double sample_spacing() const { return h * sample_every; }
};

// One classical 4-stage step. Throws IntegrationError (carrying the failure
// time) if any stage evaluates non-finite.
VecX rk4_step(const Field& field, const VecX& state, double tau, double h);

// Fixed grid tau_s = s*h; samples every `sample_every` steps starting at the
// initial state. Produces floor(tau_end/(sample_every*h)) + 1 samples, the
// last at the largest sampled grid time <= tau_end (within one grid ulp).
Trajectory integrate(const Field& field, const VecX& state0, double tau_end,
                     double h, int sample_every,
                     TrajectoryKind kind = TrajectoryKind::FullState);

inline constexpr double kDefaultLockWindow = 10.0 * kTwoPi;
inline constexpr double kDefaultLockTol = 1e-3;  // rad per unit tau

// Run settings shared by the CLI and the gate harness. The perturbation
// magnitude seeds small random initial phase offsets that break ties at
// unstable equilibria.
struct SimConfig {
  double tau_end = 3000.0;
  double h = 0.01;
  int sample_every = 10;
  std::uint64_t seed = 42;
  double lock_window = kDefaultLockWindow;
  double lock_tol = kDefaultLockTol;
  double perturbation = 0.1;
};

struct LockReport {
  bool locked = false;
  VecX phase_diffs;  // circular-mean deviation per node, wrapped to (-pi, pi]
  double residual = 0.0;  // worst drift rate over the window, rad per unit tau
};

// Wrap to (-pi, pi].
double wrap_phase(double x);

double circular_mean(const std::vector<double>& angles);

// Steady phase-lock detection over the window at the tail of `traj`.
//
// Full-state trajectories: extracts theta_i = atan2(y_i, x_i) and deviations
// psi_i = wrap(theta_i - theta_ref), where theta_ref comes from
// `reference_node` or, if absent, from the ideal reference cycle clock.
// Phase-state trajectories already hold deviations; a reference node, when
// given, is subtracted.
//
// The drift rate per node is the absolute least-squares slope of the
// unwrapped deviation over the window; this estimates secular drift while
// rejecting the O(coupling) periodic ripple that full-state phase extraction
// carries on the locked orbit. locked <=> max drift rate < tol.
//
// Throws NotOscillatingError if a node's radius falls below 0.1 inside the
// window (full-state only), DomainError if the window does not fit.
LockReport detect_lock(const Trajectory& traj, std::optional<int> reference_node,
                       double window = kDefaultLockWindow,
                       double tol = kDefaultLockTol);

}  // namespace osclogic
