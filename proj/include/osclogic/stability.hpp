#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "osclogic/dynamics.hpp"
#include "osclogic/rng.hpp"

namespace osclogic {

// Autonomous phase field psi -> dpsi/dtau.
using PhaseField = std::function<VecX(const VecX&)>;

enum class StabilityClass { Stable, Unstable, NonHyperbolic };

// Stable iff every real part < -margin, unstable iff some real part > margin.
StabilityClass classify(const Eigen::VectorXcd& eigenvalues, double margin = 1e-9);

const char* to_string(StabilityClass c);

// Central differences; step must lie in [1e-7, 1e-4].
MatX numeric_jacobian(const PhaseField& rhs, const VecX& psi, double step = 1e-6);

// Damped-Newton equilibrium search seeded on a uniform grid over
// [0, 2pi)^dim (grid_per_axis >= 4 points per axis). Results are wrapped to
// (-pi, pi], deduplicated modulo 2pi within 1e-6 and sorted
// lexicographically. Seeds whose iteration fails to converge are skipped.
std::vector<VecX> find_equilibria(const PhaseField& rhs, int dim, int grid_per_axis);

// Coefficients (1, c2, c1, c0) of the cubic whose roots are the three-node
// cell's eigenvalues at the origin equilibrium in OR mode:
// lambda^3 + (2 gamma_i + 3 gamma) lambda^2 + (gamma_i^2 + 4 gamma_i gamma) lambda
//          + (gamma_i^2 gamma - 4 gamma^3).
// Requires gamma_i > 2 gamma > 0 (all coefficients then strictly positive).
std::array<double, 4> or_char_poly(double gamma_i, double gamma);

// Gate families with closed-form certificates.
enum class CertifiedGate { Not, Majority };

// Certificate function value V(psi) anchored at the certified equilibrium
// `target` (V(target) = 0 by the sign constants chosen from the target).
//
// Not:      psi = (psi_j, psi_k), drives = (psi_Dj), gains = (rho, gamma);
//           targets (0, pi) for psi_Dj = 0 and (pi, 0) for psi_Dj = pi.
// Majority: psi = (psi_i, psi_j, psi_k), drives = (psi_Di, psi_Dj, psi_D),
//           gains = (gamma_i, gamma_j, gamma); targets follow the drive bits
//           with the output entry carrying the AND (psi_D = 0) or OR
//           (psi_D = pi) of the inputs.
// Throws DomainError when target/drives are not a listed equilibrium pair.
double liapunov_value(CertifiedGate kind, const VecX& psi, const VecX& drives,
                      const VecX& gains, const VecX& target);

struct LiapunovCertificate {
  double value_at_eq = 0.0;
  double min_over_punctured_ball = 0.0;  // grid-sampled at 1e-2 resolution
  double max_descent_violation = 0.0;    // worst V increase per step
  double descent_budget = 0.0;           // 10*h^5
  int n_escaped = 0;
  int n_violations = 0;
  int worst_seed = -1;

  bool passed() const {
    return min_over_punctured_ball > 0.0 && n_escaped == 0 && n_violations == 0 &&
           std::abs(value_at_eq) <= 1e-15;
  }
};

// Samples n_trajectories seeds in the punctured ball around `target`,
// integrates the matching averaged gate model, and verifies V never
// increases by more than 10*h^5 per step; also grid-checks V > 0 on the
// punctured ball. ball_radius <= 0.5.
LiapunovCertificate liapunov_descent_check(CertifiedGate kind, const VecX& gains,
                                           const VecX& drives, const VecX& target,
                                           int n_trajectories, double ball_radius,
                                           Rng& rng, double h = 0.02);

struct EquilibriumReport {
  VecX point;
  MatX jacobian;
  Eigen::VectorXcd eigenvalues;
  StabilityClass classification = StabilityClass::NonHyperbolic;
  std::optional<LiapunovCertificate> liapunov;
};

EquilibriumReport analyze_equilibrium(const PhaseField& rhs, const VecX& point,
                                      double jacobian_step = 1e-6);

}  // namespace osclogic
