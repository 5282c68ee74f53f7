#include "osclogic/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "osclogic/integrator.hpp"
#include "osclogic/phase_model.hpp"

namespace osclogic {

StabilityClass classify(const Eigen::VectorXcd& eigenvalues, double margin) {
  double max_re = -1e300;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    max_re = std::max(max_re, eigenvalues[i].real());
  }
  if (max_re > margin) return StabilityClass::Unstable;
  if (max_re < -margin) return StabilityClass::Stable;
  return StabilityClass::NonHyperbolic;
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "stable";
    case StabilityClass::Unstable: return "unstable";
    case StabilityClass::NonHyperbolic: return "non-hyperbolic";
  }
  return "?";
}

MatX numeric_jacobian(const PhaseField& rhs, const VecX& psi, double step) {
  if (!(step >= 1e-7 && step <= 1e-4)) {
    throw DomainError("jacobian step must lie in [1e-7, 1e-4]");
  }
  const auto dim = psi.size();
  MatX jac(dim, dim);
  VecX probe = psi;
  for (Eigen::Index j = 0; j < dim; ++j) {
    probe[j] = psi[j] + step;
    const VecX fp = rhs(probe);
    probe[j] = psi[j] - step;
    const VecX fm = rhs(probe);
    probe[j] = psi[j];
    jac.col(j) = (fp - fm) / (2.0 * step);
  }
  return jac;
}

namespace {

bool newton_polish(const PhaseField& rhs, VecX& psi) {
  double fnorm = rhs(psi).lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < 60; ++iter) {
    if (fnorm < 1e-13) return true;
    const VecX f = rhs(psi);
    const MatX jac = numeric_jacobian(rhs, psi, 1e-6);
    const VecX delta = jac.fullPivLu().solve(-f);
    if (!delta.allFinite()) return false;
    double lambda = 1.0;
    while (lambda >= 1e-6) {
      const VecX trial = psi + lambda * delta;
      const double trial_norm = rhs(trial).lpNorm<Eigen::Infinity>();
      if (trial_norm < fnorm) {
        psi = trial;
        fnorm = trial_norm;
        break;
      }
      lambda *= 0.5;
    }
    if (lambda < 1e-6) return fnorm < 1e-10;
  }
  return fnorm < 1e-10;
}

bool same_mod_2pi(const VecX& a, const VecX& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(wrap_phase(a[i] - b[i])) > 1e-6) return false;
  }
  return true;
}

}  // namespace

std::vector<VecX> find_equilibria(const PhaseField& rhs, int dim, int grid_per_axis) {
  if (dim < 1) throw DomainError("dimension must be >= 1");
  if (grid_per_axis < 4) throw DomainError("need at least 4 grid seeds per axis");

  long long n_seeds = 1;
  for (int d = 0; d < dim; ++d) n_seeds *= grid_per_axis;

  std::vector<VecX> found;
  for (long long s = 0; s < n_seeds; ++s) {
    VecX psi(dim);
    long long rest = s;
    for (int d = 0; d < dim; ++d) {
      psi[d] = kTwoPi * static_cast<double>(rest % grid_per_axis) / grid_per_axis;
      rest /= grid_per_axis;
    }
    if (!newton_polish(rhs, psi)) continue;
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = wrap_phase(psi[i]);
    bool duplicate = false;
    for (const auto& q : found) {
      if (same_mod_2pi(psi, q)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) found.push_back(psi);
  }
  std::sort(found.begin(), found.end(), [](const VecX& a, const VecX& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  });
  return found;
}

std::array<double, 4> or_char_poly(double gamma_i, double gamma) {
  if (!(gamma > 0.0) || !(gamma_i > 2.0 * gamma)) {
    throw DomainError("or_char_poly requires gamma_i > 2*gamma > 0");
  }
  return {1.0, 2.0 * gamma_i + 3.0 * gamma, gamma_i * gamma_i + 4.0 * gamma_i * gamma,
          gamma_i * gamma_i * gamma - 4.0 * gamma * gamma * gamma};
}

namespace {

bool is_binary_phase(double v) {
  const double w = std::abs(wrap_phase(v));
  return w < 1e-12 || std::abs(w - 0.5 * kTwoPi) < 1e-12;
}

int phase_bit(double v) { return std::abs(wrap_phase(v)) > 1.0 ? 1 : 0; }

double sign_constant(double target_entry) {
  // +1 at an anti-phase entry, -1 at an in-phase entry
  return phase_bit(target_entry) ? 1.0 : -1.0;
}

double pair_sign_constant(double ta, double tb) {
  return phase_bit(wrap_phase(ta - tb)) ? 1.0 : -1.0;
}

void check_not_target(const VecX& drives, const VecX& target) {
  if (drives.size() != 1 || target.size() != 2) {
    throw DomainError("inverter certificate expects 1 drive and a 2-d target");
  }
  if (!is_binary_phase(drives[0]) || !is_binary_phase(target[0]) ||
      !is_binary_phase(target[1])) {
    throw DomainError("drives and target must be multiples of pi");
  }
  const int bj = phase_bit(target[0]);
  const int bk = phase_bit(target[1]);
  if (phase_bit(drives[0]) != bj || bk != 1 - bj) {
    throw DomainError("target is not a listed inverter equilibrium for this drive");
  }
}

void check_majority_target(const VecX& drives, const VecX& target) {
  if (drives.size() != 3 || target.size() != 3) {
    throw DomainError("majority certificate expects 3 drives and a 3-d target");
  }
  for (Eigen::Index i = 0; i < 3; ++i) {
    if (!is_binary_phase(drives[i]) || !is_binary_phase(target[i])) {
      throw DomainError("drives and target must be multiples of pi");
    }
  }
  const int b1 = phase_bit(drives[0]);
  const int b2 = phase_bit(drives[1]);
  const bool or_mode = phase_bit(drives[2]) == 1;
  const int out = or_mode ? (b1 | b2) : (b1 & b2);
  if (phase_bit(target[0]) != b1 || phase_bit(target[1]) != b2 ||
      phase_bit(target[2]) != out) {
    throw DomainError("target is not a listed majority equilibrium for these drives");
  }
}

}  // namespace

double liapunov_value(CertifiedGate kind, const VecX& psi, const VecX& drives,
                      const VecX& gains, const VecX& target) {
  if (kind == CertifiedGate::Not) {
    check_not_target(drives, target);
    const double rho = gains[0], gamma = gains[1];
    const double nj = sign_constant(target[0]);
    const double njk = pair_sign_constant(target[0], target[1]);  // always +1
    return -gamma * std::cos(drives[0]) * (std::cos(psi[0]) + nj) +
           rho * (std::cos(psi[0] - psi[1]) + njk);
  }
  check_majority_target(drives, target);
  const double gi = gains[0], gj = gains[1], g = gains[2];
  const double cdi = std::cos(drives[0]);
  const double cdj = std::cos(drives[1]);
  const double cd = std::cos(drives[2]);
  const double ni = sign_constant(target[0]);
  const double nj = sign_constant(target[1]);
  const double nk = sign_constant(target[2]);
  const double nij = pair_sign_constant(target[0], target[1]);
  const double nik = pair_sign_constant(target[0], target[2]);
  const double njk = pair_sign_constant(target[1], target[2]);
  // The output-node term carries cos(psi_D); for the AND setting psi_D = 0
  // this is the plain -gamma (cos psi_k + N_k) term.
  return -(gi * cdi + g * cd) * (std::cos(psi[0]) + ni) -
         (gj * cdj + g * cd) * (std::cos(psi[1]) + nj) -
         g * cd * (std::cos(psi[2]) + nk) -
         g * (std::cos(psi[0] - psi[1]) + std::cos(psi[0] - psi[2]) +
              std::cos(psi[1] - psi[2]) + nij + nik + njk);
}

LiapunovCertificate liapunov_descent_check(CertifiedGate kind, const VecX& gains,
                                           const VecX& drives, const VecX& target,
                                           int n_trajectories, double ball_radius,
                                           Rng& rng, double h) {
  if (!(ball_radius > 0.0) || ball_radius > 0.5) {
    throw DomainError("ball radius must lie in (0, 0.5]");
  }
  const int dim = static_cast<int>(target.size());

  PhaseField rhs;
  if (kind == CertifiedGate::Not) {
    const double rho = gains[0], gamma = gains[1], psi_dj = drives[0];
    rhs = [=](const VecX& p) {
      const Vec2 d = not_phase_rhs(p[0], p[1], psi_dj, rho, gamma);
      return VecX(d);
    };
  } else {
    const Vec3 dr(drives[0], drives[1], drives[2]);
    const Vec3 ga(gains[0], gains[1], gains[2]);
    rhs = [=](const VecX& p) {
      const Vec3 d = majority_phase_rhs(Vec3(p[0], p[1], p[2]), dr, ga);
      return VecX(d);
    };
  }
  const auto value = [&](const VecX& p) {
    return liapunov_value(kind, p, drives, gains, target);
  };

  LiapunovCertificate cert;
  cert.value_at_eq = value(target);
  cert.descent_budget = 10.0 * std::pow(h, 5);

  // Positivity on the punctured ball, grid-checked at 1e-2 resolution.
  {
    const double step = 1e-2;
    const int half = static_cast<int>(std::round(ball_radius / step));
    double min_v = 1e300;
    VecX offset = VecX::Zero(dim);
    std::vector<int> idx(static_cast<std::size_t>(dim), -half);
    while (true) {
      double norm2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        offset[d] = step * idx[static_cast<std::size_t>(d)];
        norm2 += offset[d] * offset[d];
      }
      if (norm2 > 1e-30 && norm2 <= ball_radius * ball_radius) {
        min_v = std::min(min_v, value(target + offset));
      }
      int d = 0;
      while (d < dim && ++idx[static_cast<std::size_t>(d)] > half) {
        idx[static_cast<std::size_t>(d)] = -half;
        ++d;
      }
      if (d == dim) break;
    }
    cert.min_over_punctured_ball = min_v;
  }

  // Descent along seeded trajectories.
  const double floor = 1e-12;
  for (int t = 0; t < n_trajectories; ++t) {
    VecX dir(dim);
    for (int d = 0; d < dim; ++d) {
      const double u1 = std::max(rng.unit(), 1e-12);
      const double u2 = rng.unit();
      dir[d] = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }
    dir.normalize();
    const double radius =
        ball_radius * std::max(std::pow(rng.unit(), 1.0 / dim), 0.05);
    VecX psi = target + radius * dir;

    double v_prev = value(psi);
    double tau = 0.0;
    while (tau < 1500.0 && v_prev > floor) {
      VecX k1 = rhs(psi);
      VecX k2 = rhs(psi + (0.5 * h) * k1);
      VecX k3 = rhs(psi + (0.5 * h) * k2);
      VecX k4 = rhs(psi + h * k3);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      tau += h;
      const double v_now = value(psi);
      const double violation = v_now - v_prev;
      if (violation > cert.max_descent_violation) {
        cert.max_descent_violation = violation;
        cert.worst_seed = t;
      }
      if (violation > cert.descent_budget) ++cert.n_violations;
      v_prev = v_now;
      double dist2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double w = wrap_phase(psi[d] - target[d]);
        dist2 += w * w;
      }
      if (dist2 > (ball_radius + 1e-9) * (ball_radius + 1e-9)) {
        ++cert.n_escaped;
        if (cert.worst_seed < 0) cert.worst_seed = t;
        break;
      }
    }
  }
  return cert;
}

EquilibriumReport analyze_equilibrium(const PhaseField& rhs, const VecX& point,
                                      double jacobian_step) {
  EquilibriumReport report;
  report.point = point;
  report.jacobian = numeric_jacobian(rhs, point, jacobian_step);
  Eigen::EigenSolver<MatX> solver(report.jacobian);
  report.eigenvalues = solver.eigenvalues();
  report.classification = classify(report.eigenvalues);
  return report;
}

}  // namespace osclogic
