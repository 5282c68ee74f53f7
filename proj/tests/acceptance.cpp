// Acceptance suite: one check per shipped claim, each printed as a single
// PASS/FAIL line with the measured numbers. Run with no arguments for the
// whole suite or with a criterion number to run one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "osclogic/batch.hpp"
#include "osclogic/csv.hpp"
#include "osclogic/dynamics.hpp"
#include "osclogic/gates.hpp"
#include "osclogic/integrator.hpp"
#include "osclogic/netlist.hpp"
#include "osclogic/phase_model.hpp"
#include "osclogic/stability.hpp"

using namespace osclogic;

namespace {

const double kPi = 0.5 * kTwoPi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// --- 1 ------------------------------------------------------------------

LockReport register_lock(double rho, double gamma, double* seconds) {
  NetworkSpec net;
  net.oscillators = {{"r", 0.1}, {"k", 0.1}};
  net.edges = {{"r", "k", rho, gamma, true}};
  net.reference = "r";
  SimConfig sim;  // tau_end = 3000, h = 0.01, seed = 42
  const auto start = std::chrono::steady_clock::now();
  const LockReport report = simulate_to_lock(net, Engine::FullState, sim);
  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Outcome check_register() {
  Outcome out;
  double t_in = 0.0, t_anti = 0.0;
  const LockReport in_phase = register_lock(0.05, 0.10, &t_in);
  const LockReport anti_phase = register_lock(0.10, 0.05, &t_anti);
  const double dev_in = std::abs(in_phase.phase_diffs[1]);
  const double dev_anti = std::abs(std::abs(anti_phase.phase_diffs[1]) - kPi);
  const bool in_ok = in_phase.locked && dev_in < 0.05;
  const bool anti_ok = anti_phase.locked && dev_anti < 0.05;
  const bool time_ok = t_in < 5.0 && t_anti < 5.0;
  out.pass = in_ok && anti_ok && time_ok;
  std::ostringstream os;
  os << "in-phase |psi_k|=" << fmt(dev_in) << (in_ok ? " < 0.05" : " NOT < 0.05")
     << "; anti-phase ||psi_k|-pi|=" << fmt(dev_anti)
     << (anti_ok ? " < 0.05" : " NOT < 0.05")
     << " (slave runs at reduced amplitude in this regime; offset is O(alpha))"
     << "; runtimes " << fmt(t_in) << "s/" << fmt(t_anti) << "s";
  out.detail = os.str();
  return out;
}

// --- 2 ------------------------------------------------------------------

Outcome check_not_gate() {
  Outcome out;
  SimConfig sim;
  std::ostringstream os;

  const auto phase_rows = run_truth_table(make_not_gate(), Engine::PhaseModel, sim);
  double worst_phase = 0.0;
  bool decode_ok = true;
  for (const auto& row : phase_rows) {
    decode_ok = decode_ok && row.ok();
    const double tj = encode_bit(row.inputs[0]);
    const double tk = encode_bit(1 - row.inputs[0]);
    worst_phase = std::max(worst_phase, std::abs(wrap_phase(std::abs(row.psi[0]) - tj)));
    worst_phase = std::max(worst_phase, std::abs(wrap_phase(std::abs(row.psi[1]) - tk)));
  }

  const auto full_rows = run_truth_table(make_not_gate(), Engine::FullState, sim);
  double worst_full = 0.0;
  for (const auto& row : full_rows) {
    decode_ok = decode_ok && row.ok();
    const double tj = encode_bit(row.inputs[0]);
    const double tk = encode_bit(1 - row.inputs[0]);
    worst_full = std::max(worst_full, std::abs(wrap_phase(std::abs(row.psi[0]) - tj)));
    worst_full = std::max(worst_full, std::abs(wrap_phase(std::abs(row.psi[1]) - tk)));
  }

  out.pass = decode_ok && worst_phase < 1e-3 && worst_full < 0.05;
  os << "both engines complement both bits: " << (decode_ok ? "yes" : "NO")
     << "; phase-model max deviation " << fmt(worst_phase) << " (tol 1e-3)"
     << "; full-state max deviation " << fmt(worst_full) << " (tol 0.05)";
  out.detail = os.str();
  return out;
}

// --- 3 ------------------------------------------------------------------

Outcome check_truth_tables() {
  Outcome out;
  SimConfig sim;
  int correct = 0, ambiguous = 0;
  for (const Engine engine : {Engine::FullState, Engine::PhaseModel}) {
    for (const GateMode mode : {GateMode::And, GateMode::Or}) {
      const auto rows = run_truth_table(make_majority_gate(mode), engine, sim);
      for (const auto& row : rows) {
        if (row.ok()) ++correct;
        if (row.note == "ambiguous phase") ++ambiguous;
      }
    }
  }
  out.pass = correct == 16 && ambiguous == 0;
  out.detail = std::to_string(correct) +
               "/16 rows decode correctly across both engines, ambiguous rows: " +
               std::to_string(ambiguous);
  return out;
}

// --- 4 ------------------------------------------------------------------

Outcome check_amplitude() {
  Outcome out;
  NetworkSpec net;
  net.oscillators = {{"a", 0.1}};
  const CompiledNetwork compiled = compile(net);
  const Field f = [&](const VecX& s, double tau) { return network_field(compiled, s, tau); };
  VecX s0(2);
  s0 << 0.1, 0.1;
  const Trajectory traj = integrate(f, s0, 500.0, 0.01, 10);
  double acc = 0.0;
  int count = 0;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    if (traj.times[s] < 500.0 - 10.0 * kTwoPi) continue;
    acc += std::hypot(traj.states[s][0], traj.states[s][1]);
    ++count;
  }
  const double mean_radius = acc / count;
  const double rel = std::abs(mean_radius - kCycleAmplitude) / kCycleAmplitude;
  out.pass = rel < 0.05;
  out.detail = "mean orbit radius " + fmt(mean_radius) + " vs 2/sqrt(3)=" +
               fmt(kCycleAmplitude) + ", relative deviation " + fmt(rel) + " (tol 0.05)";
  return out;
}

// --- 5 ------------------------------------------------------------------

Outcome check_floquet_exponents() {
  Outcome out;
  const MatX j = averaged_example_jacobian(kCycleAmplitude, 0.1);
  Eigen::EigenSolver<MatX> solver(j);
  double err_zero = 1e300, err_alpha = 1e300;
  for (int i = 0; i < 2; ++i) {
    const auto ev = solver.eigenvalues()[i];
    err_zero = std::min(err_zero, std::abs(ev));
    err_alpha = std::min(err_alpha, std::abs(ev - std::complex<double>(-0.1, 0.0)));
  }
  out.pass = err_zero < 1e-12 && err_alpha < 1e-12;
  out.detail = "eigenvalues match {0, -alpha} within " +
               fmt(std::max(err_zero, err_alpha)) + " (tol 1e-12)";
  return out;
}

// --- 6 ------------------------------------------------------------------

Outcome check_rk4_order() {
  Outcome out;
  const Field harmonic = [](const VecX& s, double) {
    VecX d(2);
    d << s[1], -s[0];
    return d;
  };
  const auto error_at = [&](double h) {
    const Trajectory traj = integrate(harmonic, Vec2(1, 0), kTwoPi, h, 1);
    const double t = traj.times.back();
    const VecX& s = traj.states.back();
    return std::hypot(s[0] - std::cos(t), s[1] + std::sin(t));
  };
  const double e1 = error_at(0.02), e2 = error_at(0.01), e3 = error_at(0.005);
  const double p12 = std::log2(e1 / e2);
  const double p23 = std::log2(e2 / e3);
  out.pass = p12 > 3.8 && p12 < 4.2 && p23 > 3.8 && p23 < 4.2;
  out.detail = "empirical orders " + fmt(p12) + " and " + fmt(p23) +
               " over h in {0.02, 0.01, 0.005} (range [3.8, 4.2])";
  return out;
}

// --- 7 ------------------------------------------------------------------

double averaged_register_coupling(double psi_k, double rho, double gamma) {
  const auto fn = [&](const VecX& th) {
    const Vec2 slave = polar_to_circuit(Vec2(th[0], kCycleAmplitude));
    const Vec2 ref = polar_to_circuit(Vec2(th[1], kCycleAmplitude));
    const Vec2 c(-2.0 * rho * (slave[0] + ref[0]), -2.0 * gamma * (slave[1] - ref[1]));
    return circuit_coupling_to_polar(slave, c)[0];
  };
  VecX psi(2);
  psi << psi_k, 0.0;
  return average_coupling(fn, psi, 256);
}

double fitted_k(double rho, double gamma) {
  double num = 0.0, den = 0.0;
  for (int s = 0; s < 32; ++s) {
    const double psi = -kPi + kTwoPi * (s + 0.5) / 32;
    num += averaged_register_coupling(psi, rho, gamma) * std::sin(psi);
    den += std::sin(psi) * std::sin(psi);
  }
  return num / den;
}

Outcome check_averaging_oracle() {
  Outcome out;
  const double rho = 0.07, gamma = 0.03;
  const double k = fitted_k(rho, gamma);
  double resid2 = 0.0, norm2 = 0.0;
  for (int s = 0; s < 32; ++s) {
    const double psi = -kPi + kTwoPi * (s + 0.5) / 32;
    const double value = averaged_register_coupling(psi, rho, gamma);
    resid2 += (value - k * std::sin(psi)) * (value - k * std::sin(psi));
    norm2 += value * value;
  }
  const double rel_resid = std::sqrt(resid2 / norm2);

  // K changes sign exactly where rho balances gamma; bisect K(rho) at fixed
  // gamma = 0.06.
  const double gamma_fixed = 0.06;
  double lo = 0.0, hi = 0.12;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (fitted_k(mid, gamma_fixed) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  const double root_err = std::abs(root - gamma_fixed);

  out.pass = rel_resid < 1e-3 && root_err <= 1e-6;
  out.detail = "K*sin fit relative residual " + fmt(rel_resid) +
               " (tol 1e-3); K sign change at rho=" + fmt(root) + ", |rho-gamma|=" +
               fmt(root_err) + " (tol 1e-6)";
  return out;
}

// --- 8 ------------------------------------------------------------------

Outcome check_liapunov_certificates() {
  Outcome out;
  struct Target {
    CertifiedGate kind;
    VecX gains, drives, target;
    const char* label;
  };
  const auto vec = [](std::initializer_list<double> v) {
    VecX x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) x[i++] = d;
    return x;
  };
  std::vector<Target> targets;
  targets.push_back({CertifiedGate::Not, vec({0.05, 0.10}), vec({0.0}), vec({0.0, kPi}),
                     "not(0,pi)"});
  targets.push_back({CertifiedGate::Majority, vec({0.3, 0.3, 0.05}), vec({0, 0, 0}),
                     vec({0, 0, 0}), "and(0,0,0)"});
  targets.push_back({CertifiedGate::Majority, vec({0.3, 0.3, 0.05}), vec({kPi, 0, 0}),
                     vec({kPi, 0, 0}), "and(pi,0,0)"});
  targets.push_back({CertifiedGate::Majority, vec({0.3, 0.3, 0.05}), vec({0, kPi, 0}),
                     vec({0, kPi, 0}), "and(0,pi,0)"});
  targets.push_back({CertifiedGate::Majority, vec({0.3, 0.3, 0.05}), vec({kPi, kPi, 0}),
                     vec({kPi, kPi, kPi}), "and(pi,pi,pi)"});

  std::ostringstream os;
  bool all = true;
  for (const auto& t : targets) {
    Rng rng(42);
    const auto cert =
        liapunov_descent_check(t.kind, t.gains, t.drives, t.target, 100, 0.3, rng, 0.02);
    const bool ok = cert.passed();
    all = all && ok;
    os << t.label << (ok ? " ok" : " FAIL") << " (min V=" << fmt(cert.min_over_punctured_ball)
       << ", worst dV=" << fmt(cert.max_descent_violation) << "); ";
  }
  out.pass = all;
  out.detail = os.str() + "100 seeds each, budget 10*h^5";
  return out;
}

// --- 9 ------------------------------------------------------------------

Outcome check_or_proof() {
  Outcome out;
  const Vec3 drives(0.0, 0.0, kPi);
  const Vec3 gains(0.3, 0.3, 0.1);
  const PhaseField rhs = [&](const VecX& p) {
    return VecX(majority_phase_rhs(Vec3(p[0], p[1], p[2]), drives, gains));
  };
  VecX origin = VecX::Zero(3);
  const MatX j = numeric_jacobian(rhs, origin);
  const double asym = (j - j.transpose()).norm();

  const auto coefs = or_char_poly(0.3, 0.1);
  const double c2 = -j.trace();
  double c1 = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) c1 += j(a, a) * j(b, b) - j(a, b) * j(b, a);
  }
  const double c0 = -j.determinant();
  const double coef_err = std::max({std::abs(c2 - coefs[1]), std::abs(c1 - coefs[2]),
                                    std::abs(c0 - coefs[3])});

  Eigen::EigenSolver<MatX> solver(j);
  double max_re = -1e300;
  for (int i = 0; i < 3; ++i) max_re = std::max(max_re, solver.eigenvalues()[i].real());

  out.pass = asym < 1e-8 && coef_err < 1e-10 && max_re < 0.0;
  out.detail = "|J - J^T|=" + fmt(asym) + " (tol 1e-8); char-poly coefficient error " +
               fmt(coef_err) + " vs (1, 0.9, 0.21, 0.005) (tol 1e-10); max eigenvalue " +
               fmt(max_re) + " < 0";
  return out;
}

// --- 10 -----------------------------------------------------------------

Outcome check_isochron() {
  Outcome out;
  const double alpha = 0.1;
  const Field averaged = [&](const VecX& z, double) {
    VecX d(2);
    d << 1.0, 0.5 * alpha * z[1] * (1.0 - 0.75 * z[1] * z[1]);
    return d;
  };
  const double theta0 = 0.7;
  VecX a0(2), b0(2);
  a0 << theta0, 1.0;
  b0 << theta0, 1.3;
  const Trajectory ta = integrate(averaged, a0, 100.0, 0.01, 100);
  const Trajectory tb = integrate(averaged, b0, 100.0, 0.01, 100);
  const VecX& za = ta.states.back();
  const VecX& zb = tb.states.back();
  const double sep = std::hypot(za[1] * std::cos(za[0]) - zb[1] * std::cos(zb[0]),
                                za[1] * std::sin(za[0]) - zb[1] * std::sin(zb[0]));

  // Raw circuit trajectories from the same radial pair, for the record: the
  // circuit's isochrons are radial only to leading order, so a phase gap of
  // order alpha^2 survives.
  NetworkSpec net;
  net.oscillators = {{"a", alpha}};
  const CompiledNetwork compiled = compile(net);
  const Field f = [&](const VecX& s, double tau) { return network_field(compiled, s, tau); };
  const Trajectory ra =
      integrate(f, Vec2(1.0 * std::cos(theta0), 1.0 * std::sin(theta0)), 100.0, 0.01, 100);
  const Trajectory rb =
      integrate(f, Vec2(1.3 * std::cos(theta0), 1.3 * std::sin(theta0)), 100.0, 0.01, 100);
  const double raw_sep = std::hypot(ra.states.back()[0] - rb.states.back()[0],
                                    ra.states.back()[1] - rb.states.back()[1]);

  out.pass = sep < 1e-3;
  out.detail = "averaged-system separation at tau=100: " + fmt(sep) +
               " (tol 1e-3); raw circuit separation " + fmt(raw_sep) +
               " (informational: circuit isochrons are radial only to O(alpha))";
  return out;
}

// --- 11 -----------------------------------------------------------------

Outcome check_composition() {
  Outcome out;
  SimConfig sim;
  bool all = true;
  std::ostringstream os;

  for (int bit : {0, 1}) {
    NetworkSpec net =
        compose({make_not_gate("a."), make_not_gate("b.")}, {{"a.k", "b.j"}});
    set_drive_phase(net, "a.j", encode_bit(bit));
    const LockReport report = simulate_to_lock(net, Engine::FullState, sim);
    bool ok = report.locked;
    int decoded = -1;
    if (ok) {
      try {
        decoded = decode_bit(report.phase_diffs[3]);
      } catch (const AmbiguousPhaseError&) {
        ok = false;
      }
    }
    ok = ok && decoded == bit;
    all = all && ok;
    os << "not.not(" << bit << ")=" << decoded << (ok ? " ok; " : " FAIL; ");
  }

  int nand_correct = 0;
  for (int r = 0; r < 4; ++r) {
    const int b1 = r & 1, b2 = (r >> 1) & 1;
    NetworkSpec net = compose(
        {make_majority_gate(GateMode::And, "m."), make_not_gate("n.")}, {{"m.k", "n.j"}});
    set_drive_phase(net, "m.i", encode_bit(b1));
    set_drive_phase(net, "m.j", encode_bit(b2));
    const LockReport report = simulate_to_lock(net, Engine::FullState, sim);
    if (!report.locked) continue;
    try {
      if (decode_bit(report.phase_diffs[4]) == 1 - (b1 & b2)) ++nand_correct;
    } catch (const AmbiguousPhaseError&) {
    }
  }
  all = all && nand_correct == 4;
  os << "nand rows " << nand_correct << "/4";
  out.pass = all;
  out.detail = os.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "register-locking", check_register},
      {2, "not-gate", check_not_gate},
      {3, "majority-truth-table", check_truth_tables},
      {4, "orbit-amplitude", check_amplitude},
      {5, "floquet-exponents", check_floquet_exponents},
      {6, "rk4-order", check_rk4_order},
      {7, "averaging-oracle", check_averaging_oracle},
      {8, "liapunov-certificates", check_liapunov_certificates},
      {9, "or-proof-mechanics", check_or_proof},
      {10, "isochron-convergence", check_isochron},
      {11, "gate-composition", check_composition},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    Outcome outcome;
    try {
      outcome = criterion.check();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %02d [%s] %s: %s\n", criterion.id, criterion.name,
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
