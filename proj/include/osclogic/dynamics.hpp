#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "osclogic/errors.hpp"

namespace osclogic {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Steady orbit radius of the normalized unit in the weakly nonlinear regime.
inline const double kCycleAmplitude = 2.0 / std::sqrt(3.0);

// ---------------------------------------------------------------------------
// Network description
// ---------------------------------------------------------------------------

struct OscillatorSpec {
  std::string id;
  double alpha = 0.1;  // nonlinearity strength; > 0, <= 0.3 recommended
};

// Resistive (rho, acts on the current equation as -2*rho*(x_i + x_j)) and
// conductive (gamma, acts on the voltage equation as -2*gamma*(y_i - y_j))
// coupling between two units. Directed edges affect only the head node `to`.
struct CouplingEdge {
  std::string from;
  std::string to;
  double rho = 0.0;
  double gamma = 0.0;
  bool directed = false;
};

// Ideal sinusoidal drive y_D(tau) = A_s*sin(tau + psi_d) injected on the
// voltage equation of `target` as -2*gamma_d*(y - y_D).
struct DrivenSource {
  std::string target;
  double psi_d = 0.0;
  double gamma_d = 0.0;
};

struct NetworkSpec {
  std::vector<OscillatorSpec> oscillators;
  std::vector<CouplingEdge> edges;
  std::vector<DrivenSource> sources;
  std::optional<std::string> reference;

  int index_of(const std::string& id) const;
};

// Flattened network: node parameters plus per-target coupling entries in a
// fixed order (edge declaration order, head side first). Every evaluation
// path (generic field, scalar batch kernel, SIMD batch kernel) walks these
// entries identically so results agree bitwise.
struct CompiledNetwork {
  struct Lin {
    int target;
    int other;
    double coef;  // 2*rho or 2*gamma
  };
  struct Drive {
    int target;
    double coef;  // 2*gamma_d
    double cos_psi;
    double sin_psi;
  };

  int n_nodes = 0;
  std::vector<std::string> ids;
  std::vector<double> alpha;
  std::vector<Lin> resistive;
  std::vector<Lin> conductive;
  std::vector<Drive> drives;
  std::optional<int> reference;

  int state_dim() const { return 2 * n_nodes; }
};

// Validates ids/edges/sources and flattens. Throws ConfigError on duplicate
// ids, dangling references, negative couplings, or a reference node with
// incoming influence.
CompiledNetwork compile(const NetworkSpec& net);

// ---------------------------------------------------------------------------
// Vector fields (all pure)
// ---------------------------------------------------------------------------

// -g(y) with g(y) = -alpha*y + alpha*y^3; the active conductance restoring
// term of the voltage equation. Kept as the single expression shared by all
// field evaluations.
inline double nonlinearity(double y, double alpha) {
  return alpha * (1.0 - y * y) * y;
}

// g(y) itself, the nonlinear conductance characteristic.
inline double conductance(double y, double alpha) {
  return -nonlinearity(y, alpha);
}

// dx/dtau = y, dy/dtau = -x + alpha*(1-y^2)*y
Vec2 single_oscillator_field(const Vec2& state, double alpha);

struct NormalizedCircuit {
  double g1_scaled;   // G1 = g1*sqrt(L/C)
  double g3_scaled;   // G3 = g3*(L/C)^(3/2)
  double time_scale;  // sqrt(L*C); tau = t / time_scale
};

NormalizedCircuit normalize_circuit(double inductance, double capacitance,
                                    double g1, double g3);

// Slave node of a reference-register pair; the reference state is supplied
// externally and is not acted back on.
Vec2 register_field(const Vec2& state_ref, const Vec2& state_k,
                    const CouplingEdge& edge, double alpha);

// Reference cycle point at phase deviation psi (the state an ideally locked
// node holds at tau = 0).
inline Vec2 reference_cycle_state(double psi) {
  return Vec2(-kCycleAmplitude * std::cos(psi), kCycleAmplitude * std::sin(psi));
}

// y-waveform of an ideal driven source locked at offset psi_d.
inline double drive_waveform(double tau, double psi_d) {
  return kCycleAmplitude * std::sin(tau + psi_d);
}

// Assembled right-hand side for the whole network; state layout
// (x_0, y_0, x_1, y_1, ...).
VecX network_field(const CompiledNetwork& net, const VecX& state, double tau);

}  // namespace osclogic
