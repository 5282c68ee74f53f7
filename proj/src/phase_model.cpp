#include "osclogic/phase_model.hpp"

#include <cmath>

namespace osclogic {

MatX FloquetFrame::Y(double theta) const {
  const MatX u = basis(theta);
  return u.rightCols(u.cols() - 1);
}

MatX FloquetFrame::Z(double theta) const {
  const MatX v = cobasis(theta);  // rows are v_i^T
  return v.bottomRows(v.rows() - 1).transpose();
}

VecX FloquetFrame::v1(double theta) const {
  return cobasis(theta).row(0).transpose();
}

double FloquetFrame::biorthogonality_defect(double theta) const {
  const MatX u = basis(theta);
  const MatX v = cobasis(theta);
  return (v * u - MatX::Identity(u.rows(), u.cols())).norm();
}

double k_factor(const LimitCycle& cycle, const FloquetFrame& frame, double theta,
                const VecX& amplitude) {
  const double den =
      cycle.speed(theta) + frame.v1(theta).dot(frame.dY_dtheta(theta) * amplitude);
  if (std::abs(den) < 1e-9) {
    throw DomainError("outside tubular neighborhood: coordinate map not invertible");
  }
  return 1.0 / den;
}

namespace {

// Shared pieces of the exact phase/amplitude equations at one node.
struct NodeFrameData {
  VecX x;        // reconstructed state x_s + Y R
  VecX on_cycle; // x_s(theta)
  MatX dY;
  VecX dY_R;     // dY/dtheta * R
};

NodeFrameData node_frame_data(const LimitCycle& cycle, const FloquetFrame& frame,
                              const NodePhaseState& node) {
  NodeFrameData d;
  d.on_cycle = cycle.xs(node.theta);
  d.dY = frame.dY_dtheta(node.theta);
  d.dY_R = d.dY * node.amplitude;
  d.x = d.on_cycle + frame.Y(node.theta) * node.amplitude;
  return d;
}

std::vector<VecX> reconstruct_all(const LimitCycle& cycle, const FloquetFrame& frame,
                                  const std::vector<NodePhaseState>& nodes) {
  std::vector<VecX> xs;
  xs.reserve(nodes.size());
  for (const auto& n : nodes) {
    xs.push_back(cycle.xs(n.theta) + frame.Y(n.theta) * n.amplitude);
  }
  return xs;
}

}  // namespace

double phase_rhs_full(const LimitCycle& cycle, const FloquetFrame& frame,
                      std::size_t i, const std::vector<NodePhaseState>& nodes,
                      const PerturbationSpec& pert) {
  if (i >= nodes.size()) throw DomainError("node index out of range");
  const auto& node = nodes[i];
  const auto d = node_frame_data(cycle, frame, node);
  const double k = k_factor(cycle, frame, node.theta, node.amplitude);
  const VecX v1 = frame.v1(node.theta);

  const double a_theta =
      k * v1.dot(cycle.field(d.x) - cycle.field(d.on_cycle) - d.dY_R);
  double rhs = 1.0 + a_theta;
  if (pert.detune) {
    rhs += pert.epsilon * k * v1.dot(pert.detune(d.x));
  }
  if (pert.coupling) {
    rhs += pert.epsilon * k * v1.dot(pert.coupling(reconstruct_all(cycle, frame, nodes)));
  }
  return rhs;
}

VecX amplitude_rhs_full(const LimitCycle& cycle, const FloquetFrame& frame,
                        std::size_t i, const std::vector<NodePhaseState>& nodes,
                        const PerturbationSpec& pert) {
  if (i >= nodes.size()) throw DomainError("node index out of range");
  const auto& node = nodes[i];
  const auto d = node_frame_data(cycle, frame, node);
  const double k = k_factor(cycle, frame, node.theta, node.amplitude);
  const VecX v1 = frame.v1(node.theta);
  const MatX zt = frame.Z(node.theta).transpose();

  const double a_theta =
      k * v1.dot(cycle.field(d.x) - cycle.field(d.on_cycle) - d.dY_R);

  VecX rhs = -zt * d.dY * node.amplitude;            // L(theta) R
  rhs += -zt * (d.dY_R * a_theta - cycle.field(d.x));  // a_R
  if (pert.detune) {
    const double da_theta = k * v1.dot(pert.detune(d.x));
    rhs += pert.epsilon * (-zt * (d.dY_R * da_theta - pert.detune(d.x)));
  }
  if (pert.coupling) {
    rhs += pert.epsilon * (zt * pert.coupling(reconstruct_all(cycle, frame, nodes)));
  }
  return rhs;
}

VecX reduced_phase_rhs(const LimitCycle& cycle, const FloquetFrame& frame,
                       const VecX& psi, double tau,
                       const std::vector<DetuneFn>& detunes,
                       const std::vector<CouplingFn>& couplings) {
  const auto n = static_cast<std::size_t>(psi.size());
  std::vector<VecX> on_cycle;
  on_cycle.reserve(n);
  for (std::size_t m = 0; m < n; ++m) on_cycle.push_back(cycle.xs(psi[m] + tau));

  VecX out = VecX::Zero(psi.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = psi[i] + tau;
    const VecX v1 = frame.v1(theta);
    const double inv_r = 1.0 / cycle.speed(theta);
    double val = 0.0;
    if (i < detunes.size() && detunes[i]) {
      val += inv_r * v1.dot(detunes[i](on_cycle[i]));
    }
    if (i < couplings.size() && couplings[i]) {
      val += inv_r * v1.dot(couplings[i](on_cycle));
    }
    out[static_cast<Eigen::Index>(i)] = val;
  }
  return out;
}

double average_coupling(const std::function<double(const VecX&)>& c_fn,
                        const VecX& psi, int quad_points) {
  if (quad_points < 64) throw DomainError("quadrature needs at least 64 points");
  double acc = 0.0;
  VecX shifted(psi.size());
  for (int j = 0; j < quad_points; ++j) {
    const double tau = kTwoPi * static_cast<double>(j) / quad_points;
    for (Eigen::Index i = 0; i < psi.size(); ++i) shifted[i] = psi[i] + tau;
    acc += c_fn(shifted);
  }
  return acc / quad_points;
}

double register_phase_rhs(double psi_k, double rho, double gamma) {
  return (rho - gamma) * std::sin(psi_k);
}

Vec2 not_phase_rhs(double psi_j, double psi_k, double psi_dj, double rho,
                   double gamma) {
  return Vec2(rho * std::sin(psi_j - psi_k) - gamma * std::sin(psi_j - psi_dj),
              rho * std::sin(psi_k - psi_j));
}

Vec3 majority_phase_rhs(const Vec3& psi, const Vec3& drives, const Vec3& gains) {
  const double pi_ = psi[0], pj = psi[1], pk = psi[2];
  const double gi = gains[0], gj = gains[1], g = gains[2];
  const double di = -gi * std::sin(pi_ - drives[0]) - g * std::sin(pi_ - drives[2]) -
                    g * (std::sin(pi_ - pj) + std::sin(pi_ - pk));
  const double dj = -gj * std::sin(pj - drives[1]) - g * std::sin(pj - drives[2]) -
                    g * (std::sin(pj - pi_) + std::sin(pj - pk));
  const double dk = -g * std::sin(pk - drives[2]) -
                    g * (std::sin(pk - pi_) + std::sin(pk - pj));
  return Vec3(di, dj, dk);
}

Vec2 averaged_example_rhs(double /*theta*/, double amplitude, double alpha) {
  if (amplitude < 0.0) throw DomainError("amplitude must be non-negative");
  return Vec2(1.0, 0.5 * alpha * amplitude * (1.0 - 0.75 * amplitude * amplitude));
}

MatX averaged_example_jacobian(double amplitude, double alpha) {
  MatX j = MatX::Zero(2, 2);
  j(1, 1) = 0.5 * alpha * (1.0 - 2.25 * amplitude * amplitude);
  return j;
}

LimitCycle averaged_polar_cycle(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  LimitCycle cycle;
  cycle.period = kTwoPi;
  cycle.xs = [](double theta) {
    double th = std::fmod(theta, kTwoPi);
    if (th < 0.0) th += kTwoPi;
    VecX p(2);
    p << th, kCycleAmplitude;
    return p;
  };
  cycle.field = [alpha](const VecX& z) {
    const Vec2 d = averaged_example_rhs(z[0], z[1], alpha);
    VecX out(2);
    out << d[0], d[1];
    return out;
  };
  return cycle;
}

FloquetFrame constant_orthonormal_frame() {
  FloquetFrame frame;
  frame.basis = [](double) { return MatX::Identity(2, 2); };
  frame.cobasis = [](double) { return MatX::Identity(2, 2); };
  frame.dY_dtheta = [](double) { return MatX::Zero(2, 1); };
  return frame;
}

Vec2 polar_to_circuit(const Vec2& polar) {
  return Vec2(-polar[1] * std::cos(polar[0]), polar[1] * std::sin(polar[0]));
}

Vec2 circuit_coupling_to_polar(const Vec2& circuit_state, const Vec2& c_circuit) {
  const double x = circuit_state[0], y = circuit_state[1];
  const double r2 = x * x + y * y;
  if (r2 < 1e-18) throw DomainError("polar chart is singular at the origin");
  const double r = std::sqrt(r2);
  // theta = atan2(y, -x): grad theta = (y, -x)/r^2; grad A = (x, y)/r
  return Vec2((y * c_circuit[0] - x * c_circuit[1]) / r2,
              (x * c_circuit[0] + y * c_circuit[1]) / r);
}

Field averaged_netlist_rhs(const CompiledNetwork& net) {
  struct Term {
    int target;
    int other;   // -1 for drives
    double coef; // signed reduced coefficient
    double psi_d;
  };
  std::vector<Term> terms;
  for (const auto& e : net.resistive) {
    terms.push_back({e.target, e.other, 0.5 * e.coef, 0.0});
  }
  for (const auto& e : net.conductive) {
    terms.push_back({e.target, e.other, -0.5 * e.coef, 0.0});
  }
  for (const auto& d : net.drives) {
    terms.push_back({d.target, -1, -0.5 * d.coef, std::atan2(d.sin_psi, d.cos_psi)});
  }
  const int n = net.n_nodes;
  return [terms, n](const VecX& psi, double) {
    if (psi.size() != n) throw ConfigError("phase state dimension mismatch");
    VecX out = VecX::Zero(n);
    for (const auto& t : terms) {
      const double ref = t.other >= 0 ? psi[t.other] : t.psi_d;
      out[t.target] += t.coef * std::sin(psi[t.target] - ref);
    }
    return out;
  };
}

}  // namespace osclogic
