#include "osclogic/dynamics.hpp"

#include <set>

namespace osclogic {

int NetworkSpec::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < oscillators.size(); ++i) {
    if (oscillators[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

CompiledNetwork compile(const NetworkSpec& net) {
  CompiledNetwork out;
  out.n_nodes = static_cast<int>(net.oscillators.size());

  std::set<std::string> seen;
  for (const auto& osc : net.oscillators) {
    if (!seen.insert(osc.id).second) {
      throw ConfigError("duplicate oscillator id '" + osc.id + "'");
    }
    if (!(osc.alpha > 0.0) || !std::isfinite(osc.alpha)) {
      throw ConfigError("oscillator '" + osc.id + "': alpha must be positive");
    }
    out.ids.push_back(osc.id);
    out.alpha.push_back(osc.alpha);
  }

  for (const auto& e : net.edges) {
    const int from = net.index_of(e.from);
    const int to = net.index_of(e.to);
    if (from < 0 || to < 0) {
      throw ConfigError("edge " + e.from + " -> " + e.to +
                        " references an undeclared oscillator");
    }
    if (from == to) throw ConfigError("edge " + e.from + " -> " + e.to + " is a self loop");
    if (e.rho < 0.0 || e.gamma < 0.0 || !std::isfinite(e.rho) || !std::isfinite(e.gamma)) {
      throw ConfigError("edge " + e.from + " -> " + e.to + ": couplings must be >= 0");
    }
    // Head side first, then the tail side for undirected edges; this order is
    // part of the bitwise contract between field evaluation paths.
    if (e.rho != 0.0) {
      out.resistive.push_back({to, from, 2.0 * e.rho});
      if (!e.directed) out.resistive.push_back({from, to, 2.0 * e.rho});
    }
    if (e.gamma != 0.0) {
      out.conductive.push_back({to, from, 2.0 * e.gamma});
      if (!e.directed) out.conductive.push_back({from, to, 2.0 * e.gamma});
    }
  }

  for (const auto& s : net.sources) {
    const int target = net.index_of(s.target);
    if (target < 0) {
      throw ConfigError("drive on undeclared oscillator '" + s.target + "'");
    }
    if (s.gamma_d < 0.0 || !std::isfinite(s.gamma_d) || !std::isfinite(s.psi_d)) {
      throw ConfigError("drive on '" + s.target + "': gamma_d must be >= 0 and finite");
    }
    out.drives.push_back({target, 2.0 * s.gamma_d, std::cos(s.psi_d), std::sin(s.psi_d)});
  }

  if (net.reference) {
    const int ref = net.index_of(*net.reference);
    if (ref < 0) throw ConfigError("reference '" + *net.reference + "' is not declared");
    for (const auto& e : net.edges) {
      const bool incoming =
          (net.index_of(e.to) == ref) || (!e.directed && net.index_of(e.from) == ref);
      if (incoming) {
        throw ConfigError("reference '" + *net.reference +
                          "' must have only outgoing directed edges");
      }
    }
    for (const auto& s : net.sources) {
      if (net.index_of(s.target) == ref) {
        throw ConfigError("reference '" + *net.reference + "' must not be driven");
      }
    }
    out.reference = ref;
  }
  return out;
}

Vec2 single_oscillator_field(const Vec2& state, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!state.allFinite()) throw DomainError("non-finite oscillator state");
  const double x = state[0];
  const double y = state[1];
  return Vec2(y, nonlinearity(y, alpha) - x);
}

NormalizedCircuit normalize_circuit(double inductance, double capacitance,
                                    double g1, double g3) {
  if (!(inductance > 0.0) || !(capacitance > 0.0)) {
    throw DomainError("L and C must be positive");
  }
  if (!(g1 > 0.0) || !(g3 > 0.0)) {
    throw DomainError("g1 and g3 must be positive");
  }
  const double ratio = inductance / capacitance;
  return NormalizedCircuit{g1 * std::sqrt(ratio), g3 * ratio * std::sqrt(ratio),
                           std::sqrt(inductance * capacitance)};
}

Vec2 register_field(const Vec2& state_ref, const Vec2& state_k,
                    const CouplingEdge& edge, double alpha) {
  if (!state_ref.allFinite() || !state_k.allFinite()) {
    throw DomainError("non-finite register state");
  }
  const double xr = state_ref[0], yr = state_ref[1];
  const double xk = state_k[0], yk = state_k[1];
  const double dx = yk - 2.0 * edge.rho * (xk + xr);
  const double dy = (nonlinearity(yk, alpha) - xk) - 2.0 * edge.gamma * (yk - yr);
  return Vec2(dx, dy);
}

VecX network_field(const CompiledNetwork& net, const VecX& state, double tau) {
  if (state.size() != net.state_dim()) {
    throw ConfigError("state dimension does not match the network");
  }
  VecX deriv(state.size());
  for (int i = 0; i < net.n_nodes; ++i) {
    const double x = state[2 * i];
    const double y = state[2 * i + 1];
    deriv[2 * i] = y;
    deriv[2 * i + 1] = nonlinearity(y, net.alpha[static_cast<std::size_t>(i)]) - x;
  }
  for (const auto& e : net.resistive) {
    deriv[2 * e.target] -= e.coef * (state[2 * e.target] + state[2 * e.other]);
  }
  for (const auto& e : net.conductive) {
    deriv[2 * e.target + 1] -= e.coef * (state[2 * e.target + 1] - state[2 * e.other + 1]);
  }
  if (!net.drives.empty()) {
    const double s = kCycleAmplitude * std::sin(tau);
    const double c = kCycleAmplitude * std::cos(tau);
    for (const auto& d : net.drives) {
      const double y_d = s * d.cos_psi + c * d.sin_psi;
      deriv[2 * d.target + 1] -= d.coef * (state[2 * d.target + 1] - y_d);
    }
  }
  return deriv;
}

}  // namespace osclogic
