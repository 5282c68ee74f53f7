#include "osclogic/gates.hpp"

#include <cmath>
#include <set>

#include "osclogic/phase_model.hpp"

namespace osclogic {

void GateInstance::validate() const {
  switch (kind) {
    case GateKind::Register:
      if (params.rho < 0.0 || params.gamma < 0.0) {
        throw ConfigError("register: couplings must be >= 0");
      }
      break;
    case GateKind::Not:
      if (input_nodes.size() != 1) throw ConfigError("inverter: exactly one input node");
      if (!(params.rho > 0.0) || !(params.gamma > 0.0)) {
        throw ConfigError("inverter: rho and gamma must be positive");
      }
      break;
    case GateKind::Majority:
      if (input_nodes.size() != 2) throw ConfigError("majority: exactly two input nodes");
      if (params.gamma_i != params.gamma_j) {
        throw ConfigError("majority: gamma_i and gamma_j must be equal");
      }
      if (!(params.gamma > 0.0)) throw ConfigError("majority: gamma must be positive");
      if (mode == GateMode::And && !(params.gamma_i > params.gamma)) {
        throw ConfigError("majority/AND: requires gamma_i > gamma");
      }
      if (mode == GateMode::Or && !(params.gamma_i > 2.0 * params.gamma)) {
        throw ConfigError("majority/OR: requires gamma_i > 2*gamma");
      }
      break;
  }
}

GateInstance make_not_gate(const std::string& prefix, GateParams params) {
  GateInstance g;
  g.kind = GateKind::Not;
  g.input_nodes = {prefix + "j"};
  g.output_node = prefix + "k";
  g.params = params;
  g.validate();
  return g;
}

GateInstance make_majority_gate(GateMode mode, const std::string& prefix,
                                GateParams params) {
  GateInstance g;
  g.kind = GateKind::Majority;
  g.mode = mode;
  g.input_nodes = {prefix + "i", prefix + "j"};
  g.output_node = prefix + "k";
  g.params = params;
  g.validate();
  return g;
}

double encode_bit(int bit) {
  if (bit != 0 && bit != 1) throw DomainError("bit must be 0 or 1");
  return bit ? 0.5 * kTwoPi : 0.0;
}

int decode_bit(double psi) {
  if (!std::isfinite(psi)) throw DomainError("non-finite phase");
  const double a = std::abs(wrap_phase(psi));
  const double quarter = 0.25 * kTwoPi;
  if (std::abs(a - quarter) < 0.2) {
    throw AmbiguousPhaseError("phase " + std::to_string(a) +
                              " is within 0.2 rad of the decision boundary");
  }
  return a < quarter ? 0 : 1;
}

NetworkSpec build_not(const GateInstance& gate, int input_bit) {
  gate.validate();
  if (gate.kind != GateKind::Not) throw ConfigError("gate is not an inverter");
  const std::string& j = gate.input_nodes[0];
  const std::string& k = gate.output_node;
  NetworkSpec net;
  net.oscillators = {{j}, {k}};
  net.edges = {{j, k, gate.params.rho, 0.0, false}};
  net.sources = {{j, encode_bit(input_bit), gate.params.gamma}};
  return net;
}

NetworkSpec build_majority(const GateInstance& gate, int bit1, int bit2) {
  gate.validate();
  if (gate.kind != GateKind::Majority) throw ConfigError("gate is not a majority cell");
  const std::string& i = gate.input_nodes[0];
  const std::string& j = gate.input_nodes[1];
  const std::string& k = gate.output_node;
  const double g = gate.params.gamma;
  const double psi_d = gate.mode == GateMode::And ? 0.0 : 0.5 * kTwoPi;
  NetworkSpec net;
  net.oscillators = {{i}, {j}, {k}};
  net.edges = {{i, j, 0.0, g, false}, {i, k, 0.0, g, false}, {j, k, 0.0, g, false}};
  // Input selectors first, then the function-select drive on every unit; the
  // selector-first order is what lets compose() and the batched truth table
  // identify input drives by position.
  net.sources = {{i, encode_bit(bit1), gate.params.gamma_i},
                 {j, encode_bit(bit2), gate.params.gamma_j},
                 {i, psi_d, g},
                 {j, psi_d, g},
                 {k, psi_d, g}};
  return net;
}

namespace {

std::vector<VecX> seeded_full_states(const CompiledNetwork& net, Rng& rng,
                                     double magnitude) {
  std::vector<VecX> out(1, VecX(net.state_dim()));
  for (int i = 0; i < net.n_nodes; ++i) {
    const Vec2 s = reference_cycle_state(rng.uniform(-magnitude, magnitude));
    out[0][2 * i] = s[0];
    out[0][2 * i + 1] = s[1];
  }
  return out;
}

std::optional<int> reference_of(const CompiledNetwork& net) {
  if (net.reference) return *net.reference;
  return std::nullopt;
}

}  // namespace

LockReport simulate_to_lock(const NetworkSpec& net, Engine engine,
                            const SimConfig& sim, Kernel kernel,
                            Trajectory* out_trajectory) {
  const CompiledNetwork compiled = compile(net);
  Rng rng(sim.seed);
  Trajectory traj;
  if (engine == Engine::FullState) {
    const auto initial = seeded_full_states(compiled, rng, sim.perturbation);
    traj = std::move(integrate_batch(compiled, initial, sim.tau_end, sim.h,
                                     sim.sample_every, kernel)[0]);
  } else {
    VecX psi0(compiled.n_nodes);
    for (int i = 0; i < compiled.n_nodes; ++i) {
      psi0[i] = rng.uniform(-sim.perturbation, sim.perturbation);
    }
    traj = integrate(averaged_netlist_rhs(compiled), psi0, sim.tau_end, sim.h,
                     sim.sample_every, TrajectoryKind::PhaseState);
  }
  const LockReport report =
      detect_lock(traj, reference_of(compiled), sim.lock_window, sim.lock_tol);
  if (out_trajectory) *out_trajectory = std::move(traj);
  return report;
}

namespace {

struct RowSetup {
  std::vector<int> inputs;
  int expected;
};

std::vector<RowSetup> rows_for(const GateInstance& gate) {
  if (gate.kind == GateKind::Not) {
    return {{{0}, 1}, {{1}, 0}};
  }
  std::vector<RowSetup> rows;
  for (const auto& in : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
    const int expected = gate.mode == GateMode::And ? (in.first & in.second)
                                                    : (in.first | in.second);
    rows.push_back({{in.first, in.second}, expected});
  }
  return rows;
}

void finish_row(TruthTableRow& row, const Trajectory& traj, int output_index,
                const SimConfig& sim) {
  try {
    const LockReport report = detect_lock(traj, std::nullopt, sim.lock_window, sim.lock_tol);
    row.psi = report.phase_diffs;
    row.locked = report.locked;
    if (!report.locked) {
      row.note = "not locked (drift " + std::to_string(report.residual) + " rad/tau)";
      return;
    }
    row.observed = decode_bit(report.phase_diffs[output_index]);
  } catch (const AmbiguousPhaseError&) {
    row.note = "ambiguous phase";
  } catch (const NotOscillatingError&) {
    row.note = "not oscillating";
  }
}

}  // namespace

std::vector<TruthTableRow> run_truth_table(const GateInstance& gate, Engine engine,
                                           const SimConfig& sim, Kernel kernel) {
  gate.validate();
  if (gate.kind == GateKind::Register) {
    throw ConfigError("truth tables are defined for logic gates only");
  }
  const bool majority = gate.kind == GateKind::Majority;
  const int reference_bit = majority && gate.mode == GateMode::Or ? 1 : 0;
  const int output_index = majority ? 2 : 1;
  const int n_nodes = majority ? 3 : 2;
  const auto setups = rows_for(gate);

  Rng rng(sim.seed);
  std::vector<TruthTableRow> rows(setups.size());
  for (std::size_t r = 0; r < setups.size(); ++r) {
    rows[r].reference_bit = reference_bit;
    rows[r].inputs = setups[r].inputs;
    rows[r].expected = setups[r].expected;
  }

  if (engine == Engine::FullState) {
    // All rows advance in lock step as lanes of one batch; only the drive
    // phases differ per lane.
    const NetworkSpec proto = majority ? build_majority(gate, 0, 0) : build_not(gate, 0);
    const CompiledNetwork compiled = compile(proto);
    std::vector<VecX> initial;
    std::vector<std::vector<double>> drive_psi;
    for (const auto& setup : setups) {
      initial.push_back(seeded_full_states(compiled, rng, sim.perturbation)[0]);
      if (majority) {
        const double psi_d = gate.mode == GateMode::And ? 0.0 : 0.5 * kTwoPi;
        drive_psi.push_back({encode_bit(setup.inputs[0]), encode_bit(setup.inputs[1]),
                             psi_d, psi_d, psi_d});
      } else {
        drive_psi.push_back({encode_bit(setup.inputs[0])});
      }
    }
    const auto trajs = integrate_batch(compiled, initial, sim.tau_end, sim.h,
                                       sim.sample_every, kernel, &drive_psi);
    for (std::size_t r = 0; r < setups.size(); ++r) {
      finish_row(rows[r], trajs[r], output_index, sim);
    }
    return rows;
  }

  for (std::size_t r = 0; r < setups.size(); ++r) {
    VecX psi0(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      psi0[i] = rng.uniform(-sim.perturbation, sim.perturbation);
    }
    Field rhs;
    if (majority) {
      const Vec3 drives(encode_bit(setups[r].inputs[0]), encode_bit(setups[r].inputs[1]),
                        gate.mode == GateMode::And ? 0.0 : 0.5 * kTwoPi);
      const Vec3 gains(gate.params.gamma_i, gate.params.gamma_j, gate.params.gamma);
      rhs = [drives, gains](const VecX& p, double) {
        return VecX(majority_phase_rhs(Vec3(p[0], p[1], p[2]), drives, gains));
      };
    } else {
      const double psi_dj = encode_bit(setups[r].inputs[0]);
      const double rho = gate.params.rho;
      const double gamma = gate.params.gamma;
      rhs = [psi_dj, rho, gamma](const VecX& p, double) {
        return VecX(not_phase_rhs(p[0], p[1], psi_dj, rho, gamma));
      };
    }
    const Trajectory traj = integrate(rhs, psi0, sim.tau_end, sim.h, sim.sample_every,
                                      TrajectoryKind::PhaseState);
    finish_row(rows[r], traj, output_index, sim);
  }
  return rows;
}

NetworkSpec compose(const std::vector<GateInstance>& gates,
                    const std::map<std::string, std::string>& wiring) {
  NetworkSpec net;
  std::set<std::string> ids;
  std::map<std::string, std::size_t> gate_of_node;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const auto& gate = gates[g];
    if (gate.kind == GateKind::Register) {
      throw ConfigError("register fragments are not composable");
    }
    const NetworkSpec fragment = gate.kind == GateKind::Majority
                                     ? build_majority(gate, 0, 0)
                                     : build_not(gate, 0);
    for (const auto& osc : fragment.oscillators) {
      if (!ids.insert(osc.id).second) {
        throw ConfigError("node id '" + osc.id + "' appears in more than one gate");
      }
      gate_of_node[osc.id] = g;
      net.oscillators.push_back(osc);
    }
    net.edges.insert(net.edges.end(), fragment.edges.begin(), fragment.edges.end());
    net.sources.insert(net.sources.end(), fragment.sources.begin(),
                       fragment.sources.end());
  }

  // Gate-level acyclicity via repeated removal of sink-free gates.
  {
    std::vector<std::vector<std::size_t>> succ(gates.size());
    std::vector<int> indegree(gates.size(), 0);
    for (const auto& [out_id, in_id] : wiring) {
      const auto from = gate_of_node.find(out_id);
      const auto to = gate_of_node.find(in_id);
      if (from == gate_of_node.end() || to == gate_of_node.end()) {
        throw ConfigError("wiring references unknown node ids");
      }
      succ[from->second].push_back(to->second);
      ++indegree[to->second];
    }
    std::vector<std::size_t> queue;
    for (std::size_t g = 0; g < gates.size(); ++g) {
      if (indegree[g] == 0) queue.push_back(g);
    }
    std::size_t removed = 0;
    while (!queue.empty()) {
      const std::size_t g = queue.back();
      queue.pop_back();
      ++removed;
      for (std::size_t s : succ[g]) {
        if (--indegree[s] == 0) queue.push_back(s);
      }
    }
    if (removed != gates.size()) throw ConfigError("gate wiring contains a cycle");
  }

  for (const auto& [out_id, in_id] : wiring) {
    bool replaced = false;
    for (auto it = net.sources.begin(); it != net.sources.end(); ++it) {
      if (it->target == in_id) {
        net.edges.push_back({out_id, in_id, 0.0, it->gamma_d, true});
        net.sources.erase(it);
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      throw ConfigError("wired input '" + in_id + "' has no drive to replace");
    }
  }
  return net;
}

void set_drive_phase(NetworkSpec& net, const std::string& target, double psi) {
  for (auto& s : net.sources) {
    if (s.target == target) {
      s.psi_d = psi;
      return;
    }
  }
  throw ConfigError("no drive on node '" + target + "'");
}

}  // namespace osclogic
