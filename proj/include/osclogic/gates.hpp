#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osclogic/batch.hpp"
#include "osclogic/dynamics.hpp"
#include "osclogic/integrator.hpp"
#include "osclogic/rng.hpp"

namespace osclogic {

enum class GateKind { Register, Not, Majority };
enum class GateMode { And, Or };  // majority function select
enum class Engine { FullState, PhaseModel };

struct GateParams {
  double rho = 0.05;
  double gamma = 0.10;
  double gamma_i = 0.06;
  double gamma_j = 0.06;
};

// Majority-mode defaults. The mutual/global coupling is deliberately much
// weaker than the input drives: the mixed-input equilibria are stable only
// for gamma_i well above gamma (gamma_i/gamma > 2 + 2*sqrt(2)).
inline GateParams default_majority_params() { return {0.05, 0.01, 0.06, 0.06}; }
inline GateParams default_not_params() { return {0.05, 0.10, 0.0, 0.0}; }
inline GateParams default_register_params() { return {0.05, 0.10, 0.0, 0.0}; }

struct GateInstance {
  GateKind kind = GateKind::Not;
  GateMode mode = GateMode::And;
  std::vector<std::string> input_nodes;
  std::string output_node;
  GateParams params;

  // Enforces the per-kind gain constraints; throws ConfigError.
  void validate() const;
};

GateInstance make_not_gate(const std::string& prefix = "",
                           GateParams params = default_not_params());
GateInstance make_majority_gate(GateMode mode, const std::string& prefix = "",
                                GateParams params = default_majority_params());

// Bit encoding: in-phase = 0, anti-phase = 1.
double encode_bit(int bit);

// Threshold decode of a steady deviation. Throws AmbiguousPhaseError when the
// wrapped phase lies within 0.2 rad of the pi/2 decision boundary.
int decode_bit(double psi);

// Two units coupled through the resistive channel; the input unit carries a
// conductive drive with the encoded input bit.
NetworkSpec build_not(const GateInstance& gate, int input_bit);

// Three units with all-to-all conductive coupling, input drives on the two
// input units and a global function-select drive (0 for AND, pi for OR) on
// every unit.
NetworkSpec build_majority(const GateInstance& gate, int bit1, int bit2);

struct TruthTableRow {
  int reference_bit = 0;
  std::vector<int> inputs;
  int expected = 0;
  std::optional<int> observed;  // empty when unlocked or ambiguous
  VecX psi;                     // steady deviations, node order of the netlist
  bool locked = false;
  std::string note;

  bool ok() const { return locked && observed && *observed == expected; }
};

// Simulates every input combination of the gate to steady state and decodes
// the output. Full-state rows run as lanes of one batched integration.
std::vector<TruthTableRow> run_truth_table(const GateInstance& gate, Engine engine,
                                           const SimConfig& sim,
                                           Kernel kernel = Kernel::Auto);

// Merges gate fragments into one circuit. `wiring` maps an upstream output
// node id to a downstream input node id; the downstream input's drive source
// is replaced by a directed conductive edge of the same strength from the
// upstream output. Wiring must be acyclic at gate level.
NetworkSpec compose(const std::vector<GateInstance>& gates,
                    const std::map<std::string, std::string>& wiring);

void set_drive_phase(NetworkSpec& net, const std::string& target, double psi);

// Integrates a network with seeded initial conditions and reports the lock
// state. Full-state engine: nodes start on the cycle with perturbed phases;
// phase engine: integrates the averaged netlist model from perturbed
// deviations. The deviation reference is the declared reference node if any,
// otherwise the ideal drive clock. Pass `out_trajectory` to keep the samples.
LockReport simulate_to_lock(const NetworkSpec& net, Engine engine,
                            const SimConfig& sim, Kernel kernel = Kernel::Auto,
                            Trajectory* out_trajectory = nullptr);

}  // namespace osclogic
