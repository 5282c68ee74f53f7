// Command line front end: netlist simulation, gate truth tables, stability
// reports, and averaged-model reduction.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "osclogic/csv.hpp"
#include "osclogic/gates.hpp"
#include "osclogic/netlist.hpp"
#include "osclogic/phase_model.hpp"
#include "osclogic/stability.hpp"

namespace {

using namespace osclogic;

constexpr int kExitNotMet = 1;    // simulation ran but the claim did not hold
constexpr int kExitBadInput = 2;  // netlist/argument problems
constexpr int kExitSimError = 3;  // numerical failure while simulating

std::uint64_t effective_seed(std::uint64_t from_config) {
  if (const char* env = std::getenv("OSC_LOGIC_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    std::cerr << "warning: ignoring malformed OSC_LOGIC_SEED\n";
  }
  return from_config;
}

ParsedNetlist load_netlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot read netlist '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_netlist(text.str());
}

int cmd_simulate(const std::string& path, const std::string& engine_name,
                 const std::string& csv_path) {
  ParsedNetlist doc;
  try {
    doc = load_netlist(path);
  } catch (const ParseError& e) {
    std::cerr << "netlist error: " << e.what() << "\n";
    return kExitBadInput;
  }
  doc.sim.seed = effective_seed(doc.sim.seed);
  const Engine engine = engine_name == "phase" ? Engine::PhaseModel : Engine::FullState;

  Trajectory traj;
  LockReport report;
  try {
    report = simulate_to_lock(doc.network, engine, doc.sim, Kernel::Auto, &traj);
  } catch (const std::exception& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitSimError;
  }

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "cannot write '" << csv_path << "'\n";
      return kExitSimError;
    }
    write_trajectory_csv(out, traj);
  }

  std::cout << "engine: " << (engine == Engine::FullState ? "full" : "phase");
  if (engine == Engine::FullState) {
    std::cout << " (kernel: " << kernel_name(resolve_kernel(Kernel::Auto)) << ")";
  }
  std::cout << "\nseed: " << doc.sim.seed << "\n";
  std::cout << "locked: " << (report.locked ? "yes" : "no")
            << "   drift: " << report.residual << " rad/tau\n";
  for (Eigen::Index i = 0; i < report.phase_diffs.size(); ++i) {
    std::cout << "psi[" << doc.network.oscillators[static_cast<std::size_t>(i)].id
              << "] = " << format_double(report.phase_diffs[i]);
    try {
      std::cout << "  (bit " << decode_bit(report.phase_diffs[i]) << ")";
    } catch (const AmbiguousPhaseError&) {
      std::cout << "  (ambiguous)";
    }
    std::cout << "\n";
  }
  return report.locked ? 0 : kExitNotMet;
}

GateInstance gate_from_flags(const std::string& gate, double rho, double gamma,
                             double gamma_i) {
  if (gate == "not") {
    GateParams p = default_not_params();
    if (rho > 0.0) p.rho = rho;
    if (gamma > 0.0) p.gamma = gamma;
    return make_not_gate("", p);
  }
  GateParams p = default_majority_params();
  if (rho > 0.0) p.rho = rho;
  if (gamma > 0.0) p.gamma = gamma;
  if (gamma_i > 0.0) p.gamma_i = p.gamma_j = gamma_i;
  return make_majority_gate(gate == "or" ? GateMode::Or : GateMode::And, "", p);
}

int cmd_truth_table(const std::string& gate_name, const std::string& engine_name,
                    const std::string& csv_path, double rho, double gamma,
                    double gamma_i, std::uint64_t seed_flag) {
  GateInstance gate;
  try {
    gate = gate_from_flags(gate_name, rho, gamma, gamma_i);
  } catch (const ConfigError& e) {
    std::cerr << "gate error: " << e.what() << "\n";
    return kExitBadInput;
  }
  SimConfig sim;
  sim.seed = effective_seed(seed_flag);
  const Engine engine = engine_name == "phase" ? Engine::PhaseModel : Engine::FullState;

  std::vector<TruthTableRow> rows;
  try {
    rows = run_truth_table(gate, engine, sim);
  } catch (const std::exception& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitSimError;
  }
  std::cout << "gate: " << gate_name << "   engine: " << engine_name
            << "   seed: " << sim.seed << "\n";
  std::cout << format_truth_table_text(rows);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "cannot write '" << csv_path << "'\n";
      return kExitSimError;
    }
    write_truth_table_csv(out, rows);
  }
  for (const auto& row : rows) {
    if (!row.ok()) return kExitNotMet;
  }
  return 0;
}

bool parse_target(const std::string& text, VecX& out) {
  std::vector<double> values;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok == "pi") {
      values.push_back(0.5 * kTwoPi);
    } else if (tok == "-pi") {
      values.push_back(-0.5 * kTwoPi);
    } else {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') return false;
      values.push_back(v);
    }
  }
  if (values.empty()) return false;
  out = VecX(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out[static_cast<Eigen::Index>(i)] = values[i];
  return true;
}

int bit_of(double v) { return std::abs(wrap_phase(v)) > 1.0 ? 1 : 0; }

int cmd_stability(const std::string& gate_name, const std::string& target_text,
                  double rho_flag, double gamma_flag, double gamma_i_flag,
                  const std::string& csv_path, std::uint64_t seed_flag) {
  VecX target;
  if (!parse_target(target_text, target)) {
    std::cerr << "bad --target-eq '" << target_text << "'\n";
    return kExitBadInput;
  }
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    const double w = std::abs(wrap_phase(target[i]));
    if (w > 1e-9 && std::abs(w - 0.5 * kTwoPi) > 1e-9) {
      std::cerr << "target entries must be 0 or pi\n";
      return kExitBadInput;
    }
  }

  PhaseField rhs;
  StabilityClass expected;
  std::optional<LiapunovCertificate> certificate;
  Rng rng(effective_seed(seed_flag));

  try {
    if (gate_name == "register") {
      if (target.size() != 1) throw ConfigError("register target is one value");
      const double rho = rho_flag > 0.0 ? rho_flag : 0.05;
      const double gamma = gamma_flag > 0.0 ? gamma_flag : 0.10;
      rhs = [rho, gamma](const VecX& p) {
        VecX d(1);
        d[0] = register_phase_rhs(p[0], rho, gamma);
        return d;
      };
      const bool anti = bit_of(target[0]) == 1;
      if (rho == gamma) {
        expected = StabilityClass::NonHyperbolic;
      } else if (rho > gamma) {
        expected = anti ? StabilityClass::Stable : StabilityClass::Unstable;
      } else {
        expected = anti ? StabilityClass::Unstable : StabilityClass::Stable;
      }
    } else if (gate_name == "not") {
      if (target.size() != 2 || bit_of(target[1]) != 1 - bit_of(target[0])) {
        throw ConfigError("inverter targets are 0,pi or pi,0");
      }
      const double rho = rho_flag > 0.0 ? rho_flag : 0.05;
      const double gamma = gamma_flag > 0.0 ? gamma_flag : 0.10;
      const double psi_dj = encode_bit(bit_of(target[0]));
      rhs = [rho, gamma, psi_dj](const VecX& p) {
        return VecX(not_phase_rhs(p[0], p[1], psi_dj, rho, gamma));
      };
      expected = StabilityClass::Stable;
      VecX gains(2), drives(1);
      gains << rho, gamma;
      drives << psi_dj;
      certificate = liapunov_descent_check(CertifiedGate::Not, gains, drives, target,
                                           100, 0.3, rng);
    } else if (gate_name == "and" || gate_name == "or") {
      if (target.size() != 3) throw ConfigError("majority targets have three entries");
      const bool is_or = gate_name == "or";
      const int b1 = bit_of(target[0]);
      const int b2 = bit_of(target[1]);
      const int out = is_or ? (b1 | b2) : (b1 & b2);
      if (bit_of(target[2]) != out) {
        throw ConfigError("target output entry does not match the gate function");
      }
      const double gamma = gamma_flag > 0.0 ? gamma_flag : 0.05;
      const double gamma_i = gamma_i_flag > 0.0 ? gamma_i_flag : 0.30;
      const Vec3 drives_v(encode_bit(b1), encode_bit(b2), is_or ? 0.5 * kTwoPi : 0.0);
      const Vec3 gains_v(gamma_i, gamma_i, gamma);
      rhs = [drives_v, gains_v](const VecX& p) {
        return VecX(majority_phase_rhs(Vec3(p[0], p[1], p[2]), drives_v, gains_v));
      };
      expected = StabilityClass::Stable;
      VecX gains(3), drives(3);
      gains << gamma_i, gamma_i, gamma;
      drives << drives_v[0], drives_v[1], drives_v[2];
      certificate = liapunov_descent_check(CertifiedGate::Majority, gains, drives,
                                           target, 100, 0.3, rng);
    } else {
      std::cerr << "unknown gate '" << gate_name << "'\n";
      return kExitBadInput;
    }
  } catch (const ConfigError& e) {
    std::cerr << "stability error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const DomainError& e) {
    std::cerr << "stability error: " << e.what() << "\n";
    return kExitBadInput;
  }

  EquilibriumReport report = analyze_equilibrium(rhs, target);
  report.liapunov = certificate;

  std::cout << "gate: " << gate_name << "   target:";
  for (Eigen::Index i = 0; i < target.size(); ++i) std::cout << ' ' << format_double(target[i]);
  std::cout << "\neigenvalue real parts:";
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    std::cout << ' ' << format_double(report.eigenvalues[i].real());
  }
  std::cout << "\nclassification: " << to_string(report.classification)
            << "   (design claim: " << to_string(expected) << ")\n";
  if (certificate) {
    std::cout << "liapunov: V(eq)=" << certificate->value_at_eq
              << "  min over punctured ball=" << certificate->min_over_punctured_ball
              << "  worst descent violation=" << certificate->max_descent_violation
              << "  -> " << (certificate->passed() ? "pass" : "FAIL") << "\n";
  }

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "cannot write '" << csv_path << "'\n";
      return kExitSimError;
    }
    write_stability_csv(out, {report});
  }

  const bool ok = report.classification == expected &&
                  (!certificate || certificate->passed());
  return ok ? 0 : kExitNotMet;
}

int cmd_reduce(const std::string& path) {
  try {
    const ParsedNetlist doc = load_netlist(path);
    std::cout << reduce_description(doc.network);
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "netlist error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const ConfigError& e) {
    std::cerr << "netlist error: " << e.what() << "\n";
    return kExitBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled-oscillator logic: simulation, gates, stability"};
  app.require_subcommand(1);

  std::string netlist_path, engine = "full", csv_path, gate, target;
  double rho = 0.0, gamma = 0.0, gamma_i = 0.0;
  std::uint64_t seed = 42;

  auto* sim = app.add_subcommand("simulate", "integrate a netlist and report phase lock");
  sim->add_option("netlist", netlist_path, "netlist file")->required();
  sim->add_option("--engine", engine, "full | phase")
      ->check(CLI::IsMember({"full", "phase"}));
  sim->add_option("--csv", csv_path, "write the trajectory CSV here");

  auto* tt = app.add_subcommand("truth-table", "simulate a gate over all inputs");
  tt->add_option("--gate", gate, "not | and | or")
      ->required()
      ->check(CLI::IsMember({"not", "and", "or"}));
  tt->add_option("--engine", engine, "full | phase")
      ->check(CLI::IsMember({"full", "phase"}));
  tt->add_option("--csv", csv_path, "write the table CSV here");
  tt->add_option("--rho", rho, "resistive coupling override");
  tt->add_option("--gamma", gamma, "conductive coupling override");
  tt->add_option("--gamma-i", gamma_i, "input drive gain override (majority)");
  tt->add_option("--seed", seed, "perturbation seed");

  auto* st = app.add_subcommand("stability", "classify a gate equilibrium and certify it");
  st->add_option("--gate", gate, "register | not | and | or")
      ->required()
      ->check(CLI::IsMember({"register", "not", "and", "or"}));
  st->add_option("--target-eq", target, "comma list of 0/pi entries")->required();
  st->add_option("--rho", rho, "resistive coupling override");
  st->add_option("--gamma", gamma, "conductive coupling override");
  st->add_option("--gamma-i", gamma_i, "input drive gain override (majority)");
  st->add_option("--csv", csv_path, "write the report CSV here");
  st->add_option("--seed", seed, "descent-check seed");

  auto* red = app.add_subcommand("reduce", "print the averaged phase model of a netlist");
  red->add_option("netlist", netlist_path, "netlist file")->required();

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return cmd_simulate(netlist_path, engine, csv_path);
  if (tt->parsed()) return cmd_truth_table(gate, engine, csv_path, rho, gamma, gamma_i, seed);
  if (st->parsed()) return cmd_stability(gate, target, rho, gamma, gamma_i, csv_path, seed);
  if (red->parsed()) return cmd_reduce(netlist_path);
  return kExitBadInput;
}
