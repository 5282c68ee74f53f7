#pragma once

#include <string>

#include "osclogic/dynamics.hpp"
#include "osclogic/integrator.hpp"

namespace osclogic {

// Plain-text netlist.
//
//   # comment
//   [osc <id>]            alpha = <decimal>
//   [edge <from> <to>]    rho, gamma = <decimal>; directed = true|false
//   [drive <id>]          psi_d, gamma_d = <decimal>
//   [sim]                 tau_end, h = <decimal>; seed = <integer>
//
// Unknown sections or keys, duplicate ids, and malformed numbers are rejected
// with line-numbered ParseErrors. Omitted [sim] keys default to tau_end=3000,
// h=0.01, seed=42. The reference node is inferred: the unique node that has
// outgoing directed edges and no incoming influence (no drive, no undirected
// edge, no directed edge pointing at it).

struct ParsedNetlist {
  NetworkSpec network;
  SimConfig sim;
};

ParsedNetlist parse_netlist(const std::string& text);

// Inverse of parse_netlist up to formatting: parse(emit(n, s)) reproduces the
// same NetworkSpec and SimConfig (values are written with round-trip
// precision).
std::string emit_netlist(const NetworkSpec& net, const SimConfig& sim);

// Human-readable averaged phase model of the netlist, one equation per node.
std::string reduce_description(const NetworkSpec& net);

}  // namespace osclogic
