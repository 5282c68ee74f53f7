#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "osclogic/gates.hpp"
#include "osclogic/integrator.hpp"
#include "osclogic/stability.hpp"

namespace osclogic {

// Shortest text that parses back to the identical double ("%.17g").
std::string format_double(double value);

// Header `tau,node0_x,node0_y,...` (full state) or `tau,psi_0,...` (phase
// state), one row per sample, round-trip precision.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Inverse of write_trajectory_csv; the sample spacing is recovered as the
// step size (sample_every = 1).
Trajectory read_trajectory_csv(std::istream& is);

// Header `ref,in1,in2,expected,observed,psi_i,psi_j,psi_k,locked`. Two-node
// gates leave in2 and psi_i empty; unresolved observations are empty.
void write_truth_table_csv(std::ostream& os, const std::vector<TruthTableRow>& rows);

std::string format_truth_table_text(const std::vector<TruthTableRow>& rows);

// Header `psi_*,eig_real_*,class,liapunov_pass`.
void write_stability_csv(std::ostream& os, const std::vector<EquilibriumReport>& reports);

}  // namespace osclogic
