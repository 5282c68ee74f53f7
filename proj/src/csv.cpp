#include "osclogic/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace osclogic {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const int n = traj.n_nodes();
  os << "tau";
  if (traj.kind == TrajectoryKind::FullState) {
    for (int i = 0; i < n; ++i) os << ",node" << i << "_x,node" << i << "_y";
  } else {
    for (int i = 0; i < n; ++i) os << ",psi_" << i;
  }
  os << "\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    os << format_double(traj.times[s]);
    const VecX& st = traj.states[s];
    for (Eigen::Index v = 0; v < st.size(); ++v) os << ',' << format_double(st[v]);
    os << "\n";
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_strict_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw ParseError(0, "bad number '" + text + "'");
  return value;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(0, "empty trajectory file");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "tau") {
    throw ParseError(1, "trajectory header must start with 'tau'");
  }
  Trajectory traj;
  traj.kind = (header.size() > 1 && header[1].find("_x") != std::string::npos)
                  ? TrajectoryKind::FullState
                  : TrajectoryKind::PhaseState;
  const auto dim = header.size() - 1;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(lineno, "row width does not match the header");
    }
    traj.times.push_back(parse_strict_double(fields[0]));
    VecX st(static_cast<Eigen::Index>(dim));
    for (std::size_t v = 0; v < dim; ++v) st[static_cast<Eigen::Index>(v)] =
        parse_strict_double(fields[v + 1]);
    traj.states.push_back(std::move(st));
  }
  if (traj.times.size() >= 2) {
    traj.h = traj.times[1] - traj.times[0];
    traj.sample_every = 1;
  }
  return traj;
}

void write_truth_table_csv(std::ostream& os, const std::vector<TruthTableRow>& rows) {
  os << "ref,in1,in2,expected,observed,psi_i,psi_j,psi_k,locked\n";
  for (const auto& row : rows) {
    os << row.reference_bit << ',' << row.inputs.at(0) << ',';
    if (row.inputs.size() > 1) os << row.inputs[1];
    os << ',' << row.expected << ',';
    if (row.observed) os << *row.observed;
    os << ',';
    const bool three = row.psi.size() == 3;
    if (three) os << format_double(row.psi[0]);
    os << ',';
    if (row.psi.size() >= 2) {
      os << format_double(row.psi[three ? 1 : 0]) << ','
         << format_double(row.psi[three ? 2 : 1]);
    } else {
      os << ',';
    }
    os << ',' << (row.locked ? 1 : 0) << "\n";
  }
}

std::string format_truth_table_text(const std::vector<TruthTableRow>& rows) {
  std::ostringstream os;
  os << "ref  in   expected  observed  locked  steady psi\n";
  for (const auto& row : rows) {
    os << ' ' << row.reference_bit << "   ";
    std::string in;
    for (int b : row.inputs) in += static_cast<char>('0' + b);
    os << std::left << std::setw(5) << in;
    os << std::setw(10) << row.expected;
    os << std::setw(10) << (row.observed ? std::to_string(*row.observed) : "-");
    os << std::setw(8) << (row.locked ? "yes" : "NO");
    os << std::right << std::fixed << std::setprecision(4);
    for (Eigen::Index i = 0; i < row.psi.size(); ++i) os << ' ' << std::setw(8) << row.psi[i];
    os.unsetf(std::ios::floatfield);
    if (!row.note.empty()) os << "  (" << row.note << ')';
    os << '\n';
  }
  return os.str();
}

void write_stability_csv(std::ostream& os, const std::vector<EquilibriumReport>& reports) {
  if (reports.empty()) {
    os << "class,liapunov_pass\n";
    return;
  }
  const auto dim = reports.front().point.size();
  for (Eigen::Index i = 0; i < dim; ++i) os << "psi_" << i << ',';
  for (Eigen::Index i = 0; i < dim; ++i) os << "eig_real_" << i << ',';
  os << "class,liapunov_pass\n";
  for (const auto& r : reports) {
    for (Eigen::Index i = 0; i < dim; ++i) os << format_double(r.point[i]) << ',';
    for (Eigen::Index i = 0; i < dim; ++i) {
      os << format_double(r.eigenvalues[i].real()) << ',';
    }
    os << to_string(r.classification) << ',';
    if (r.liapunov) os << (r.liapunov->passed() ? 1 : 0);
    os << "\n";
  }
}

}  // namespace osclogic
