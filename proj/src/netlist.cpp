#include "osclogic/netlist.hpp"

#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "osclogic/csv.hpp"

namespace osclogic {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_number(int line, const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw ParseError(line, key + ": '" + text + "' is not a finite decimal");
  }
  return v;
}

std::uint64_t parse_seed(int line, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ParseError(line, "seed: '" + text + "' is not an unsigned integer");
  }
  return v;
}

bool parse_flag(int line, const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ParseError(line, key + ": expected true or false, got '" + text + "'");
}

struct Section {
  int line;
  std::string kind;
  std::vector<std::string> args;
  std::map<std::string, std::pair<int, std::string>> keys;  // key -> (line, value)
};

std::optional<std::string> infer_reference(const NetworkSpec& net) {
  std::vector<std::string> candidates;
  for (const auto& osc : net.oscillators) {
    bool outgoing_directed = false;
    bool influenced = false;
    for (const auto& e : net.edges) {
      if (e.directed && e.from == osc.id) outgoing_directed = true;
      if (e.to == osc.id || (!e.directed && e.from == osc.id)) influenced = true;
    }
    for (const auto& s : net.sources) {
      if (s.target == osc.id) influenced = true;
    }
    if (outgoing_directed && !influenced) candidates.push_back(osc.id);
  }
  if (candidates.size() == 1) return candidates.front();
  return std::nullopt;
}

}  // namespace

ParsedNetlist parse_netlist(const std::string& text) {
  std::vector<Section> sections;
  {
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
      ++lineno;
      const std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
        const auto tokens = split_ws(line.substr(1, line.size() - 2));
        if (tokens.empty()) throw ParseError(lineno, "empty section header");
        Section sec;
        sec.line = lineno;
        sec.kind = tokens[0];
        sec.args.assign(tokens.begin() + 1, tokens.end());
        sections.push_back(std::move(sec));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ParseError(lineno, "expected 'key = value' or a [section] header");
      }
      if (sections.empty()) throw ParseError(lineno, "key outside of any section");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty()) throw ParseError(lineno, "malformed 'key = value'");
      auto& keys = sections.back().keys;
      if (!keys.emplace(key, std::make_pair(lineno, value)).second) {
        throw ParseError(lineno, "duplicate key '" + key + "' in this section");
      }
    }
  }

  ParsedNetlist out;
  bool saw_sim = false;
  const auto expect_keys = [](const Section& sec, std::initializer_list<const char*> allowed) {
    for (const auto& [key, lv] : sec.keys) {
      bool ok = false;
      for (const char* a : allowed) {
        if (key == a) ok = true;
      }
      if (!ok) {
        throw ParseError(lv.first, "unknown key '" + key + "' in [" + sec.kind + "]");
      }
    }
  };

  std::set<std::string> declared;
  for (const auto& sec : sections) {
    if (sec.kind == "osc") {
      if (sec.args.size() != 1) throw ParseError(sec.line, "[osc] needs exactly one id");
      expect_keys(sec, {"alpha"});
      OscillatorSpec osc;
      osc.id = sec.args[0];
      if (!declared.insert(osc.id).second) {
        throw ParseError(sec.line, "duplicate oscillator id '" + osc.id + "'");
      }
      if (auto it = sec.keys.find("alpha"); it != sec.keys.end()) {
        osc.alpha = parse_number(it->second.first, "alpha", it->second.second);
        if (!(osc.alpha > 0.0)) throw ParseError(it->second.first, "alpha must be positive");
      }
      out.network.oscillators.push_back(osc);
    } else if (sec.kind == "edge") {
      if (sec.args.size() != 2) throw ParseError(sec.line, "[edge] needs '<from> <to>'");
      expect_keys(sec, {"rho", "gamma", "directed"});
      CouplingEdge edge;
      edge.from = sec.args[0];
      edge.to = sec.args[1];
      if (auto it = sec.keys.find("rho"); it != sec.keys.end()) {
        edge.rho = parse_number(it->second.first, "rho", it->second.second);
        if (edge.rho < 0.0) throw ParseError(it->second.first, "rho must be >= 0");
      }
      if (auto it = sec.keys.find("gamma"); it != sec.keys.end()) {
        edge.gamma = parse_number(it->second.first, "gamma", it->second.second);
        if (edge.gamma < 0.0) throw ParseError(it->second.first, "gamma must be >= 0");
      }
      if (auto it = sec.keys.find("directed"); it != sec.keys.end()) {
        edge.directed = parse_flag(it->second.first, "directed", it->second.second);
      }
      out.network.edges.push_back(edge);
    } else if (sec.kind == "drive") {
      if (sec.args.size() != 1) throw ParseError(sec.line, "[drive] needs exactly one id");
      expect_keys(sec, {"psi_d", "gamma_d"});
      DrivenSource src;
      src.target = sec.args[0];
      if (auto it = sec.keys.find("psi_d"); it != sec.keys.end()) {
        src.psi_d = parse_number(it->second.first, "psi_d", it->second.second);
      }
      if (auto it = sec.keys.find("gamma_d"); it != sec.keys.end()) {
        src.gamma_d = parse_number(it->second.first, "gamma_d", it->second.second);
        if (src.gamma_d < 0.0) throw ParseError(it->second.first, "gamma_d must be >= 0");
      }
      out.network.sources.push_back(src);
    } else if (sec.kind == "sim") {
      if (!sec.args.empty()) throw ParseError(sec.line, "[sim] takes no arguments");
      if (saw_sim) throw ParseError(sec.line, "more than one [sim] section");
      saw_sim = true;
      expect_keys(sec, {"tau_end", "h", "seed"});
      if (auto it = sec.keys.find("tau_end"); it != sec.keys.end()) {
        out.sim.tau_end = parse_number(it->second.first, "tau_end", it->second.second);
        if (!(out.sim.tau_end > 0.0)) throw ParseError(it->second.first, "tau_end must be > 0");
      }
      if (auto it = sec.keys.find("h"); it != sec.keys.end()) {
        out.sim.h = parse_number(it->second.first, "h", it->second.second);
        if (!(out.sim.h > 0.0)) throw ParseError(it->second.first, "h must be > 0");
      }
      if (auto it = sec.keys.find("seed"); it != sec.keys.end()) {
        out.sim.seed = parse_seed(it->second.first, it->second.second);
      }
    } else {
      throw ParseError(sec.line, "unknown section [" + sec.kind + "]");
    }
  }

  // Semantic checks with the offending section named.
  for (std::size_t e = 0; e < out.network.edges.size(); ++e) {
    const auto& edge = out.network.edges[e];
    if (!declared.count(edge.from) || !declared.count(edge.to)) {
      throw ParseError(0, "[edge " + edge.from + " " + edge.to +
                              "] references an undeclared oscillator");
    }
    if (edge.from == edge.to) {
      throw ParseError(0, "[edge " + edge.from + " " + edge.to + "] is a self loop");
    }
  }
  for (const auto& src : out.network.sources) {
    if (!declared.count(src.target)) {
      throw ParseError(0, "[drive " + src.target + "] references an undeclared oscillator");
    }
  }

  out.network.reference = infer_reference(out.network);
  return out;
}

std::string emit_netlist(const NetworkSpec& net, const SimConfig& sim) {
  std::ostringstream os;
  for (const auto& osc : net.oscillators) {
    os << "[osc " << osc.id << "]\n";
    os << "alpha = " << format_double(osc.alpha) << "\n\n";
  }
  for (const auto& e : net.edges) {
    os << "[edge " << e.from << ' ' << e.to << "]\n";
    os << "rho = " << format_double(e.rho) << "\n";
    os << "gamma = " << format_double(e.gamma) << "\n";
    os << "directed = " << (e.directed ? "true" : "false") << "\n\n";
  }
  for (const auto& s : net.sources) {
    os << "[drive " << s.target << "]\n";
    os << "psi_d = " << format_double(s.psi_d) << "\n";
    os << "gamma_d = " << format_double(s.gamma_d) << "\n\n";
  }
  os << "[sim]\n";
  os << "tau_end = " << format_double(sim.tau_end) << "\n";
  os << "h = " << format_double(sim.h) << "\n";
  os << "seed = " << sim.seed << "\n";
  return os.str();
}

std::string reduce_description(const NetworkSpec& net) {
  const CompiledNetwork compiled = compile(net);
  std::ostringstream os;
  os << "# averaged phase model, one deviation equation per node (rad per unit tau)\n";
  char buf[64];
  const auto coef = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  for (int i = 0; i < compiled.n_nodes; ++i) {
    os << "dpsi_" << compiled.ids[static_cast<std::size_t>(i)] << "/dtau =";
    bool any = false;
    for (const auto& e : compiled.resistive) {
      if (e.target != i) continue;
      os << " + " << coef(0.5 * e.coef) << "*sin(psi_" << compiled.ids[static_cast<std::size_t>(i)]
         << " - psi_" << compiled.ids[static_cast<std::size_t>(e.other)] << ")";
      any = true;
    }
    for (const auto& e : compiled.conductive) {
      if (e.target != i) continue;
      os << " - " << coef(0.5 * e.coef) << "*sin(psi_" << compiled.ids[static_cast<std::size_t>(i)]
         << " - psi_" << compiled.ids[static_cast<std::size_t>(e.other)] << ")";
      any = true;
    }
    for (const auto& d : compiled.drives) {
      if (d.target != i) continue;
      os << " - " << coef(0.5 * d.coef) << "*sin(psi_" << compiled.ids[static_cast<std::size_t>(i)]
         << " - " << coef(std::atan2(d.sin_psi, d.cos_psi)) << ")";
      any = true;
    }
    if (!any) os << " 0";
    os << "\n";
  }
  return os.str();
}

}  // namespace osclogic
