#pragma once

#include <stdexcept>
#include <string>

namespace osclogic {

// Bad values fed to a pure function (non-finite state, out-of-range parameter).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Structural problems in a network/netlist/gate description.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Netlist text that cannot be turned into a NetworkSpec. `line` is 1-based;
// 0 means the error is not tied to a single line.
struct ParseError : ConfigError {
  int line;
  ParseError(int line_, const std::string& msg)
      : ConfigError(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
        line(line_) {}
};

// Numerical failure while integrating; carries the time of failure.
struct IntegrationError : std::runtime_error {
  double tau;
  IntegrationError(double tau_, const std::string& msg)
      : std::runtime_error(msg + " at tau=" + std::to_string(tau_)), tau(tau_) {}
};

// Amplitude collapsed below the oscillation threshold inside the lock window.
struct NotOscillatingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Steady phase fell inside the guard band around the bit decision boundary.
struct AmbiguousPhaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace osclogic
