#pragma once

#include <functional>
#include <vector>

#include "osclogic/dynamics.hpp"
#include "osclogic/integrator.hpp"

namespace osclogic {

// ---------------------------------------------------------------------------
// Cycle and frame data
// ---------------------------------------------------------------------------

// A 2*pi-periodic orbit together with the vector field it lives in. `xs`
// parametrizes the orbit by phase; `field` must be evaluable off-cycle in a
// tubular neighborhood (the phase/amplitude right-hand sides reconstruct
// states there).
struct LimitCycle {
  double period = kTwoPi;
  std::function<VecX(double)> xs;
  std::function<VecX(const VecX&)> field;

  VecX a_on_cycle(double theta) const { return field(xs(theta)); }
  // |a(x_s(theta))|, the orbit speed
  double speed(double theta) const { return a_on_cycle(theta).norm(); }
};

// Periodic basis/co-basis along the cycle. Column 0 of basis(theta) is the
// unit tangent a(x_s)/|a(x_s)|; cobasis(theta) holds the reciprocal rows, so
// cobasis * basis = I (bi-orthogonality).
struct FloquetFrame {
  std::function<MatX(double)> basis;       // U
  std::function<MatX(double)> cobasis;     // V = U^{-1}
  std::function<MatX(double)> dY_dtheta;   // d/dtheta of Y = [u_2 .. u_n]

  MatX Y(double theta) const;
  MatX Z(double theta) const;              // [v_2 .. v_n] as columns
  VecX v1(double theta) const;
  double biorthogonality_defect(double theta) const;
};

// Node coordinates in the cycle frame: phase plus transversal deviation.
struct NodePhaseState {
  double theta = 0.0;
  VecX amplitude;  // (n-1)-dimensional
};

using DetuneFn = std::function<VecX(const VecX&)>;
using CouplingFn = std::function<VecX(const std::vector<VecX>&)>;

// Perturbation bundle for one node. epsilon scales both detune and coupling;
// either function may be empty.
struct PerturbationSpec {
  double epsilon = 1.0;
  DetuneFn detune;
  CouplingFn coupling;
};

// ---------------------------------------------------------------------------
// Exact phase/amplitude right-hand sides
// ---------------------------------------------------------------------------

// Reciprocal of |a(x_s)| + v1^T dY/dtheta R, the factor that makes the
// cycle-frame coordinate change invertible. Throws DomainError("outside
// tubular neighborhood") when the denominator magnitude drops below 1e-9.
double k_factor(const LimitCycle& cycle, const FloquetFrame& frame, double theta,
                const VecX& amplitude);

// d(theta_i)/dtau = 1 + a_theta + eps*delta_a_theta + eps*C_theta for the
// node `i` of `nodes` (all node coordinates are needed to reconstruct the
// coupling arguments).
double phase_rhs_full(const LimitCycle& cycle, const FloquetFrame& frame,
                      std::size_t i, const std::vector<NodePhaseState>& nodes,
                      const PerturbationSpec& pert);

// d(R_i)/dtau = L(theta) R + a_R + eps*delta_a_R + eps*C_R.
VecX amplitude_rhs_full(const LimitCycle& cycle, const FloquetFrame& frame,
                        std::size_t i, const std::vector<NodePhaseState>& nodes,
                        const PerturbationSpec& pert);

// Phase equation on the cycle (amplitudes pinned to zero):
// d(psi_i)/dtau = delta_a(psi_i + tau) + C(psi_1 + tau, ..., psi_N + tau),
// projected with v1/|a| at theta_i. Epsilon is absorbed into the supplied
// functions. Empty entries contribute nothing.
VecX reduced_phase_rhs(const LimitCycle& cycle, const FloquetFrame& frame,
                       const VecX& psi, double tau,
                       const std::vector<DetuneFn>& detunes,
                       const std::vector<CouplingFn>& couplings);

// Mean over one period of c_fn(psi + tau) on a uniform tau grid (rectangle
// rule; spectrally accurate for smooth periodic integrands). quad_points must
// be >= 64.
double average_coupling(const std::function<double(const VecX&)>& c_fn,
                        const VecX& psi, int quad_points);

// ---------------------------------------------------------------------------
// Closed-form averaged models
// ---------------------------------------------------------------------------

// d(psi_k)/dtau = (rho - gamma) sin(psi_k)
double register_phase_rhs(double psi_k, double rho, double gamma);

// (d psi_j, d psi_k) of the two-node inverter.
Vec2 not_phase_rhs(double psi_j, double psi_k, double psi_dj, double rho,
                   double gamma);

// Three-node majority cell. drives = (psi_Di, psi_Dj, psi_D),
// gains = (gamma_i, gamma_j, gamma).
Vec3 majority_phase_rhs(const Vec3& psi, const Vec3& drives, const Vec3& gains);

// Averaged polar dynamics of the weakly nonlinear unit:
// d(theta)/dtau = 1, dA/dtau = (alpha/2) A (1 - (3/4) A^2).
Vec2 averaged_example_rhs(double theta, double amplitude, double alpha);

// Analytic Jacobian of the above at a point (theta-independent).
MatX averaged_example_jacobian(double amplitude, double alpha);

// Built-in cycle/frame pair: the averaged polar system in coordinates
// (theta, A) with its constant orthonormal Floquet basis u1=[1,0], u2=[0,1].
LimitCycle averaged_polar_cycle(double alpha);
FloquetFrame constant_orthonormal_frame();

// Coordinate helpers between averaged polar states (theta, A) and circuit
// states (x, y) = (-A cos theta, A sin theta).
Vec2 polar_to_circuit(const Vec2& polar);
// Pushes a circuit-coordinate coupling vector through the polar chart at the
// given circuit point: returns (c_theta, c_A).
Vec2 circuit_coupling_to_polar(const Vec2& circuit_state, const Vec2& c_circuit);

// Closed-form averaged phase model of an arbitrary compiled netlist: each
// resistive entry contributes +rho sin(psi_t - psi_o), each conductive entry
// -gamma sin(psi_t - psi_o), each drive -gamma_d sin(psi_t - psi_d).
Field averaged_netlist_rhs(const CompiledNetwork& net);

}  // namespace osclogic
