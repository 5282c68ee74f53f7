#pragma once

#include <string>
#include <vector>

#include "osclogic/dynamics.hpp"
#include "osclogic/integrator.hpp"

namespace osclogic {

// Kernel used for batched full-state integration. `Auto` picks the widest
// one the CPU supports. Scalar and SIMD kernels execute the same per-lane
// operation sequence (compiled without FP contraction), so their outputs are
// bitwise identical; the equivalence suite enforces that.
enum class Kernel { Auto, Scalar, Avx2 };

bool kernel_available(Kernel k);
Kernel resolve_kernel(Kernel k);
std::string kernel_name(Kernel k);

// Integrates `initial.size()` independent replicas of the same network in
// lock step (one trajectory per lane). Lanes may differ in initial state and,
// when `drive_psi` is given (per lane, per drive, matching net.drives),
// in drive phases — which is how independent truth-table rows and sweep
// replicas share one inner loop.
std::vector<Trajectory> integrate_batch(
    const CompiledNetwork& net, const std::vector<VecX>& initial,
    double tau_end, double h, int sample_every, Kernel kernel = Kernel::Auto,
    const std::vector<std::vector<double>>* drive_psi = nullptr);

}  // namespace osclogic
