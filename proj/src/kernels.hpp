#pragma once

// Internal kernel interface for batched RK4 on compiled networks.
//
// Deliberately free of Eigen and other heavy headers: the AVX2 translation
// unit is compiled with -mavx2, and any inline function it shared with
// generic translation units could be resolved to the AVX2 copy at link time,
// defeating runtime dispatch on older CPUs.

namespace osclogic::kernels {

struct KLin {
  int target;
  int other;
  double coef;
};

struct KDrive {
  int target;
  double coef;
};

struct KernelNet {
  int n_nodes;
  const double* alpha;
  const KLin* res;
  int n_res;
  const KLin* cond;
  int n_cond;
  const KDrive* drv;
  int n_drv;
  double amp;  // drive amplitude
};

// Lane-major SoA buffers: entry (var v, lane l) lives at [v * padded + l].
// Drive phase tables are [drive d, lane l] -> d * padded + l.
struct KernelWork {
  int dim;
  int lanes;
  int padded;
  double* state;
  double* tmp;
  double* k1;
  double* k2;
  double* k3;
  double* k4;
  const double* drv_cos;
  const double* drv_sin;
};

void batch_step_scalar(const KernelNet& net, const KernelWork& w, double tau, double h);

// TODO: NEON variant for arm64; the dispatch table and lane padding already
// accommodate a second vector width.
#if defined(__x86_64__) || defined(_M_X64)
void batch_step_avx2(const KernelNet& net, const KernelWork& w, double tau, double h);
#endif

bool avx2_supported();

}  // namespace osclogic::kernels
