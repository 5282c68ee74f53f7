#include <cmath>

#include "kernels.hpp"

namespace osclogic::kernels {

namespace {

// Reference evaluation of the network field for every lane. The expression
// order here is the contract: the generic field and the SIMD kernel follow
// it operation for operation.
void eval_field(const KernelNet& net, const KernelWork& w, const double* in,
                double* out, double tau) {
  // Loops run over the padded lane count so padding lanes hold ordinary
  // (ignored) values rather than stale memory.
  const int P = w.padded;
  for (int i = 0; i < net.n_nodes; ++i) {
    const double a = net.alpha[i];
    const double* x = in + (2 * i) * P;
    const double* y = in + (2 * i + 1) * P;
    double* dx = out + (2 * i) * P;
    double* dy = out + (2 * i + 1) * P;
    for (int l = 0; l < P; ++l) {
      dx[l] = y[l];
      dy[l] = a * (1.0 - y[l] * y[l]) * y[l] - x[l];
    }
  }
  for (int e = 0; e < net.n_res; ++e) {
    const KLin& r = net.res[e];
    const double* xt = in + (2 * r.target) * P;
    const double* xo = in + (2 * r.other) * P;
    double* dx = out + (2 * r.target) * P;
    for (int l = 0; l < P; ++l) dx[l] -= r.coef * (xt[l] + xo[l]);
  }
  for (int e = 0; e < net.n_cond; ++e) {
    const KLin& c = net.cond[e];
    const double* yt = in + (2 * c.target + 1) * P;
    const double* yo = in + (2 * c.other + 1) * P;
    double* dy = out + (2 * c.target + 1) * P;
    for (int l = 0; l < P; ++l) dy[l] -= c.coef * (yt[l] - yo[l]);
  }
  if (net.n_drv > 0) {
    const double s = net.amp * std::sin(tau);
    const double c = net.amp * std::cos(tau);
    for (int d = 0; d < net.n_drv; ++d) {
      const KDrive& dr = net.drv[d];
      const double* yt = in + (2 * dr.target + 1) * P;
      const double* cp = w.drv_cos + d * P;
      const double* sp = w.drv_sin + d * P;
      double* dy = out + (2 * dr.target + 1) * P;
      for (int l = 0; l < P; ++l) {
        const double y_d = s * cp[l] + c * sp[l];
        dy[l] -= dr.coef * (yt[l] - y_d);
      }
    }
  }
}

void axpy(const KernelWork& w, const double* base, double coef, const double* k,
          double* out) {
  const int n = w.dim * w.padded;
  for (int i = 0; i < n; ++i) out[i] = base[i] + coef * k[i];
}

}  // namespace

void batch_step_scalar(const KernelNet& net, const KernelWork& w, double tau, double h) {
  const double hh = 0.5 * h;
  const double h6 = h / 6.0;

  eval_field(net, w, w.state, w.k1, tau);
  axpy(w, w.state, hh, w.k1, w.tmp);
  eval_field(net, w, w.tmp, w.k2, tau + hh);
  axpy(w, w.state, hh, w.k2, w.tmp);
  eval_field(net, w, w.tmp, w.k3, tau + hh);
  axpy(w, w.state, h, w.k3, w.tmp);
  eval_field(net, w, w.tmp, w.k4, tau + h);

  const int n = w.dim * w.padded;
  for (int i = 0; i < n; ++i) {
    w.state[i] = w.state[i] + h6 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
  }
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace osclogic::kernels
