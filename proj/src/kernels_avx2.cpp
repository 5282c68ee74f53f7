// AVX2 variant of the batched RK4 kernel. Four lanes per vector; every
// per-lane operation mirrors kernels_scalar.cpp exactly (no FMA, no
// reassociation), so results are bitwise identical to the scalar kernel.
// Lane counts are padded to a multiple of 4 by the driver.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "kernels.hpp"

namespace osclogic::kernels {

namespace {

void eval_field(const KernelNet& net, const KernelWork& w, const double* in,
                double* out, double tau) {
  const int P = w.padded;
  const __m256d one = _mm256_set1_pd(1.0);
  for (int i = 0; i < net.n_nodes; ++i) {
    const __m256d a = _mm256_set1_pd(net.alpha[i]);
    const double* x = in + (2 * i) * P;
    const double* y = in + (2 * i + 1) * P;
    double* dx = out + (2 * i) * P;
    double* dy = out + (2 * i + 1) * P;
    for (int l = 0; l < P; l += 4) {
      const __m256d xv = _mm256_loadu_pd(x + l);
      const __m256d yv = _mm256_loadu_pd(y + l);
      _mm256_storeu_pd(dx + l, yv);
      // a*(1 - y*y)*y - x, left to right
      const __m256d nl = _mm256_mul_pd(
          _mm256_mul_pd(a, _mm256_sub_pd(one, _mm256_mul_pd(yv, yv))), yv);
      _mm256_storeu_pd(dy + l, _mm256_sub_pd(nl, xv));
    }
  }
  for (int e = 0; e < net.n_res; ++e) {
    const KLin& r = net.res[e];
    const __m256d coef = _mm256_set1_pd(r.coef);
    const double* xt = in + (2 * r.target) * P;
    const double* xo = in + (2 * r.other) * P;
    double* dx = out + (2 * r.target) * P;
    for (int l = 0; l < P; l += 4) {
      const __m256d term = _mm256_mul_pd(
          coef, _mm256_add_pd(_mm256_loadu_pd(xt + l), _mm256_loadu_pd(xo + l)));
      _mm256_storeu_pd(dx + l, _mm256_sub_pd(_mm256_loadu_pd(dx + l), term));
    }
  }
  for (int e = 0; e < net.n_cond; ++e) {
    const KLin& c = net.cond[e];
    const __m256d coef = _mm256_set1_pd(c.coef);
    const double* yt = in + (2 * c.target + 1) * P;
    const double* yo = in + (2 * c.other + 1) * P;
    double* dy = out + (2 * c.target + 1) * P;
    for (int l = 0; l < P; l += 4) {
      const __m256d term = _mm256_mul_pd(
          coef, _mm256_sub_pd(_mm256_loadu_pd(yt + l), _mm256_loadu_pd(yo + l)));
      _mm256_storeu_pd(dy + l, _mm256_sub_pd(_mm256_loadu_pd(dy + l), term));
    }
  }
  if (net.n_drv > 0) {
    const __m256d s = _mm256_set1_pd(net.amp * std::sin(tau));
    const __m256d c = _mm256_set1_pd(net.amp * std::cos(tau));
    for (int d = 0; d < net.n_drv; ++d) {
      const KDrive& dr = net.drv[d];
      const __m256d coef = _mm256_set1_pd(dr.coef);
      const double* yt = in + (2 * dr.target + 1) * P;
      const double* cp = w.drv_cos + d * P;
      const double* sp = w.drv_sin + d * P;
      double* dy = out + (2 * dr.target + 1) * P;
      for (int l = 0; l < P; l += 4) {
        const __m256d y_d = _mm256_add_pd(_mm256_mul_pd(s, _mm256_loadu_pd(cp + l)),
                                          _mm256_mul_pd(c, _mm256_loadu_pd(sp + l)));
        const __m256d term =
            _mm256_mul_pd(coef, _mm256_sub_pd(_mm256_loadu_pd(yt + l), y_d));
        _mm256_storeu_pd(dy + l, _mm256_sub_pd(_mm256_loadu_pd(dy + l), term));
      }
    }
  }
}

void axpy(const KernelWork& w, const double* base, double coef, const double* k,
          double* out) {
  const int n = w.dim * w.padded;
  const __m256d cv = _mm256_set1_pd(coef);
  for (int i = 0; i < n; i += 4) {
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(base + i),
                                    _mm256_mul_pd(cv, _mm256_loadu_pd(k + i)));
    _mm256_storeu_pd(out + i, v);
  }
}

}  // namespace

void batch_step_avx2(const KernelNet& net, const KernelWork& w, double tau, double h) {
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
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d h6v = _mm256_set1_pd(h6);
  for (int i = 0; i < n; i += 4) {
    // k1 + 2*k2 + 2*k3 + k4, left to right
    __m256d sum = _mm256_add_pd(_mm256_loadu_pd(w.k1 + i),
                                _mm256_mul_pd(two, _mm256_loadu_pd(w.k2 + i)));
    sum = _mm256_add_pd(sum, _mm256_mul_pd(two, _mm256_loadu_pd(w.k3 + i)));
    sum = _mm256_add_pd(sum, _mm256_loadu_pd(w.k4 + i));
    const __m256d v =
        _mm256_add_pd(_mm256_loadu_pd(w.state + i), _mm256_mul_pd(h6v, sum));
    _mm256_storeu_pd(w.state + i, v);
  }
}

}  // namespace osclogic::kernels

#endif  // x86_64
