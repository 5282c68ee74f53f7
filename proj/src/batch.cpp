#include "osclogic/batch.hpp"

#include <cmath>

#include "kernels.hpp"

namespace osclogic {

namespace k = osclogic::kernels;

bool kernel_available(Kernel kernel) {
  switch (kernel) {
    case Kernel::Auto:
    case Kernel::Scalar:
      return true;
    case Kernel::Avx2:
#if defined(OSCLOGIC_HAVE_AVX2)
      return k::avx2_supported();
#else
      return false;
#endif
  }
  return false;
}

Kernel resolve_kernel(Kernel kernel) {
  if (kernel == Kernel::Auto) {
    return kernel_available(Kernel::Avx2) ? Kernel::Avx2 : Kernel::Scalar;
  }
  return kernel;
}

std::string kernel_name(Kernel kernel) {
  switch (kernel) {
    case Kernel::Auto: return "auto";
    case Kernel::Scalar: return "scalar";
    case Kernel::Avx2: return "avx2";
  }
  return "?";
}

std::vector<Trajectory> integrate_batch(
    const CompiledNetwork& net, const std::vector<VecX>& initial,
    double tau_end, double h, int sample_every, Kernel kernel,
    const std::vector<std::vector<double>>* drive_psi) {
  if (!(tau_end > 0.0) || !(h > 0.0)) throw DomainError("tau_end and h must be positive");
  if (sample_every < 1) throw DomainError("sample_every must be >= 1");
  if (initial.empty()) return {};

  const Kernel resolved = resolve_kernel(kernel);
  if (!kernel_available(resolved)) {
    throw ConfigError("kernel " + kernel_name(resolved) + " not available on this CPU");
  }

  const int dim = net.state_dim();
  const int lanes = static_cast<int>(initial.size());
  const int padded = (lanes + 3) & ~3;
  for (const auto& s : initial) {
    if (s.size() != dim) throw ConfigError("initial state dimension mismatch");
  }
  if (drive_psi) {
    if (static_cast<int>(drive_psi->size()) != lanes) {
      throw ConfigError("drive phase table must have one row per lane");
    }
    for (const auto& row : *drive_psi) {
      if (row.size() != net.drives.size()) {
        throw ConfigError("drive phase row must match the drive count");
      }
    }
  }

  // Flatten to the Eigen-free kernel view.
  std::vector<k::KLin> res, cond;
  res.reserve(net.resistive.size());
  cond.reserve(net.conductive.size());
  for (const auto& e : net.resistive) res.push_back({e.target, e.other, e.coef});
  for (const auto& e : net.conductive) cond.push_back({e.target, e.other, e.coef});
  std::vector<k::KDrive> drv;
  drv.reserve(net.drives.size());
  for (const auto& d : net.drives) drv.push_back({d.target, d.coef});

  const auto n_drv = net.drives.size();
  std::vector<double> drv_cos(n_drv * static_cast<std::size_t>(padded), 0.0);
  std::vector<double> drv_sin(n_drv * static_cast<std::size_t>(padded), 0.0);
  for (std::size_t d = 0; d < n_drv; ++d) {
    for (int l = 0; l < padded; ++l) {
      double cp = net.drives[d].cos_psi;
      double sp = net.drives[d].sin_psi;
      if (drive_psi && l < lanes) {
        const double psi = (*drive_psi)[static_cast<std::size_t>(l)][d];
        cp = std::cos(psi);
        sp = std::sin(psi);
      }
      drv_cos[d * static_cast<std::size_t>(padded) + static_cast<std::size_t>(l)] = cp;
      drv_sin[d * static_cast<std::size_t>(padded) + static_cast<std::size_t>(l)] = sp;
    }
  }

  const std::size_t buf = static_cast<std::size_t>(dim) * static_cast<std::size_t>(padded);
  std::vector<double> state(buf, 0.0), tmp(buf), k1(buf), k2(buf), k3(buf), k4(buf);
  for (int l = 0; l < lanes; ++l) {
    for (int v = 0; v < dim; ++v) {
      state[static_cast<std::size_t>(v) * padded + static_cast<std::size_t>(l)] =
          initial[static_cast<std::size_t>(l)][v];
    }
  }

  k::KernelNet knet{net.n_nodes,
                    net.alpha.data(),
                    res.data(),
                    static_cast<int>(res.size()),
                    cond.data(),
                    static_cast<int>(cond.size()),
                    drv.data(),
                    static_cast<int>(drv.size()),
                    kCycleAmplitude};
  k::KernelWork work{dim,        lanes,     padded,    state.data(),
                     tmp.data(), k1.data(), k2.data(), k3.data(),
                     k4.data(),  drv_cos.data(), drv_sin.data()};

  using StepFn = void (*)(const k::KernelNet&, const k::KernelWork&, double, double);
  StepFn step = &k::batch_step_scalar;
#if defined(OSCLOGIC_HAVE_AVX2)
  if (resolved == Kernel::Avx2) step = &k::batch_step_avx2;
#endif

  const double stride = h * sample_every;
  const long long n_samples = static_cast<long long>(std::floor(tau_end / stride + 1e-9));

  std::vector<Trajectory> out(static_cast<std::size_t>(lanes));
  for (int l = 0; l < lanes; ++l) {
    auto& t = out[static_cast<std::size_t>(l)];
    t.kind = TrajectoryKind::FullState;
    t.h = h;
    t.sample_every = sample_every;
    t.times.reserve(static_cast<std::size_t>(n_samples) + 1);
    t.states.reserve(static_cast<std::size_t>(n_samples) + 1);
    t.times.push_back(0.0);
    t.states.push_back(initial[static_cast<std::size_t>(l)]);
  }

  for (long long s = 0; s < n_samples; ++s) {
    for (int kk = 0; kk < sample_every; ++kk) {
      const long long step_idx = s * sample_every + kk;
      step(knet, work, static_cast<double>(step_idx) * h, h);
    }
    const double t_now = static_cast<double>((s + 1) * sample_every) * h;
    for (int l = 0; l < lanes; ++l) {
      VecX snap(dim);
      for (int v = 0; v < dim; ++v) {
        const double value =
            state[static_cast<std::size_t>(v) * padded + static_cast<std::size_t>(l)];
        if (!std::isfinite(value)) {
          throw IntegrationError(t_now, "non-finite state in lane " + std::to_string(l));
        }
        snap[v] = value;
      }
      auto& t = out[static_cast<std::size_t>(l)];
      t.times.push_back(t_now);
      t.states.push_back(std::move(snap));
    }
  }
  return out;
}

}  // namespace osclogic
