#pragma once

// Time evolution of the deformed PDE on the periodic grid.
//
// Two steppers share the trajectory machinery:
//  * step_rk4: classical explicit RK4 on the full right side.  Its dispersive
//    stability limit at eps = 1 is dt <~ 2.8 / k_max^3, hence the 0.1*dx^3
//    default step.
//  * integrating-factor RK4 (eps = 1 only): the linear u_xxx term is advanced
//    exactly in Fourier space and RK4 handles the advective remainder, which
//    lifts the third-derivative stability limit entirely.  evolve() selects it
//    automatically at eps = 1 so that coarse-dt conservation audits are
//    integrator-limited rather than stability-limited.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptkdv/charges.hpp"
#include "ptkdv/field.hpp"
#include "ptkdv/model.hpp"
#include "ptkdv/spectral.hpp"

namespace ptkdv {

enum class Integrator { Auto, Rk4, IfRk4 };

struct EvolveConfig {
  std::size_t grid_points = 256;  // power of two
  double domain_length = 2.0 * M_PI;
  double dt = 0.0;        // 0 selects the conservative default 0.1 * dx^3
  double t_final = 1.0;
  std::size_t snapshot_stride = 1;
  bool dealias = true;    // 2/3 rule applied to stepping states
  std::optional<double> singular_clamp{};
  Integrator integrator = Integrator::Auto;

  void validate() const {
    if (grid_points < 16) throw domain_error("EvolveConfig: grid_points must be >= 16");
    if (grid_points & (grid_points - 1))
      throw domain_error("EvolveConfig: grid_points must be a power of two");
    if (!(domain_length > 0.0)) throw domain_error("EvolveConfig: bad domain length");
    if (t_final < 0.0) throw domain_error("EvolveConfig: t_final must be >= 0");
    if (snapshot_stride < 1) throw domain_error("EvolveConfig: stride must be >= 1");
  }

  double effective_dt() const {
    if (dt > 0.0) return dt;
    const double dx = domain_length / static_cast<double>(grid_points);
    return 0.1 * dx * dx * dx;
  }
};

inline constexpr double kBlowupThreshold = 1e12;

namespace detail {

inline void check_finite(const Field& f, double t) {
  const double m = max_abs(f);
  if (!(m < kBlowupThreshold))
    throw blowup_error("evolve: field amplitude exceeded blow-up threshold", t, m);
}

}  // namespace detail

// One classical RK4 step of u_t = eom_rhs(u), optional 2/3 dealiasing of each
// stage state.
inline Field step_rk4(const Field& f, const DeformationParams& p, double dt,
                      bool dealias = true) {
  auto rhs = [&](const Field& u) {
    Field v = u;
    if (dealias) spectral::dealias(v);
    return eom_rhs(v, p);
  };
  const Field k1 = rhs(f);
  Field stage = f;
  for (std::size_t j = 0; j < f.size(); ++j) stage[j] = f[j] + 0.5 * dt * k1[j];
  const Field k2 = rhs(stage);
  for (std::size_t j = 0; j < f.size(); ++j) stage[j] = f[j] + 0.5 * dt * k2[j];
  const Field k3 = rhs(stage);
  for (std::size_t j = 0; j < f.size(); ++j) stage[j] = f[j] + dt * k3[j];
  const Field k4 = rhs(stage);
  Field out = f;
  for (std::size_t j = 0; j < f.size(); ++j)
    out[j] = f[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  if (dealias) spectral::dealias(out);
  return out;
}

namespace detail {

// Integrating-factor RK4 for eps = 1.  State is kept in Fourier space; the
// dispersive symbol L_j = i k_j^3 (u_t = ... - u_xxx) is applied exactly via
// exp(dt L) and RK4 integrates the transformed nonlinearity.
class IfRk4Stepper {
 public:
  IfRk4Stepper(const Field& proto, const DeformationParams& p, double dt, bool dealias)
      : p_(p), dt_(dt), dealias_(dealias), n_(proto.size()), length_(proto.length) {
    if (p.epsilon != 1.0)
      throw domain_error("integrating-factor stepper: only eps = 1 has a linear split");
    const double k0 = 2.0 * M_PI / length_;
    e_full_.resize(n_);
    e_half_.resize(n_);
    mask_.assign(n_, 1.0);
    ikx_.resize(n_);
    const int cutoff = static_cast<int>(n_) / 3;
    for (std::size_t j = 0; j < n_; ++j) {
      const int m = spectral::mode_index(j, n_);
      const double k = k0 * static_cast<double>(m);
      const complex L{0.0, k * k * k};  // -u_xxx in Fourier space
      e_full_[j] = std::exp(dt_ * L);
      e_half_[j] = std::exp(0.5 * dt_ * L);
      if (dealias_ && std::abs(m) > cutoff) mask_[j] = 0.0;
      const bool nyquist = (n_ % 2 == 0) && m == -static_cast<int>(n_) / 2;
      ikx_[j] = nyquist ? complex{0.0, 0.0} : complex{0.0, k};
    }
  }

  // Advective part of the eps = 1 right side, in Fourier space.
  std::vector<complex> nonlinear(const std::vector<complex>& uhat) const {
    std::vector<complex> uh = uhat;
    for (std::size_t j = 0; j < n_; ++j) uh[j] *= mask_[j];
    std::vector<complex> du = uh;
    for (std::size_t j = 0; j < n_; ++j) du[j] *= ikx_[j];
    const auto u = spectral::ifft(uh);
    auto ux = spectral::ifft(du);
    const double a = (p_.variant == Variant::Unscaled) ? -1.0 : 6.0;
    for (std::size_t j = 0; j < n_; ++j) ux[j] = a * u[j] * ux[j];
    auto out = spectral::fft(ux);
    for (std::size_t j = 0; j < n_; ++j) out[j] *= mask_[j];
    if (p_.variant == Variant::Scaled && p_.kappa != 0.0)
      out[0] += p_.kappa * static_cast<double>(n_);
    return out;
  }

  void step(std::vector<complex>& uhat) const {
    const auto n1 = nonlinear(uhat);
    std::vector<complex> s(n_), tmp(n_);
    for (std::size_t j = 0; j < n_; ++j)
      s[j] = e_half_[j] * (uhat[j] + 0.5 * dt_ * n1[j]);
    const auto n2 = nonlinear(s);
    for (std::size_t j = 0; j < n_; ++j)
      tmp[j] = e_half_[j] * uhat[j] + 0.5 * dt_ * n2[j];
    const auto n3 = nonlinear(tmp);
    for (std::size_t j = 0; j < n_; ++j)
      tmp[j] = e_full_[j] * uhat[j] + dt_ * e_half_[j] * n3[j];
    const auto n4 = nonlinear(tmp);
    for (std::size_t j = 0; j < n_; ++j)
      uhat[j] = e_full_[j] * uhat[j] +
                dt_ / 6.0 *
                    (e_full_[j] * n1[j] + 2.0 * e_half_[j] * (n2[j] + n3[j]) + n4[j]);
  }

 private:
  DeformationParams p_;
  double dt_;
  bool dealias_;
  std::size_t n_;
  double length_;
  std::vector<complex> e_full_, e_half_, ikx_;
  std::vector<double> mask_;
};

}  // namespace detail

// Evolve f0 under the selected variant/epsilon, capturing snapshots every
// snapshot_stride steps and attaching charge reports for n = 1, 2, 3.
struct EvolveResult {
  Trajectory trajectory;
  std::array<ChargeReport, 3> charges;
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
};

inline EvolveResult evolve(const Field& f0, const EvolveConfig& cfg,
                           const DeformationParams& params) {
  cfg.validate();
  params.validate();
  if (f0.size() != cfg.grid_points || f0.length != cfg.domain_length)
    throw domain_error("evolve: initial field does not match the configured grid");

  DeformationParams p = params;
  p.singular_clamp = cfg.singular_clamp;

  const double dt = cfg.effective_dt();
  const std::size_t steps =
      (cfg.t_final <= 0.0)
          ? 0
          : static_cast<std::size_t>(std::llround(cfg.t_final / dt));

  EvolveResult res;
  res.trajectory.dt = dt;
  res.trajectory.params = p;
  res.trajectory.times.push_back(0.0);
  res.trajectory.snapshots.push_back(f0);

  const bool use_if = (cfg.integrator == Integrator::IfRk4) ||
                      (cfg.integrator == Integrator::Auto && p.epsilon == 1.0);

  try {
    if (use_if) {
      detail::IfRk4Stepper stepper(f0, p, dt, cfg.dealias);
      auto uhat = spectral::fft(f0.values);
      for (std::size_t s = 1; s <= steps; ++s) {
        stepper.step(uhat);
        const double t = dt * static_cast<double>(s);
        if (!std::isfinite(uhat[0].real()) || !std::isfinite(uhat[0].imag()))
          throw blowup_error("evolve: non-finite state", t, max_abs(f0));
        if (s % cfg.snapshot_stride == 0) {
          Field snap = f0;
          snap.values = spectral::ifft(uhat);
          detail::check_finite(snap, t);
          res.trajectory.times.push_back(t);
          res.trajectory.snapshots.push_back(snap);
        }
      }
    } else {
      Field u = f0;
      for (std::size_t s = 1; s <= steps; ++s) {
        u = step_rk4(u, p, dt, cfg.dealias);
        const double t = dt * static_cast<double>(s);
        detail::check_finite(u, t);
        if (s % cfg.snapshot_stride == 0) {
          res.trajectory.times.push_back(t);
          res.trajectory.snapshots.push_back(u);
        }
      }
    }
  } catch (const blowup_error& e) {
    res.aborted = true;
    res.abort_reason = std::string("blow-up: ") + e.what();
    res.abort_time = e.t;
  } catch (const singularity_error& e) {
    res.aborted = true;
    res.abort_reason = std::string("singularity at grid index ") +
                       std::to_string(e.grid_index) + ", |u_x| = " +
                       std::to_string(e.ux_abs);
    res.abort_time = res.trajectory.times.back();
  }

  for (int n = 1; n <= 3; ++n)
    res.charges[n - 1] = charge_report(n, res.trajectory, p);
  return res;
}

}  // namespace ptkdv
