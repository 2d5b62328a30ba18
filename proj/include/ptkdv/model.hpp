#pragma once

// The deformed KdV family: Hamiltonian density H = u^3 - (i u_x)^(eps+1)/(1+eps),
// its energy, the two equation-of-motion normalizations, the variational
// cross-check, and the PT / Galilean symmetry operations.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>

#include "ptkdv/field.hpp"
#include "ptkdv/specfun.hpp"
#include "ptkdv/spectral.hpp"

namespace ptkdv {

enum class Variant {
  Unscaled,  // u_t + u u_x + deformed third-derivative terms = 0
  Scaled     // u_t - 6 u u_x + deformed third-derivative terms - kappa = 0
};

struct DeformationParams {
  double epsilon = 1.0;
  int branch_n = 0;
  double kappa = 0.0;
  double kappa_hat = 0.0;
  Variant variant = Variant::Scaled;
  // Optional regularization radius for |u_x| where negative powers of u_x
  // appear (eps < 2).  Disabled by default: failures should be loud.
  std::optional<double> singular_clamp{};

  void validate() const {
    if (epsilon == -1.0)
      throw domain_error("DeformationParams: eps = -1 is a pole of the density");
  }

  bool epsilon_is_integer() const {
    return std::abs(epsilon - std::round(epsilon)) < 1e-12;
  }
};

// H(u, u_x) = u^3 - (i u_x)^(eps+1) / (1 + eps), on the branch sheet selected
// by branch_n.
inline complex hamiltonian_density(complex u, complex ux, const DeformationParams& p) {
  p.validate();
  return u * u * u -
         sheet_power(complex{0.0, 1.0} * ux, p.epsilon + 1.0, p.branch_n) /
             (1.0 + p.epsilon);
}

// E = integral of the Hamiltonian density over the periodic grid, u_x spectral.
inline complex energy(const Field& f, const DeformationParams& p) {
  p.validate();
  const Field ux = spectral::derivative(f, 1);
  Field dens = f;
  for (std::size_t j = 0; j < f.size(); ++j)
    dens[j] = hamiltonian_density(f[j], ux[j], p);
  return integrate(dens);
}

namespace detail {

// Clamp |ux| away from zero (phase preserved) or raise with forensics.
inline complex guard_ux(complex ux, const DeformationParams& p, std::size_t j) {
  const double delta = p.singular_clamp.value_or(1e-8);
  if (std::abs(ux) > delta) return ux;
  if (!p.singular_clamp)
    throw singularity_error(
        "eom_rhs: |u_x| inside the singular radius with clamp disabled", j,
        std::abs(ux));
  if (ux == complex{0.0, 0.0}) return {delta, 0.0};
  return ux * (delta / std::abs(ux));
}

}  // namespace detail

// Right side u_t at a single point, given the spatial derivatives there.
// Unscaled: u_t = -u u_x - i eps(eps-1)(i u_x)^(eps-2) u_xx^2 - eps (i u_x)^(eps-1) u_xxx
// Scaled:   u_t =  6 u u_x - [same deformed terms] + kappa
inline complex eom_rhs_pointwise(complex u, complex ux, complex uxx, complex uxxx,
                                 const DeformationParams& p, std::size_t j = 0) {
  p.validate();
  const double eps = p.epsilon;
  const complex i{0.0, 1.0};
  // Negative powers of u_x appear when an active term carries an exponent
  // below zero; only then is the clamp relevant.
  const bool needs_guard = (eps * (eps - 1.0) != 0.0 && eps - 2.0 < 0.0) ||
                           (eps != 0.0 && eps - 1.0 < 0.0);
  const complex uxg = needs_guard ? detail::guard_ux(ux, p, j) : ux;

  complex deformed{0.0, 0.0};
  if (eps * (eps - 1.0) != 0.0)
    deformed += i * eps * (eps - 1.0) *
                sheet_power(i * uxg, eps - 2.0, p.branch_n) * uxx * uxx;
  if (eps != 0.0)
    deformed += eps * sheet_power(i * uxg, eps - 1.0, p.branch_n) * uxxx;

  if (p.variant == Variant::Unscaled) return -u * ux - deformed;
  return 6.0 * u * ux - deformed + p.kappa;
}

// u_t on the whole grid with spectral derivatives.
inline Field eom_rhs(const Field& f, const DeformationParams& p) {
  const Field ux = spectral::derivative(f, 1);
  const Field uxx = spectral::derivative(f, 2);
  const Field uxxx = spectral::derivative(f, 3);
  Field out = f;
  for (std::size_t j = 0; j < f.size(); ++j)
    out[j] = eom_rhs_pointwise(f[j], ux[j], uxx[j], uxxx[j], p, j);
  return out;
}

// delta H / delta u = 3 u^2 - eps (i u_x)^(eps-1) u_xx, evaluated spectrally.
inline Field variational_derivative(const Field& f, const DeformationParams& p) {
  p.validate();
  const Field ux = spectral::derivative(f, 1);
  const Field uxx = spectral::derivative(f, 2);
  Field out = f;
  const complex i{0.0, 1.0};
  for (std::size_t j = 0; j < f.size(); ++j) {
    complex term{0.0, 0.0};
    if (p.epsilon != 0.0)
      term = p.epsilon * sheet_power(i * ux[j], p.epsilon - 1.0, p.branch_n) * uxx[j];
    out[j] = 3.0 * f[j] * f[j] - term;
  }
  return out;
}

// Consistency of the Hamiltonian with the flow, two ways:
//  (a) d/dx (delta H/delta u) must equal eom_rhs (Scaled, kappa = 0);
//  (b) the analytic variational derivative must match the Frechet derivative
//      of energy() under localized bump perturbations.
// Returns the max of the two discrepancy norms.
inline double variational_check(const Field& f, const DeformationParams& p) {
  DeformationParams ps = p;
  ps.variant = Variant::Scaled;
  ps.kappa = 0.0;

  const Field vd = variational_derivative(f, ps);
  const Field lhs = spectral::derivative(vd, 1);
  const Field rhs = eom_rhs(f, ps);
  double r1 = max_abs_diff(lhs, rhs);

  // Frechet check against three bump directions.
  const double h = 1e-5;
  double r2 = 0.0;
  const std::size_t n = f.size();
  for (int bump = 0; bump < 3; ++bump) {
    const double x0 = f.length * (0.2 + 0.3 * bump);
    Field phi = make_field(n, f.length, [&](double x) {
      const double s = std::sin(M_PI * (x - x0) / f.length);
      return complex{std::exp(-8.0 * s * s), 0.0};
    });
    Field up = f, um = f;
    for (std::size_t j = 0; j < n; ++j) {
      up[j] += h * phi[j];
      um[j] -= h * phi[j];
    }
    const complex dE = (energy(up, ps) - energy(um, ps)) / (2.0 * h);
    complex inner{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) inner += vd[j] * phi[j];
    inner *= f.dx;
    r2 = std::max(r2, std::abs(dE - inner));
  }
  return std::max(r1, r2);
}

// u(x, t) -> u(x - c t) + c on the same grid (spectral interpolation).
inline Field galilean_transform(const Field& f, double c, double t) {
  double shift = std::fmod(c * t, f.length);
  Field out = spectral::translate(f, shift);
  for (auto& v : out.values) v += c;
  return out;
}

// x -> conj(u(-x)): the PT image of the field.
inline Field pt_reflect(const Field& f) {
  Field out = f;
  const std::size_t n = f.size();
  for (std::size_t j = 0; j < n; ++j)
    out[j] = std::conj(f[(n - j) % n]);
  return out;
}

inline bool is_pt_symmetric(const Field& f, double tol = 1e-12) {
  return max_abs_diff(f, pt_reflect(f)) <= tol * (1.0 + max_abs(f));
}

}  // namespace ptkdv
