#pragma once

// The three conserved charges I(1) = int u, I(2) = int u^2, I(3) = H(u),
// their densities T(n) and fluxes X(n) with T_t + X_x = 0, and numerical
// conservation-law residuals along saved trajectories.

#include <complex>
#include <vector>

#include "ptkdv/field.hpp"
#include "ptkdv/model.hpp"
#include "ptkdv/spectral.hpp"

namespace ptkdv {

struct ChargeReport {
  int charge_index = 0;
  std::vector<double> times;
  std::vector<complex> values;
  double drift = 0.0;          // max |I(t) - I(0)| / (1 + |I(0)|)
  double flux_residual = 0.0;  // max-norm of T_t + X_x over interior snapshots
};

// Conserved density T(n) at a point.
inline complex charge_density_pointwise(int n, complex u, complex ux,
                                        const DeformationParams& p) {
  switch (n) {
    case 1: return u;
    case 2: return u * u;
    case 3: return hamiltonian_density(u, ux, p);
    default: throw domain_error("charge density: index must be 1, 2 or 3");
  }
}

inline Field charge_density(int n, const Field& f, const DeformationParams& p) {
  const Field ux = spectral::derivative(f, 1);
  Field out = f;
  for (std::size_t j = 0; j < f.size(); ++j)
    out[j] = charge_density_pointwise(n, f[j], ux[j], p);
  return out;
}

// I(n) = int T(n) dx on the periodic grid.
inline complex charge(int n, const Field& f, const DeformationParams& p) {
  return integrate(charge_density(n, f, p));
}

// Flux X(n) at a point, from the conservation laws of the scaled flow:
//   X(1) = -3 u^2 + eps (i u_x)^(eps-1) u_xx
//   X(2) = 2 eps/(1+eps) (i u_x)^(eps+1) + 2 eps u (i u_x)^(eps-1) u_xx - 4 u^3
//   X(3) = (eps^2/2 - eps)(i u_x)^(2eps-2) u_xx^2
//          + 3 (eps u u_xx - 2 u_x^2) u (i u_x)^(eps-1)
//          - i eps (i u_x)^(2eps-1) u_xxx - (9/2) u^4
inline complex flux_pointwise(int n, complex u, complex ux, complex uxx,
                              complex uxxx, const DeformationParams& p,
                              std::size_t j = 0) {
  p.validate();
  const double eps = p.epsilon;
  const complex i{0.0, 1.0};
  auto pw = [&](complex z, double q) {
    if (q < 0.0) z = detail::guard_ux(z, p, j);
    return sheet_power(z, q, p.branch_n);
  };
  switch (n) {
    case 1:
      return -3.0 * u * u + eps * pw(i * ux, eps - 1.0) * uxx;
    case 2:
      return 2.0 * eps / (1.0 + eps) * pw(i * ux, eps + 1.0) +
             2.0 * eps * u * pw(i * ux, eps - 1.0) * uxx - 4.0 * u * u * u;
    case 3:
      return (0.5 * eps * eps - eps) * pw(i * ux, 2.0 * eps - 2.0) * uxx * uxx +
             3.0 * (eps * u * uxx - 2.0 * ux * ux) * u * pw(i * ux, eps - 1.0) -
             i * eps * pw(i * ux, 2.0 * eps - 1.0) * uxxx - 4.5 * u * u * u * u;
    default:
      throw domain_error("flux: index must be 1, 2 or 3");
  }
}

inline Field flux(int n, const Field& f, const DeformationParams& p) {
  const Field ux = spectral::derivative(f, 1);
  const Field uxx = spectral::derivative(f, 2);
  const Field uxxx = spectral::derivative(f, 3);
  Field out = f;
  for (std::size_t j = 0; j < f.size(); ++j)
    out[j] = flux_pointwise(n, f[j], ux[j], uxx[j], uxxx[j], p, j);
  return out;
}

// Snapshots of an evolution at uniform time spacing.  Defined here so that
// the residual audit does not depend on the stepping module.
struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  double dt = 0.0;  // stepping dt of the run that produced the snapshots
  DeformationParams params;

  std::size_t size() const { return snapshots.size(); }
  double snapshot_spacing() const {
    return size() >= 2 ? times[1] - times[0] : 0.0;
  }
};

// max over interior snapshots and grid points of
//   | d/dt T(n) (central difference in t) + d/dx X(n) (spectral) |.
inline double conservation_residual(int n, const Trajectory& traj,
                                    const DeformationParams& p) {
  if (traj.size() < 3)
    throw domain_error("conservation_residual: need at least 3 snapshots");
  const double ht = traj.snapshot_spacing();
  double res = 0.0;
  for (std::size_t s = 1; s + 1 < traj.size(); ++s) {
    const Field tm = charge_density(n, traj.snapshots[s - 1], p);
    const Field tp = charge_density(n, traj.snapshots[s + 1], p);
    const Field xf = spectral::derivative(flux(n, traj.snapshots[s], p), 1);
    for (std::size_t j = 0; j < xf.size(); ++j) {
      const complex tdot = (tp[j] - tm[j]) / (2.0 * ht);
      res = std::max(res, std::abs(tdot + xf[j]));
    }
  }
  return res;
}

// Charge time series with drift and flux residual along a trajectory.
inline ChargeReport charge_report(int n, const Trajectory& traj,
                                  const DeformationParams& p) {
  ChargeReport rep;
  rep.charge_index = n;
  rep.times = traj.times;
  rep.values.reserve(traj.size());
  for (const Field& f : traj.snapshots) rep.values.push_back(charge(n, f, p));
  const complex i0 = rep.values.empty() ? complex{0.0, 0.0} : rep.values.front();
  for (const complex& v : rep.values)
    rep.drift = std::max(rep.drift, std::abs(v - i0) / (1.0 + std::abs(i0)));
  rep.flux_residual = traj.size() >= 3 ? conservation_residual(n, traj, p) : 0.0;
  return rep;
}

}  // namespace ptkdv
