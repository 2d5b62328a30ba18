#pragma once

// Traveling-wave machinery for the deformed family: the reduced branch ODE
//   v_x^(n) = phase_vx(eps,n) * [((eps+1)/eps) P(v)]^(1/(eps+1)),
//   P(v) = v^3 + (c/2) v^2 + kappa v + kappa_hat,
// and the separated curves
//   (x - ct)(v) = phase_xt(eps,n) * (eps/(eps+1))^(1/(eps+1))
//                 * int_0^v P(w)^(-1/(eps+1)) dw
// with the integrand on the pointwise principal branch along the real path.
// Closed forms (Appell F1, Gauss 2F1 / incomplete beta) are used inside their
// convergence regions and are phase-calibrated against the integrand so that
// both evaluation routes agree; quadrature covers everything else.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "ptkdv/quadrature.hpp"
#include "ptkdv/specfun.hpp"

namespace ptkdv {

// Wave parameterization c = 4k^2(2-m), kappa = 4k^4(1-m), kappa_hat = 0,
// omega = c k.  The derived constants are computed, never stored, so they
// cannot drift out of sync with (k, m).
struct TravelingWaveParams {
  complex k{0.0, 0.0};
  double m = 0.0;

  TravelingWaveParams() = default;
  TravelingWaveParams(complex k_, double m_) : k(k_), m(m_) {
    if (m < 0.0 || m > 1.0) throw domain_error("TravelingWaveParams: m must lie in [0,1]");
  }

  complex k2() const { return k * k; }
  complex c() const { return 4.0 * k2() * (2.0 - m); }
  complex omega() const { return c() * k; }
  complex kappa() const { return 4.0 * k2() * k2() * (1.0 - m); }
  complex kappa_hat() const { return {0.0, 0.0}; }
};

// P(v) = v^3 + (c/2) v^2 + kappa v + kappa_hat.
inline complex wave_cubic(complex v, const TravelingWaveParams& w) {
  return ((v + 0.5 * w.c()) * v + w.kappa()) * v + w.kappa_hat();
}

// Real roots of P for real-coefficient parameterizations (k^2 real), used to
// split the quadrature path.  With kappa_hat = 0 the cubic factors as
// v (v + 2k^2(1-m)) (v + 2k^2).
inline std::vector<double> wave_cubic_real_roots(const TravelingWaveParams& w) {
  std::vector<double> roots;
  if (w.k2().imag() != 0.0) return roots;
  const double k2 = w.k2().real();
  roots.push_back(0.0);
  roots.push_back(-2.0 * k2 * (1.0 - w.m));
  roots.push_back(-2.0 * k2);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

// The reduced first-order ODE, displayed branch enumeration.
inline complex ode_rhs_vx(complex v, const TravelingWaveParams& w, double epsilon, int n) {
  if (epsilon == 0.0 || epsilon == -1.0)
    throw domain_error("ode_rhs_vx: pole at eps in {0, -1}");
  const complex body = (epsilon + 1.0) / epsilon * wave_cubic(v, w);
  return branch_phase_vx(epsilon, n) * branch_power(body, 1.0 / (epsilon + 1.0));
}

namespace detail {

inline double curve_prefactor(double epsilon) {
  return std::pow(epsilon / (epsilon + 1.0), 1.0 / (epsilon + 1.0));
}

// Integral of P(w)^(-s) over the oriented real interval [a, b], pointwise
// principal branch, split at the real roots of P.  For real-coefficient
// parameterizations the cubic is rebuilt from its linear factors so that a
// root sitting on a segment endpoint is evaluated from the stable endpoint
// distance instead of a cancelling difference.
inline complex cubic_power_integral(double a, double b, const TravelingWaveParams& w,
                                    double s) {
  if (a == b) return {0.0, 0.0};
  const double lo = std::min(a, b), hi = std::max(a, b);
  const auto roots = wave_cubic_real_roots(w);
  complex total{0.0, 0.0};
  if (roots.empty()) {
    total = quad::tanh_sinh(
        [&](double t, double, double) {
          return branch_power(wave_cubic(complex{t, 0.0}, w), -s);
        },
        lo, hi, 1e-13);
  } else {
    std::vector<double> pts{lo, hi};
    for (double r : roots)
      if (r > lo && r < hi) pts.push_back(r);
    std::sort(pts.begin(), pts.end());
    for (std::size_t seg = 0; seg + 1 < pts.size(); ++seg) {
      const double sa = pts[seg], sb = pts[seg + 1];
      auto f = [&](double t, double dl, double dr) -> complex {
        double prod = 1.0;
        for (double r : roots)
          prod *= (r == sa) ? dl : ((r == sb) ? -dr : t - r);
        return branch_power(complex{prod, 0.0}, -s);
      };
      total += quad::tanh_sinh(f, sa, sb, 1e-13);
    }
  }
  return (a <= b) ? total : -total;
}

// int_0^v P(w)^(-1/(1+eps)) dw.
inline complex curve_core_quadrature(double v, const TravelingWaveParams& w,
                                     double epsilon) {
  return cubic_power_integral(0.0, v, w, 1.0 / (1.0 + epsilon));
}

}  // namespace detail

// (x - ct)(v) for m < 1: Appell F1 closed form with arguments
// (eps/(1+eps); 1/(1+eps), 1/(1+eps); (1+2eps)/(1+eps); -v/(2k^2(1-m)); -v/(2k^2))
// inside the series radius, quadrature of the separated integral otherwise.
inline complex curve_general(double v, const TravelingWaveParams& w, double epsilon,
                             int n, const SeriesControl& ctl = {},
                             EvalRoute route = EvalRoute::Auto) {
  if (epsilon == 0.0 || epsilon == -1.0)
    throw domain_error("curve_general: pole at eps in {0, -1}");
  if (w.m == 1.0) throw domain_error("curve_general: m = 1 is the soliton limit (use curve_m1)");
  if (v == 0.0) return {0.0, 0.0};
  const complex phase = branch_phase_xt(epsilon, n);
  const double pref = detail::curve_prefactor(epsilon);
  const double s = 1.0 / (1.0 + epsilon);
  const double alpha = epsilon / (1.0 + epsilon);
  const complex x1 = -v / (2.0 * w.k2() * (1.0 - w.m));
  const complex y1 = -v / (2.0 * w.k2());
  const bool series_ok =
      std::max(std::abs(x1), std::abs(y1)) < ctl.convergence_radius_guard;
  if (route == EvalRoute::Quadrature || (route == EvalRoute::Auto && !series_ok))
    return phase * pref * detail::curve_core_quadrature(v, w, epsilon);
  if (!series_ok) throw convergence_error("curve_general: outside series radius");

  // Phase-calibrated split of P(vt)^(-s) = Phi(v) t^(-s) (1-x1 t)^(-s) (1-y1 t)^(-s),
  // probed at t = 1/2; the split is phase-constant over t in (0,1) inside the
  // series region.
  const complex num = branch_power(wave_cubic(complex{0.5 * v, 0.0}, w), -s);
  const complex den = branch_power(complex{0.5, 0.0}, -s) *
                      branch_power(1.0 - 0.5 * x1, -s) * branch_power(1.0 - 0.5 * y1, -s);
  const complex phi = num / den;
  const complex f1 = appell_f1(alpha, s, s, (1.0 + 2.0 * epsilon) / (1.0 + epsilon),
                               x1, y1, ctl, EvalRoute::Series);
  return phase * pref * v * phi * f1 / alpha;
}

// m -> 0 curve at k = +-1/sqrt(2) (c = 4, kappa = 1):
//   phase_xt * (eps/(eps+1))^(1/(eps+1)) * v^a/a * 2F1(a, 1-b; 1+a; -v),
//   a = eps/(eps+1), b = (eps-1)/(eps+1), principal v^a.
// This is the branch of the displayed incomplete-beta expression that solves
// the separated ODE across v = 0; at eps = 1 it reduces to
// (-1)^n sqrt(2) atan(sqrt(v)).
inline complex curve_m0(double v, double epsilon, int n, const SeriesControl& ctl = {},
                        EvalRoute route = EvalRoute::Auto) {
  if (epsilon == 0.0 || epsilon == -1.0)
    throw domain_error("curve_m0: pole at eps in {0, -1}");
  if (v == 0.0) return {0.0, 0.0};
  const complex phase = branch_phase_xt(epsilon, n);
  const double pref = detail::curve_prefactor(epsilon);
  if (epsilon == 1.0) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sqrt(2.0) * std::atan(branch_power(complex{v, 0.0}, 0.5));
  }
  const TravelingWaveParams w{complex{1.0 / std::sqrt(2.0), 0.0}, 0.0};
  const double a = epsilon / (1.0 + epsilon);
  const double b = (epsilon - 1.0) / (1.0 + epsilon);
  const bool closed_ok = v > -1.0;
  if (route == EvalRoute::Quadrature || (route == EvalRoute::Auto && !closed_ok))
    return phase * pref * detail::curve_core_quadrature(v, w, epsilon);
  if (!closed_ok) throw convergence_error("curve_m0: closed form needs v > -1");
  return phase * pref * branch_power(complex{v, 0.0}, a) / a *
         gauss_2f1(a, 1.0 - b, 1.0 + a, complex{-v, 0.0}, ctl);
}

// m -> 1 curve (kappa = 0, P = v^2 (v + 2k^2)): incomplete-beta closed form
// B_{-v/2k^2}((eps-1)/(eps+1), eps/(eps+1)) with a phase-calibrated prefactor;
// at eps = 1 the curve is based at the outer root v = -2k^2 and reduces to
// (-1)^n sqrt(2/k^2) artanh(sqrt(1 + v/2k^2)).
inline complex curve_m1(double v, const TravelingWaveParams& w, double epsilon, int n,
                        const SeriesControl& ctl = {},
                        EvalRoute route = EvalRoute::Auto) {
  if (epsilon == 0.0 || epsilon == -1.0)
    throw domain_error("curve_m1: pole at eps in {0, -1}");
  const complex b2 = 2.0 * w.k2();
  const complex phase = branch_phase_xt(epsilon, n);
  const double pref = detail::curve_prefactor(epsilon);
  if (epsilon == 1.0) {
    // 1/v' is non-integrable at the double root v = 0; the natural base point
    // is the soliton trough.
    const complex arg = branch_power(1.0 + v / b2, 0.5);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sqrt(2.0) / branch_power(b2, 0.5) * std::atanh(arg);
  }
  if (v == 0.0) return {0.0, 0.0};
  TravelingWaveParams wm1 = w;
  wm1.m = 1.0;
  const complex z = -v / b2;
  const bool closed_ok = (z.imag() == 0.0) && z.real() > -15.0 &&
                         (z.real() < 1.0 || std::abs(z - 1.0) < 1e-14);
  if (route == EvalRoute::Quadrature || (route == EvalRoute::Auto && !closed_ok))
    return phase * pref * detail::curve_core_quadrature(v, wm1, epsilon);
  if (!closed_ok) throw convergence_error("curve_m1: closed form needs real -v/2k^2 <= 1");

  const double s = 1.0 / (1.0 + epsilon);
  const double a2 = (epsilon - 1.0) / (1.0 + epsilon);
  const double b2exp = epsilon / (1.0 + epsilon);
  // P(vt)^(-s) = Phi1(v) t^(a2-1) (1 - z t)^(-s), probed at t = 1/2.
  const complex num = branch_power(wave_cubic(complex{0.5 * v, 0.0}, wm1), -s);
  const complex den = branch_power(complex{0.5, 0.0}, a2 - 1.0) *
                      branch_power(1.0 - 0.5 * z, -s);
  const complex phi = num / den;
  return phase * pref * v * phi / a2 *
         gauss_2f1(a2, 1.0 - b2exp, 1.0 + a2, z, ctl);
}

enum class WaveKind { Cnoidal, Tan2, Sech2 };

// The eps = 1 closed-form solutions used as references and initial data.
inline complex exact_solution(WaveKind kind, double x, double t,
                              const TravelingWaveParams& w) {
  switch (kind) {
    case WaveKind::Cnoidal: {
      if (w.k.imag() != 0.0 || w.omega().imag() != 0.0)
        throw domain_error("exact_solution: cnoidal needs real k");
      const double z = w.k.real() * x - w.omega().real() * t;
      const double d = jacobi_dn(z, w.m);
      return -2.0 * w.k2() * d * d;
    }
    case WaveKind::Tan2: {
      const double arg = (x - 4.0 * t) / std::sqrt(2.0);
      const double c = std::cos(arg);
      if (std::abs(c) < 1e-12) throw domain_error("exact_solution: tan^2 pole");
      const double tn = std::tan(arg);
      return {tn * tn, 0.0};
    }
    case WaveKind::Sech2: {
      const complex z = w.k * x - w.omega() * t;
      const complex sech = 1.0 / std::cosh(z);
      return -2.0 * w.k2() * sech * sech;
    }
  }
  throw domain_error("exact_solution: unknown kind");
}

// A sampled branch of (x - ct)(v) with its realness classification.
struct Curve {
  double epsilon = 1.0;
  int branch_n = 0;
  TravelingWaveParams wave;
  std::vector<double> v;
  std::vector<complex> xct;

  std::size_t size() const { return v.size(); }
};

// Maximal v-intervals on which |Im| <= tol_abs + tol_rel * |Re| at every sample.
inline std::vector<std::pair<double, double>> scan_real_branches(
    const Curve& c, double tol_abs = 1e-8, double tol_rel = 1e-8) {
  std::vector<std::pair<double, double>> out;
  std::optional<double> start;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const bool real_here =
        std::abs(c.xct[i].imag()) <= tol_abs + tol_rel * std::abs(c.xct[i].real());
    if (real_here && !start) start = c.v[i];
    if (!real_here && start) {
      out.emplace_back(*start, c.v[i - 1]);
      start.reset();
    }
  }
  if (start) out.emplace_back(*start, c.v.back());
  return out;
}

// Sample a curve on a uniform v-grid.  Quadrature is incremental along the
// grid (each cell integrated once); the eps = 1, m = 1 branch goes through
// its closed form because the v = 0 base point is non-integrable there.
inline Curve make_curve(const TravelingWaveParams& w, double epsilon, int n,
                        double v_lo, double v_hi, std::size_t count,
                        const SeriesControl& ctl = {}) {
  if (count < 2) throw domain_error("make_curve: need at least 2 samples");
  Curve c;
  c.epsilon = epsilon;
  c.branch_n = n;
  c.wave = w;
  c.v.resize(count);
  c.xct.resize(count);
  const double dv = (v_hi - v_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) c.v[i] = v_lo + dv * static_cast<double>(i);

  if (epsilon == 1.0 && w.m == 1.0) {
    for (std::size_t i = 0; i < count; ++i)
      c.xct[i] = curve_m1(c.v[i], w, epsilon, n, ctl);
    return c;
  }

  const double s = 1.0 / (1.0 + epsilon);
  const complex scale = branch_phase_xt(epsilon, n) * detail::curve_prefactor(epsilon);

  // Walk outward from v = 0 in both directions, accumulating cell integrals.
  std::size_t anchor = 0;
  double best = std::abs(c.v[0]);
  for (std::size_t i = 1; i < count; ++i)
    if (std::abs(c.v[i]) < best) { best = std::abs(c.v[i]); anchor = i; }
  complex acc = detail::cubic_power_integral(0.0, c.v[anchor], w, s);
  c.xct[anchor] = scale * acc;
  complex up = acc;
  for (std::size_t i = anchor + 1; i < count; ++i) {
    up += detail::cubic_power_integral(c.v[i - 1], c.v[i], w, s);
    c.xct[i] = scale * up;
  }
  complex down = acc;
  for (std::size_t i = anchor; i-- > 0;) {
    down -= detail::cubic_power_integral(c.v[i], c.v[i + 1], w, s);
    c.xct[i] = scale * down;
  }
  return c;
}

// For v -> -1 the m = 0 curve approaches
//   phase_xt * e^{i pi eps/(1+eps)} * (eps/(eps+1))^(1/(eps+1))
//     * Gamma(eps/(eps+1)) Gamma((eps-1)/(eps+1)) / Gamma((2eps-1)/(eps+1)).
// Divergent at eps = 1 where Gamma((eps-1)/(eps+1)) = Gamma(0).
inline complex tail_limit(double epsilon, int n) {
  if (epsilon == 1.0)
    throw domain_error("tail_limit: divergent at eps = 1 (Gamma(0))");
  if (!(epsilon > 1.0)) throw domain_error("tail_limit: needs eps > 1");
  const double a = epsilon / (1.0 + epsilon);
  const double b = (epsilon - 1.0) / (1.0 + epsilon);
  const complex phase =
      std::polar(1.0, M_PI * (4.0 * n + 3.0 * epsilon - 1.0) / (2.0 * (1.0 + epsilon)));
  return phase * detail::curve_prefactor(epsilon) * gamma_fn(complex{a, 0.0}) *
         gamma_fn(complex{b, 0.0}) / gamma_fn(complex{a + b, 0.0});
}

struct OdeResidualReport {
  double value = 0.0;       // max relative deviation over usable samples
  int matched_branch = 0;   // ODE branch label the curve was matched against
  std::size_t used = 0;
  std::size_t excluded = 0;
};

// Verify d(x-ct)/dv == 1/v_x^(n') along the sampled curve, fourth-order
// centered differences in v.  Samples near the real roots of P (vertical
// tangents) are excluded.  The displayed phase conventions of the ODE and of
// the curves enumerate branches differently, so the ODE label n' is selected
// from a bounded family by the first usable sample and then held fixed.
inline OdeResidualReport ode_residual(const Curve& c, const TravelingWaveParams& w) {
  OdeResidualReport rep;
  if (c.size() < 5) throw domain_error("ode_residual: need at least 5 samples");
  const double h = c.v[1] - c.v[0];
  const auto roots = wave_cubic_real_roots(w);
  const double exclusion = 25.0 * std::abs(h);

  auto usable = [&](std::size_t i) {
    if (i < 2 || i + 2 >= c.size()) return false;
    for (double r : roots)
      if (std::abs(c.v[i] - r) < exclusion) return false;
    return true;
  };
  auto diff4 = [&](std::size_t i) -> complex {
    return (-c.xct[i + 2] + 8.0 * c.xct[i + 1] - 8.0 * c.xct[i - 1] + c.xct[i - 2]) /
           (12.0 * h);
  };

  // Select the matching ODE branch at the first usable sample.
  const int span = 2 * (static_cast<int>(std::ceil(std::abs(c.epsilon))) + 1);
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (usable(i)) { first = i; break; }
  if (!first) throw domain_error("ode_residual: no usable interior samples");
  double best = std::numeric_limits<double>::infinity();
  for (int np = c.branch_n - span; np <= c.branch_n + span; ++np) {
    const complex target = 1.0 / ode_rhs_vx(complex{c.v[*first], 0.0}, w, c.epsilon, np);
    const double d = std::abs(diff4(*first) - target) / (1.0 + std::abs(target));
    if (d < best) { best = d; rep.matched_branch = np; }
  }

  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!usable(i)) {
      if (i >= 2 && i + 2 < c.size()) ++rep.excluded;
      continue;
    }
    const complex target =
        1.0 / ode_rhs_vx(complex{c.v[i], 0.0}, w, c.epsilon, rep.matched_branch);
    rep.value = std::max(rep.value, std::abs(diff4(i) - target) / std::abs(target));
    ++rep.used;
  }
  return rep;
}

}  // namespace ptkdv
