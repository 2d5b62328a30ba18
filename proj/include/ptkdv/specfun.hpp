#pragma once

// Complex special-function kernel: principal-branch powers, the two explicit
// traveling-wave branch phases, Gamma, Gauss 2F1, Appell F1, the analytically
// continued incomplete beta, and Jacobi elliptic functions via the AGM.
//
// Everything is a pure function of its arguments.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "ptkdv/errors.hpp"
#include "ptkdv/quadrature.hpp"

namespace ptkdv {

using complex = std::complex<double>;

// Truncation policy for the hypergeometric series.
struct SeriesControl {
  double rel_tol = 1e-12;            // relative term tolerance
  int max_terms = 100000;            // cap per series index
  double convergence_radius_guard = 0.95;  // switch to quadrature beyond this

  void validate() const {
    if (!(rel_tol > 0.0)) throw domain_error("SeriesControl: rel_tol must be > 0");
    if (max_terms < 1) throw domain_error("SeriesControl: max_terms must be >= 1");
    if (!(convergence_radius_guard > 0.0 && convergence_radius_guard < 1.0))
      throw domain_error("SeriesControl: guard must lie in (0,1)");
  }
};

namespace detail {

inline bool is_nonpositive_integer(const complex& z, double tol = 1e-12) {
  if (std::abs(z.imag()) > tol) return false;
  const double r = z.real();
  return r < 0.5 && std::abs(r - std::round(r)) < tol;
}

// Normalize a signed-zero imaginary part so that negative reals sit on the
// upper side of the cut, Im(Log z) in (-pi, pi].
inline complex on_principal_sheet(complex z) {
  if (z.imag() == 0.0) return {z.real(), +0.0};
  return z;
}

}  // namespace detail

// Principal power z^p = exp(p Log z), Im(Log) in (-pi, pi].  Branch
// multiplicity is handled by the explicit phase functions below, never here.
inline complex branch_power(complex z, double p) {
  if (z == complex{0.0, 0.0}) {
    if (p > 0.0) return {0.0, 0.0};
    if (p == 0.0) return {1.0, 0.0};
    throw domain_error("branch_power: pole at z = 0 with negative exponent");
  }
  return std::exp(p * std::log(detail::on_principal_sheet(z)));
}

// n-th sheet of the multivalued power: exp(2*pi*i*n*p) times the principal value.
// Reduces to the principal value whenever p is an integer.
inline complex sheet_power(complex z, double p, int n) {
  complex v = branch_power(z, p);
  if (n == 0) return v;
  const double np = static_cast<double>(n) * p;
  if (np == std::round(np)) return v;
  return v * std::polar(1.0, 2.0 * M_PI * np);
}

// exp(i*pi*(4n + 3*eps + 1) / (2*(1+eps))) -- the branch prefactor of the
// reduced first-order ODE v_x^(n).
inline complex branch_phase_vx(double epsilon, int n) {
  if (epsilon == -1.0) throw domain_error("branch_phase_vx: singular at eps = -1");
  return std::polar(1.0, M_PI * (4.0 * n + 3.0 * epsilon + 1.0) / (2.0 * (1.0 + epsilon)));
}

// exp(i*pi*(4n + eps - 1) / (2*(1+eps))) -- the branch prefactor of the
// separated (x - ct)(v) curves.
inline complex branch_phase_xt(double epsilon, int n) {
  if (epsilon == -1.0) throw domain_error("branch_phase_xt: singular at eps = -1");
  return std::polar(1.0, M_PI * (4.0 * n + epsilon - 1.0) / (2.0 * (1.0 + epsilon)));
}

// (a)_n = a (a+1) ... (a+n-1), empty product for n = 0.
inline complex pochhammer(complex a, int n) {
  if (n < 0) throw domain_error("pochhammer: n must be >= 0");
  complex p{1.0, 0.0};
  for (int k = 0; k < n; ++k) p *= a + static_cast<double>(k);
  return p;
}

// Gamma function, Lanczos approximation (g = 7, 9 coefficients) with
// reflection for Re z < 0.5.  Relative accuracy ~1e-13 on the tested range.
inline complex gamma_fn(complex z) {
  if (detail::is_nonpositive_integer(z))
    throw domain_error("gamma_fn: pole at nonpositive integer");
  static constexpr std::array<double, 9> g = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return M_PI / (std::sin(M_PI * z) * gamma_fn(1.0 - z));
  }
  z -= 1.0;
  complex x{g[0], 0.0};
  for (int i = 1; i < 9; ++i) x += g[i] / (z + static_cast<double>(i));
  const complex t = z + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

namespace detail {

// Raw Gauss series, valid (and used) only where it converges.
inline complex hyp2f1_series(complex a, complex b, complex c, complex z,
                             const SeriesControl& ctl) {
  complex term{1.0, 0.0};
  complex sum{1.0, 0.0};
  int quiet = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const complex ck = c + static_cast<double>(k);
    if (ck == complex{0.0, 0.0})
      throw domain_error("gauss_2f1: series hit a pole of (c)_k");
    term *= (a + static_cast<double>(k)) * (b + static_cast<double>(k)) /
            (ck * static_cast<double>(k + 1)) * z;
    sum += term;
    if (term == complex{0.0, 0.0}) return sum;  // terminating (polynomial) case
    if (std::abs(term) <= ctl.rel_tol * (1.0 + std::abs(sum))) {
      if (++quiet >= 2) return sum;
    } else {
      quiet = 0;
    }
  }
  throw convergence_error("gauss_2f1: series did not converge");
}

}  // namespace detail

// Gauss hypergeometric 2F1(a,b;c;z).  Direct series inside the guard radius,
// Pfaff z/(z-1) or the 1-z connection formula up to |z| < 1 (or on the
// region they reach), Gauss summation at z = 1.
inline complex gauss_2f1(complex a, complex b, complex c, complex z,
                         const SeriesControl& ctl = {}) {
  ctl.validate();
  if (detail::is_nonpositive_integer(c))
    throw domain_error("gauss_2f1: c is a nonpositive integer");
  if (z == complex{0.0, 0.0}) return {1.0, 0.0};
  // Terminating series: a or b a nonpositive integer.
  if (detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b))
    return detail::hyp2f1_series(a, b, c, z, ctl);
  if (z == complex{1.0, 0.0}) {
    const complex cab = c - a - b;
    if (cab.real() <= 0.0)
      throw convergence_error("gauss_2f1: divergent at z = 1 (Re(c-a-b) <= 0)");
    return gamma_fn(c) * gamma_fn(cab) / (gamma_fn(c - a) * gamma_fn(c - b));
  }
  const double guard = ctl.convergence_radius_guard;
  if (std::abs(z) < guard) return detail::hyp2f1_series(a, b, c, z, ctl);
  const complex zp = z / (z - 1.0);
  if (std::abs(zp) < guard) {
    // Pfaff transformation
    const complex pref = std::exp(-a * std::log(detail::on_principal_sheet(1.0 - z)));
    return pref * detail::hyp2f1_series(a, c - b, c, zp, ctl);
  }
  const complex w = 1.0 - z;
  if (std::abs(w) < guard) {
    const complex cab = c - a - b;
    if (std::abs(cab - std::round(cab.real())) < 1e-8 && std::abs(cab.imag()) < 1e-8)
      throw convergence_error(
          "gauss_2f1: 1-z connection needs non-integer c-a-b");
    const complex f1 = gamma_fn(c) * gamma_fn(cab) / (gamma_fn(c - a) * gamma_fn(c - b)) *
                       detail::hyp2f1_series(a, b, a + b - c + 1.0, w, ctl);
    const complex f2 = std::exp(cab * std::log(detail::on_principal_sheet(w))) *
                       gamma_fn(c) * gamma_fn(-cab) / (gamma_fn(a) * gamma_fn(b)) *
                       detail::hyp2f1_series(c - a, c - b, cab + 1.0, w, ctl);
    return f1 + f2;
  }
  throw convergence_error("gauss_2f1: argument outside supported region");
}

enum class EvalRoute { Auto, Series, Quadrature };

// Appell F1(alpha; beta, beta'; gamma; x, y): double series inside the guard
// radius, adaptive quadrature of the Euler integral representation otherwise
// (requires Re(gamma) > Re(alpha) > 0, which holds for every curve use).
inline complex appell_f1(complex alpha, complex beta, complex beta_prime,
                         complex gamma, complex x, complex y,
                         const SeriesControl& ctl = {},
                         EvalRoute route = EvalRoute::Auto) {
  ctl.validate();
  if (detail::is_nonpositive_integer(gamma))
    throw domain_error("appell_f1: gamma is a nonpositive integer");
  if (x == complex{0.0, 0.0} && y == complex{0.0, 0.0}) return {1.0, 0.0};
  if (x == complex{0.0, 0.0}) return gauss_2f1(alpha, beta_prime, gamma, y, ctl);
  if (y == complex{0.0, 0.0}) return gauss_2f1(alpha, beta, gamma, x, ctl);

  const double r = std::max(std::abs(x), std::abs(y));
  const bool series_ok = r < ctl.convergence_radius_guard;
  if (route == EvalRoute::Series || (route == EvalRoute::Auto && series_ok)) {
    if (!series_ok)
      throw convergence_error("appell_f1: arguments outside series radius");
    // Sum along anti-diagonals s = m + n.  d0 tracks the (n=s, m=0) term.
    complex sum{0.0, 0.0};
    complex d0{1.0, 0.0};
    int quiet = 0;
    for (int s = 0; s < ctl.max_terms; ++s) {
      complex term = d0;
      complex diag = term;
      for (int m = 1; m <= s; ++m) {
        const int n = s - m;  // x-index after the step
        const complex denom = static_cast<double>(m) * (beta + static_cast<double>(n));
        if (term != complex{0.0, 0.0} && denom != complex{0.0, 0.0} &&
            x != complex{0.0, 0.0}) {
          term *= (beta_prime + static_cast<double>(m - 1)) *
                  static_cast<double>(n + 1) / denom * (y / x);
        } else {
          term = pochhammer(alpha, s) * pochhammer(beta, n) * pochhammer(beta_prime, m) /
                 (pochhammer(complex{1.0, 0.0}, n) * pochhammer(complex{1.0, 0.0}, m) *
                  pochhammer(gamma, s)) *
                 std::pow(x, n) * std::pow(y, m);
        }
        diag += term;
      }
      sum += diag;
      if (std::abs(diag) <= ctl.rel_tol * (1.0 + std::abs(sum))) {
        if (++quiet >= 2) return sum;
      } else {
        quiet = 0;
      }
      const complex gs = gamma + static_cast<double>(s);
      if (gs == complex{0.0, 0.0}) throw domain_error("appell_f1: pole of (gamma)_s");
      d0 *= (alpha + static_cast<double>(s)) * (beta + static_cast<double>(s)) /
            (gs * static_cast<double>(s + 1)) * x;
    }
    throw convergence_error("appell_f1: double series did not converge");
  }

  // Quadrature route: Euler integral over t in [0,1], split where a real
  // (1 - x t) or (1 - y t) factor crosses zero.  Each potentially singular
  // factor is rebuilt from the stable endpoint distances of its segment.
  if (!(alpha.imag() == 0.0 && gamma.imag() == 0.0 && alpha.real() > 0.0 &&
        gamma.real() > alpha.real()))
    throw convergence_error("appell_f1: quadrature needs Re(gamma) > Re(alpha) > 0");
  std::vector<double> pts{0.0, 1.0};
  if (x.imag() == 0.0 && x.real() > 1.0) pts.push_back(1.0 / x.real());
  if (y.imag() == 0.0 && y.real() > 1.0) pts.push_back(1.0 / y.real());
  std::sort(pts.begin(), pts.end());
  const double am1 = alpha.real() - 1.0;
  const double gam1 = gamma.real() - alpha.real() - 1.0;
  auto lin = [](complex coef, double root_pos, double sa, double sb, double t,
                double dl, double dr) -> complex {
    // coef * (root_pos - t) with the distance substituted at segment ends
    if (root_pos == sa) return -coef * dl;
    if (root_pos == sb) return coef * dr;
    return coef * (root_pos - t);
  };
  complex integral{0.0, 0.0};
  for (std::size_t seg = 0; seg + 1 < pts.size(); ++seg) {
    const double sa = pts[seg], sb = pts[seg + 1];
    auto f = [&](double t, double dl, double dr) -> complex {
      const complex tt = lin({-1.0, 0.0}, 0.0, sa, sb, t, dl, dr);
      const complex omt = lin({1.0, 0.0}, 1.0, sa, sb, t, dl, dr);
      complex v = std::exp(am1 * std::log(detail::on_principal_sheet(tt)));
      if (gam1 != 0.0) v *= std::exp(gam1 * std::log(detail::on_principal_sheet(omt)));
      const complex fx = (x.imag() == 0.0 && x.real() != 0.0)
                             ? lin({x.real(), 0.0}, 1.0 / x.real(), sa, sb, t, dl, dr)
                             : 1.0 - x * t;
      const complex fy = (y.imag() == 0.0 && y.real() != 0.0)
                             ? lin({y.real(), 0.0}, 1.0 / y.real(), sa, sb, t, dl, dr)
                             : 1.0 - y * t;
      v *= std::exp(-beta * std::log(detail::on_principal_sheet(fx)));
      v *= std::exp(-beta_prime * std::log(detail::on_principal_sheet(fy)));
      return v;
    };
    integral += quad::tanh_sinh(f, sa, sb, 1e-13);
  }
  return gamma_fn(gamma) / (gamma_fn(alpha) * gamma_fn(gamma - alpha)) * integral;
}

// Incomplete beta B_z(a,b).  Integral sense on [0,1]; elsewhere the analytic
// continuation B_z(a,b) = z^a/a * 2F1(a, 1-b; a+1; z) with principal z^a.
inline complex incomplete_beta(complex z, complex a, complex b,
                               const SeriesControl& ctl = {}) {
  if (detail::is_nonpositive_integer(a))
    throw domain_error("incomplete_beta: a is a nonpositive integer");
  if (z == complex{0.0, 0.0}) return {0.0, 0.0};
  if (z == complex{1.0, 0.0})
    return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);  // B_1 closure
  const complex za = std::exp(a * std::log(detail::on_principal_sheet(z)));
  return za / a * gauss_2f1(a, 1.0 - b, a + 1.0, z, ctl);
}

// Complete elliptic integral K(m) by the arithmetic-geometric mean.
inline double ellint_K(double m) {
  if (m < 0.0 || m > 1.0) throw domain_error("ellint_K: m must lie in [0,1]");
  if (m == 1.0) throw domain_error("ellint_K: divergent at m = 1");
  double a = 1.0, b = std::sqrt(1.0 - m);
  while (std::abs(a - b) > 1e-16 * a) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return M_PI / (2.0 * a);
}

struct JacobiElliptic {
  double sn, cn, dn;
};

// sn, cn, dn by the descending-Landen (AGM) method.
inline JacobiElliptic jacobi_elliptic(double u, double m) {
  if (m < 0.0 || m > 1.0) throw domain_error("jacobi_elliptic: m must lie in [0,1]");
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (m == 1.0) {
    const double s = 1.0 / std::cosh(u);
    return {std::tanh(u), s, s};
  }
  constexpr int kMax = 32;
  std::array<double, kMax> a{}, c{};
  a[0] = 1.0;
  double bb = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int nlev = 0;
  for (int i = 1; i < kMax; ++i) {
    a[i] = 0.5 * (a[i - 1] + bb);
    c[i] = 0.5 * (a[i - 1] - bb);
    bb = std::sqrt(a[i - 1] * bb);
    nlev = i;
    if (std::abs(c[i]) < 1e-17 * a[i]) break;
  }
  double phi = std::ldexp(a[nlev] * u, nlev);
  for (int i = nlev; i >= 1; --i)
    phi = 0.5 * (phi + std::asin(std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0)));
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // cn / cos(phi_1 - phi_0) is 0/0-ill-conditioned where cn vanishes; the
  // sn-based form is stable on the whole period.
  const double dn = std::sqrt(std::max(1.0 - m * sn * sn, 0.0));
  return {sn, cn, dn};
}

inline double jacobi_dn(double u, double m) { return jacobi_elliptic(u, m).dn; }

}  // namespace ptkdv
