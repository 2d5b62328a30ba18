#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ptkdv/model.hpp"
#include "ptkdv/waves.hpp"

using ptkdv::complex;
using ptkdv::Curve;
using ptkdv::EvalRoute;
using ptkdv::TravelingWaveParams;
using Catch::Approx;

namespace {

const complex kReal{1.0 / std::sqrt(2.0), 0.0};
const complex kImag{0.0, 1.0 / std::sqrt(2.0)};

double rel_err(complex got, complex want) {
  return std::abs(got - want) / (1.0 + std::abs(want));
}

}  // namespace

TEST_CASE("wave parameterization is derived from (k, m)") {
  const TravelingWaveParams w{kReal, 0.9};
  CHECK(std::abs(w.c() - complex{2.2, 0.0}) < 1e-14);
  CHECK(std::abs(w.kappa() - complex{0.1, 0.0}) < 1e-14);
  CHECK(std::abs(w.omega() - w.c() * w.k) < 1e-15);
  CHECK(w.kappa_hat() == complex{0.0, 0.0});

  const TravelingWaveParams wi{kImag, 0.9};
  CHECK(std::abs(wi.c() - complex{-2.2, 0.0}) < 1e-14);
  CHECK(std::abs(wi.kappa() - complex{0.1, 0.0}) < 1e-14);
  CHECK_THROWS_AS(TravelingWaveParams(kReal, 1.5), ptkdv::domain_error);
}

TEST_CASE("ode_rhs_vx closed cases") {
  const TravelingWaveParams w{kReal, 0.9};
  // eps = 1, n = 1: the + square root of 2 P(v)
  for (double v : {-0.8, -0.5, -0.2}) {
    const complex P = ptkdv::wave_cubic({v, 0.0}, w);
    if (P.real() <= 0.0) continue;
    const complex got = ptkdv::ode_rhs_vx({v, 0.0}, w, 1.0, 1);
    CHECK(rel_err(got, std::sqrt(2.0 * P)) < 1e-13);
  }
  // polynomial vanishes at v = 0 with kappa_hat = 0
  CHECK(std::abs(ptkdv::ode_rhs_vx({0.0, 0.0}, w, 3.0, 2)) < 1e-15);
  CHECK_THROWS_AS(ptkdv::ode_rhs_vx({0.1, 0.0}, w, 0.0, 0), ptkdv::domain_error);
  CHECK_THROWS_AS(ptkdv::ode_rhs_vx({0.1, 0.0}, w, -1.0, 0), ptkdv::domain_error);
}

TEST_CASE("ode_rhs_vx against numerical differentiation of the curve") {
  // eps = 3, n = 2, k = 1/sqrt2, m = 0.9 at v = -0.5: the curve derivative
  // must be the reciprocal of v_x on the matching branch.
  const TravelingWaveParams w{kReal, 0.9};
  const double v = -0.5, h = 1e-5;
  const complex d =
      (ptkdv::curve_general(v + h, w, 3.0, 2) - ptkdv::curve_general(v - h, w, 3.0, 2)) /
      (2.0 * h);
  double best = 1e300;
  for (int np = -8; np <= 8; ++np) {
    const complex vx = ptkdv::ode_rhs_vx({v, 0.0}, w, 3.0, np);
    best = std::min(best, std::abs(d - 1.0 / vx));
  }
  CHECK(best < 1e-8);
  // and the displayed formula value itself
  const complex body = (4.0 / 3.0) * ptkdv::wave_cubic({v, 0.0}, w);
  const complex want = ptkdv::branch_phase_vx(3.0, 2) * ptkdv::branch_power(body, 0.25);
  CHECK(rel_err(ptkdv::ode_rhs_vx({v, 0.0}, w, 3.0, 2), want) < 1e-14);
}

TEST_CASE("curve_general basics and frozen spot") {
  const TravelingWaveParams w{kReal, 0.9};
  CHECK(ptkdv::curve_general(0.0, w, 3.0, 2) == complex{0.0, 0.0});
  CHECK_THROWS_AS(ptkdv::curve_general(0.1, TravelingWaveParams{kReal, 1.0}, 3.0, 0),
                  ptkdv::domain_error);
  // frozen from 30-digit segment quadrature (path crosses the root -0.1)
  const complex got = ptkdv::curve_general(-0.25, w, 3.0, 2);
  CHECK(rel_err(got, {0.85655080510354354, 0.35138687595151678}) < 1e-10);
}

TEST_CASE("curve_general series and quadrature routes agree") {
  const TravelingWaveParams w{kReal, 0.5};
  for (double eps : {1.0, 3.0}) {
    for (double v : {-0.35, -0.2, 0.15, 0.3}) {
      const complex s = ptkdv::curve_general(v, w, eps, 1, {}, EvalRoute::Series);
      const complex q = ptkdv::curve_general(v, w, eps, 1, {}, EvalRoute::Quadrature);
      CHECK(std::abs(s - q) < 1e-8 * (1.0 + std::abs(s)));
    }
  }
}

TEST_CASE("cnoidal inversion at eps = 1") {
  // Composing the curve with v(s) = -2k^2 dn^2(s|m) must advance x - ct by
  // exactly (s - s0)/k along the real branch, for both m values.
  for (double m : {0.5, 0.9}) {
    const TravelingWaveParams w{kReal, m};
    const double K = ptkdv::ellint_K(m);
    const double s0 = 0.15 * K;
    const complex base = ptkdv::curve_general(
        -2.0 * w.k2().real() * std::pow(ptkdv::jacobi_dn(s0, m), 2), w, 1.0, 0);
    for (double f = 0.25; f <= 0.85; f += 0.1) {
      const double s = f * K;
      const double dn = ptkdv::jacobi_dn(s, m);
      const double v = -2.0 * w.k2().real() * dn * dn;
      const complex got = ptkdv::curve_general(v, w, 1.0, 0);
      const double want = (s - s0) / w.k.real();
      CHECK(std::abs((got - base).real() - want) < 1e-6);
      CHECK(std::abs((got - base).imag()) < 1e-8);
    }
  }
}

TEST_CASE("curve_m0 closed cases") {
  CHECK(ptkdv::curve_m0(0.0, 3.0, 2) == complex{0.0, 0.0});
  // eps = 1: sqrt(2) atan(sqrt v) with the branch sign from n
  for (double v = 0.0; v <= 10.0; v += 0.5) {
    const complex got0 = ptkdv::curve_m0(v, 1.0, 0);
    const complex got1 = ptkdv::curve_m0(v, 1.0, 1);
    const double want = std::sqrt(2.0) * std::atan(std::sqrt(v));
    CHECK(std::abs(got0 - complex{want, 0.0}) < 1e-8);
    CHECK(std::abs(got1 + complex{want, 0.0}) < 1e-8);
  }
  // frozen eps = 3, n = 2, v = 0.5
  const complex got = ptkdv::curve_m0(0.5, 3.0, 2);
  CHECK(rel_err(got, {-0.47609228355929027, -0.47609228355929027}) < 1e-11);
  CHECK_THROWS_AS(ptkdv::curve_m0(0.5, 0.0, 0), ptkdv::domain_error);
}

TEST_CASE("curve_m0 closed form against quadrature") {
  for (double eps : {3.0, 5.0, 11.0}) {
    for (double v : {-0.9, -0.4, 0.3, 2.0, 8.0}) {
      const complex c = ptkdv::curve_m0(v, eps, 2);
      const complex q = ptkdv::curve_m0(v, eps, 2, {}, EvalRoute::Quadrature);
      CHECK(std::abs(c - q) < 1e-8 * (1.0 + std::abs(c)));
    }
  }
}

TEST_CASE("curve_general reduces to curve_m0 at m = 0") {
  const TravelingWaveParams w{kReal, 0.0};
  for (double eps : {3.0, 5.0}) {
    for (double v : {-0.6, -0.3, 0.4, 0.8}) {
      const complex a = ptkdv::curve_general(v, w, eps, 2);
      const complex b = ptkdv::curve_m0(v, eps, 2);
      CHECK(std::abs(a - b) < 1e-8 * (1.0 + std::abs(b)));
    }
  }
}

TEST_CASE("curve_m1 closed cases") {
  const TravelingWaveParams w{kReal, 1.0};
  // soliton inversion: |curve(v(s))| = |s| for v = -sech^2(s/sqrt2)
  for (double s = 0.3; s <= 2.5; s += 0.2) {
    const double v = -std::pow(1.0 / std::cosh(s / std::sqrt(2.0)), 2);
    const complex got = ptkdv::curve_m1(v, w, 1.0, 0);
    CHECK(std::abs(std::abs(got) - s) < 1e-6);
    CHECK(std::abs(got.imag()) < 1e-9);
  }
  // frozen eps = 3, n = 1, k = i/sqrt2, v = -0.5 (purely imaginary value)
  const TravelingWaveParams wi{kImag, 1.0};
  const complex spot = ptkdv::curve_m1(-0.5, wi, 3.0, 1);
  CHECK(rel_err(spot, {0.0, -1.2694139637417258}) < 1e-10);
  // v = 0 is the base point for eps > 1
  CHECK(ptkdv::curve_m1(0.0, wi, 3.0, 1) == complex{0.0, 0.0});
}

TEST_CASE("curve_m1 closed form against quadrature") {
  for (const complex k : {kReal, kImag}) {
    const TravelingWaveParams w{k, 1.0};
    for (double eps : {2.0, 3.0, 11.0}) {
      for (double v : {-0.8, -0.3, 0.4, 0.9}) {
        const complex c = ptkdv::curve_m1(v, w, eps, 2);
        const complex q = ptkdv::curve_m1(v, w, eps, 2, {}, EvalRoute::Quadrature);
        CHECK(std::abs(c - q) < 1e-8 * (1.0 + std::abs(c)));
      }
    }
  }
}

TEST_CASE("exact solutions") {
  const TravelingWaveParams w1{kReal, 1.0};
  for (double x : {-2.0, 0.3, 1.7}) {
    const complex cn = ptkdv::exact_solution(ptkdv::WaveKind::Cnoidal, x, 0.2, w1);
    const complex sh = ptkdv::exact_solution(ptkdv::WaveKind::Sech2, x, 0.2, w1);
    CHECK(std::abs(cn - sh) < 1e-13);
  }
  const TravelingWaveParams w0{kReal, 0.0};
  const complex flat = ptkdv::exact_solution(ptkdv::WaveKind::Cnoidal, 1.2, 0.0, w0);
  CHECK(std::abs(flat - complex{-1.0, 0.0}) < 1e-12);

  CHECK(std::abs(ptkdv::exact_solution(ptkdv::WaveKind::Tan2, 4.0 * 0.7, 0.7, w0)) <
        1e-14);
  const double pole_x = 4.0 * 0.1 + std::sqrt(2.0) * M_PI / 2.0;
  CHECK_THROWS_AS(ptkdv::exact_solution(ptkdv::WaveKind::Tan2, pole_x, 0.1, w0),
                  ptkdv::domain_error);
}

TEST_CASE("tan^2 and sech^2 satisfy the eps=1 scaled equation") {
  ptkdv::DeformationParams p;
  p.epsilon = 1.0;
  p.variant = ptkdv::Variant::Scaled;
  p.kappa = 0.0;

  // tan^2((x-4t)/sqrt2), analytic derivatives
  for (double y : {-1.3, -0.4, 0.2, 0.9}) {
    const double w = y / std::sqrt(2.0);
    const double tn = std::tan(w), sc2 = 1.0 / std::pow(std::cos(w), 2);
    const complex u{tn * tn, 0.0};
    const complex ut{-4.0 * std::sqrt(2.0) * tn * sc2, 0.0};
    const complex ux{std::sqrt(2.0) * tn * sc2, 0.0};
    const complex uxx{sc2 * (1.0 + 3.0 * tn * tn), 0.0};
    const complex uxxx{std::sqrt(2.0) * sc2 * tn * (4.0 + 6.0 * tn * tn), 0.0};
    const complex rhs = ptkdv::eom_rhs_pointwise(u, ux, uxx, uxxx, p);
    CHECK(std::abs(rhs - ut) < 1e-6);
  }

  // -2k^2 sech^2(kx - 4k^3 t), analytic derivatives
  const double k = 1.0 / std::sqrt(2.0);
  for (double z : {-2.0, -0.5, 0.4, 1.8}) {
    const double S = std::pow(1.0 / std::cosh(z), 2), th = std::tanh(z);
    const complex u{-2.0 * k * k * S, 0.0};
    const complex ut{-16.0 * std::pow(k, 5) * S * th, 0.0};
    const complex ux{4.0 * std::pow(k, 3) * S * th, 0.0};
    const complex uxx{4.0 * std::pow(k, 4) * S * (S - 2.0 * th * th), 0.0};
    const complex uxxx{16.0 * std::pow(k, 5) * S * th * (th * th - 2.0 * S), 0.0};
    const complex rhs = ptkdv::eom_rhs_pointwise(u, ux, uxx, uxxx, p);
    CHECK(std::abs(rhs - ut) < 1e-6);
  }
}

TEST_CASE("scan_real_branches") {
  Curve c;
  c.epsilon = 3.0;
  c.branch_n = 0;
  for (int i = 0; i <= 100; ++i) {
    c.v.push_back(-1.0 + 0.01 * i);
    c.xct.push_back(complex{0.0, 1.0});  // all imaginary
  }
  CHECK(ptkdv::scan_real_branches(c).empty());

  // paper classification: eps=3, n=2, k=1/sqrt2 real between the outer root
  // and 0 (small m keeps that nearly all of [-1, 0])
  const TravelingWaveParams w{kReal, 0.05};
  const Curve real_branch = ptkdv::make_curve(w, 3.0, 2, -1.0, 0.0, 501);
  const auto intervals = ptkdv::scan_real_branches(real_branch);
  REQUIRE(!intervals.empty());
  double span = 0.0;
  for (const auto& iv : intervals) span = std::max(span, iv.second - iv.first);
  CHECK(span >= 0.9);

  // the odd branch is a complex ray instead
  const Curve ray = ptkdv::make_curve(w, 3.0, 3, -0.9, -0.1, 101);
  const auto ray_iv = ptkdv::scan_real_branches(ray);
  double ray_span = 0.0;
  for (const auto& iv : ray_iv) ray_span += iv.second - iv.first;
  CHECK(ray_span < 0.05);
}

TEST_CASE("tail limit") {
  CHECK_THROWS_AS(ptkdv::tail_limit(1.0, 0), ptkdv::domain_error);
  // frozen Lanczos-oracle values
  CHECK(rel_err(ptkdv::tail_limit(3.0, 2), {2.2299902486613413, 0.0}) < 1e-12);
  CHECK(rel_err(ptkdv::tail_limit(11.0, 4), {1.2870496525735, 0.0}) < 1e-12);
  // the m = 0 curve approaches the tail value as v -> -1 from above
  const double e4 = std::abs(ptkdv::curve_m0(-1.0 + 1e-4, 3.0, 2) - ptkdv::tail_limit(3.0, 2));
  const double e6 = std::abs(ptkdv::curve_m0(-1.0 + 1e-6, 3.0, 2) - ptkdv::tail_limit(3.0, 2));
  CHECK(e6 < e4);
  CHECK(e6 < 5e-3);
  // while the v -> +1 side approaches something else entirely
  const double other = std::abs(ptkdv::curve_m0(1.0 - 1e-6, 3.0, 2) - ptkdv::tail_limit(3.0, 2));
  CHECK(other > 0.1);
}

TEST_CASE("ode_residual on closed-form curves") {
  // arctan curve: m = 0, eps = 1, 1e-3 spacing on [0, 10]
  const TravelingWaveParams w0{kReal, 0.0};
  const Curve arctan_curve = ptkdv::make_curve(w0, 1.0, 0, 0.0, 10.0, 10001);
  const auto rep = ptkdv::ode_residual(arctan_curve, w0);
  CHECK(rep.value < 1e-6);
  CHECK(rep.used > 9000);

  // eps = 3 branch through the Appell/quadrature machinery
  const TravelingWaveParams w{kReal, 0.05};
  const Curve c3 = ptkdv::make_curve(w, 3.0, 2, -1.0, 0.0, 2001);
  const auto rep3 = ptkdv::ode_residual(c3, w);
  CHECK(rep3.value < 1e-5);

  Curve tiny;
  tiny.v = {0.0, 0.1};
  tiny.xct = {complex{0, 0}, complex{0.1, 0}};
  CHECK_THROWS_AS(ptkdv::ode_residual(tiny, w), ptkdv::domain_error);
}

TEST_CASE("branch phase periodicity for integer eps") {
  // n and n + (1 + eps) give identical curves when eps is an integer
  for (double v : {-0.7, 0.4, 3.0}) {
    const complex a = ptkdv::curve_m0(v, 3.0, 2);
    const complex b = ptkdv::curve_m0(v, 3.0, 6);
    CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
  }
  const TravelingWaveParams w{kImag, 1.0};
  for (double v : {-0.4, 0.6}) {
    const complex a = ptkdv::curve_m1(v, w, 5.0, 1);
    const complex b = ptkdv::curve_m1(v, w, 5.0, 7);
    CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
  }
}
