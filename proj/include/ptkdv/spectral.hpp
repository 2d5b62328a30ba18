#pragma once

// Fourier-space utilities on the periodic grid, backed by FFTW3.  Plans are
// cached per grid size behind a mutex; execution uses the caller's buffers.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ptkdv/field.hpp"

namespace ptkdv {
namespace spectral {

namespace detail {

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

inline const Plans& plans_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Plans>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto p = std::make_unique<Plans>();
    std::vector<complex> a(n), b(n);
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p->fwd = fftw_plan_dft_1d(static_cast<int>(n), ap, bp, FFTW_FORWARD, flags);
    p->bwd = fftw_plan_dft_1d(static_cast<int>(n), ap, bp, FFTW_BACKWARD, flags);
    it = cache.emplace(n, std::move(p)).first;
  }
  return *it->second;
}

inline void run(fftw_plan plan, const std::vector<complex>& in, std::vector<complex>& out) {
  out.resize(in.size());
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace detail

// Unnormalized forward DFT; mode j of e^{2 pi i j x / L} lands in bin j.
inline std::vector<complex> fft(const std::vector<complex>& u) {
  std::vector<complex> out;
  detail::run(detail::plans_for(u.size()).fwd, u, out);
  return out;
}

inline std::vector<complex> ifft(const std::vector<complex>& uhat) {
  std::vector<complex> out;
  detail::run(detail::plans_for(uhat.size()).bwd, uhat, out);
  const double inv = 1.0 / static_cast<double>(uhat.size());
  for (auto& v : out) v *= inv;
  return out;
}

// Signed mode index for bin j of an n-point transform.
inline int mode_index(std::size_t j, std::size_t n) {
  const int jj = static_cast<int>(j);
  const int ni = static_cast<int>(n);
  return (jj <= ni / 2 - 1 + (ni % 2)) ? jj : jj - ni;
}

// d^order/dx^order by multiplying mode j with (i k_j)^order, k_j = 2 pi j / L.
// The Nyquist mode is zeroed for odd orders (its derivative has no consistent
// sign on a real grid).
inline Field derivative(const Field& f, int order) {
  if (order < 1 || order > 3) throw domain_error("spectral derivative: order must be 1..3");
  const std::size_t n = f.size();
  auto uhat = fft(f.values);
  const double k0 = 2.0 * M_PI / f.length;
  for (std::size_t j = 0; j < n; ++j) {
    const int m = mode_index(j, n);
    if ((order % 2 == 1) && n % 2 == 0 && m == -static_cast<int>(n) / 2) {
      uhat[j] = {0.0, 0.0};
      continue;
    }
    const complex ik{0.0, k0 * static_cast<double>(m)};
    complex mult{1.0, 0.0};
    for (int o = 0; o < order; ++o) mult *= ik;
    uhat[j] *= mult;
  }
  Field out = f;
  out.values = ifft(uhat);
  return out;
}

// 2/3-rule low-pass: zero every mode with |j| > n/3.
inline void dealias(Field& f) {
  const std::size_t n = f.size();
  auto uhat = fft(f.values);
  const int cutoff = static_cast<int>(n) / 3;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(mode_index(j, n)) > cutoff) uhat[j] = {0.0, 0.0};
  f.values = ifft(uhat);
}

// u(x - shift) by phase rotation in Fourier space (trigonometric interpolation
// for non-grid-aligned shifts).
inline Field translate(const Field& f, double shift) {
  const std::size_t n = f.size();
  auto uhat = fft(f.values);
  const double k0 = 2.0 * M_PI / f.length;
  for (std::size_t j = 0; j < n; ++j) {
    const int m = mode_index(j, n);
    uhat[j] *= std::polar(1.0, -k0 * static_cast<double>(m) * shift);
  }
  Field out = f;
  out.values = ifft(uhat);
  return out;
}

}  // namespace spectral
}  // namespace ptkdv
