#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ptkdv/errors.hpp"

namespace ptkdv {

using complex = std::complex<double>;

// Periodic grid of complex u-samples: x_j = j * dx on [0, length), with the
// endpoints identified.
struct Field {
  std::vector<complex> values;
  double dx = 0.0;
  double length = 0.0;

  Field() = default;
  Field(std::size_t n, double domain_length)
      : values(n, complex{0.0, 0.0}), dx(domain_length / static_cast<double>(n)),
        length(domain_length) {
    if (n == 0) throw domain_error("Field: empty grid");
    if (!(domain_length > 0.0)) throw domain_error("Field: length must be > 0");
  }

  std::size_t size() const { return values.size(); }
  double x(std::size_t j) const { return dx * static_cast<double>(j); }

  complex& operator[](std::size_t j) { return values[j]; }
  const complex& operator[](std::size_t j) const { return values[j]; }

  bool compatible_with(const Field& other) const {
    return size() == other.size() && length == other.length;
  }
};

template <typename F>
Field make_field(std::size_t n, double length, F&& f) {
  Field out(n, length);
  for (std::size_t j = 0; j < n; ++j) out[j] = f(out.x(j));
  return out;
}

inline double max_abs(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  if (!a.compatible_with(b)) throw domain_error("max_abs_diff: grid mismatch");
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// Rectangle rule; spectrally accurate for smooth periodic integrands.
inline complex integrate(const Field& f) {
  complex s{0.0, 0.0};
  for (const auto& v : f.values) s += v;
  return s * f.dx;
}

}  // namespace ptkdv
