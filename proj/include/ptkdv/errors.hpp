#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptkdv {

// Invalid parameter combinations (poles of the parameterization, bad indices).
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// A series or quadrature failed to reach the requested tolerance.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// |u_x| fell inside the clamp radius where a negative power of u_x is needed.
class singularity_error : public std::runtime_error {
 public:
  singularity_error(const std::string& what, std::size_t grid_index, double ux_abs)
      : std::runtime_error(what), grid_index(grid_index), ux_abs(ux_abs) {}
  std::size_t grid_index;
  double ux_abs;
};

// Field amplitude exceeded the blow-up threshold during time stepping.
class blowup_error : public std::runtime_error {
 public:
  blowup_error(const std::string& what, double t, double max_abs)
      : std::runtime_error(what), t(t), max_abs(max_abs) {}
  double t;
  double max_abs;
};

}  // namespace ptkdv
