#pragma once

namespace ptkdv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ptkdv
