#pragma once

#include <numbers>

namespace paoi::constants {

// CODATA 2018 exact values (SI redefinition).
inline constexpr double speed_of_light = 299'792'458.0;  // m/s
inline constexpr double boltzmann = 1.380649e-23;        // J/K

inline constexpr double pi = std::numbers::pi;

}  // namespace paoi::constants
