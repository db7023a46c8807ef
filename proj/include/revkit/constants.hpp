#pragma once

namespace revkit {

// 2019 SI exact values.
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double electron_volt = 1.602176634e-19;  // J

}  // namespace revkit
