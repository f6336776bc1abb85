// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace camsim {

/// Thrown on violated preconditions and malformed inputs.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void check(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

namespace constants {
// CODATA 2018
inline constexpr double planck_h = 6.62607015e-34;      // J*s
inline constexpr double speed_of_light = 2.99792458e8;  // m/s
inline constexpr double luminous_efficacy = 683.0;      // lm/W at 555 nm
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

}  // namespace camsim
