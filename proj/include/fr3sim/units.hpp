#pragma once

#include <cmath>
#include <numbers>

namespace fr3sim {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kPi = std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wraps an angle in degrees to [-180, 180).
inline double wrap_deg(double a) {
    a = std::fmod(a + 180.0, 360.0);
    if (a < 0) a += 360.0;
    return a - 180.0;
}

}  // namespace fr3sim
