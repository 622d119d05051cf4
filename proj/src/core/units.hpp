#pragma once

#include <cmath>

namespace cellplan {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kBoltzmann = 1.380649e-23;     // J/K
inline constexpr double kNoiseRefKelvin = 290.0;

// Sentinel for "no link" in dB-domain grids and results. Kept finite so
// rasters, histograms and PGM export stay well defined; every consumer
// treats values <= kNoLinkDbm as absence of signal.
inline constexpr double kNoLinkDbm = -999.0;

inline bool is_no_link(double dbm) { return dbm <= kNoLinkDbm; }

inline double db_from_linear(double ratio) { return 10.0 * std::log10(ratio); }
inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_from_watts(double w) { return 10.0 * std::log10(w * 1000.0); }
inline double watts_from_dbm(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

inline double rad_from_deg(double deg) { return deg * kPi / 180.0; }
inline double deg_from_rad(double rad) { return rad * 180.0 / kPi; }

// Wraps an angle to (-pi, pi].
inline double wrap_pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    if (a > kPi) a -= kTwoPi;
    return a;
}

// Shortest angular distance on the circle, in [0, pi].
inline double angular_distance(double a, double b) {
    return std::fabs(wrap_pi(a - b));
}

inline double wavelength_m(double frequency_mhz) {
    return kSpeedOfLight / (frequency_mhz * 1.0e6);
}

} // namespace cellplan
