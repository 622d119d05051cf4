#pragma once

namespace cellplan {

enum class PathlossKind { free_space, cost231_hata };
enum class Environment { urban_metro, urban_medium };

struct PathlossModel {
    PathlossKind kind = PathlossKind::cost231_hata;
    Environment environment = Environment::urban_metro;
    double calibration_offset_db = 0.0;
};

// Pathloss in dB at frequency f (MHz) and distance d (km). Heights are
// meters and only matter to the COST-231 Hata branch, which accepts base
// heights of 4-50 m and mobile heights up to 10 m; mobile heights under 1 m
// are clamped to 1 m (the scenario validator reports the clamp).
double pathloss_db(const PathlossModel& model, double f_mhz, double d_km,
                   double h_base_m = 0.0, double h_mobile_m = 0.0);

// dB added per decade of distance.
double pathloss_slope_db(const PathlossModel& model, double h_base_m = 0.0);

// Distance (km) at which pathloss reaches max_pl_db, by closed-form
// inversion of the log-distance law.
double invert_range_km(const PathlossModel& model, double max_pl_db, double f_mhz,
                       double h_base_m = 0.0, double h_mobile_m = 0.0);

// True when the COST-231 branch would clamp this mobile height.
bool mobile_height_clamped(const PathlossModel& model, double h_mobile_m);

} // namespace cellplan
