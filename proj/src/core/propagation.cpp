#include "core/propagation.hpp"

#include <cmath>

#include "core/error.hpp"

namespace cellplan {

namespace {

constexpr double kFreeSpaceConst = 32.45; // dB, f in MHz, d in km

double cost231_checked_heights(double h_base_m, double& h_mobile_m) {
    if (h_base_m < 4.0 || h_base_m > 50.0)
        raise(errc::domain, "base antenna height outside 4-50 m");
    if (h_mobile_m > 10.0)
        raise(errc::domain, "mobile antenna height above 10 m");
    if (h_mobile_m < 1.0)
        h_mobile_m = 1.0;
    return h_base_m;
}

// Pathloss at d = 1 km; distance then adds slope * log10(d_km).
double intercept_db(const PathlossModel& model, double f_mhz, double h_base_m,
                    double h_mobile_m) {
    if (!(f_mhz > 0.0))
        raise(errc::domain, "frequency must be positive");
    switch (model.kind) {
    case PathlossKind::free_space:
        return kFreeSpaceConst + 20.0 * std::log10(f_mhz) + model.calibration_offset_db;
    case PathlossKind::cost231_hata: {
        cost231_checked_heights(h_base_m, h_mobile_m);
        const double lf = std::log10(f_mhz);
        const double mobile_corr =
            (1.1 * lf - 0.7) * h_mobile_m - (1.56 * lf - 0.8);
        const double clutter = model.environment == Environment::urban_metro ? 3.0 : 0.0;
        return 46.3 + 33.9 * lf - 13.82 * std::log10(h_base_m) - mobile_corr + clutter +
               model.calibration_offset_db;
    }
    }
    raise(errc::invalid_argument, "unknown pathloss model");
}

} // namespace

double pathloss_slope_db(const PathlossModel& model, double h_base_m) {
    switch (model.kind) {
    case PathlossKind::free_space:
        return 20.0;
    case PathlossKind::cost231_hata:
        if (h_base_m < 4.0 || h_base_m > 50.0)
            raise(errc::domain, "base antenna height outside 4-50 m");
        return 44.9 - 6.55 * std::log10(h_base_m);
    }
    raise(errc::invalid_argument, "unknown pathloss model");
}

double pathloss_db(const PathlossModel& model, double f_mhz, double d_km,
                   double h_base_m, double h_mobile_m) {
    if (!(d_km > 0.0))
        raise(errc::domain, "distance must be positive");
    return intercept_db(model, f_mhz, h_base_m, h_mobile_m) +
           pathloss_slope_db(model, h_base_m) * std::log10(d_km);
}

double invert_range_km(const PathlossModel& model, double max_pl_db, double f_mhz,
                       double h_base_m, double h_mobile_m) {
    const double intercept = intercept_db(model, f_mhz, h_base_m, h_mobile_m);
    const double slope = pathloss_slope_db(model, h_base_m);
    const double pl_at_1m = intercept - 3.0 * slope;
    if (max_pl_db < pl_at_1m)
        raise(errc::domain, "infeasible budget: below pathloss at 1 m");
    return std::pow(10.0, (max_pl_db - intercept) / slope);
}

bool mobile_height_clamped(const PathlossModel& model, double h_mobile_m) {
    return model.kind == PathlossKind::cost231_hata && h_mobile_m < 1.0;
}

} // namespace cellplan
