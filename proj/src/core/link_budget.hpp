#pragma once

#include <array>
#include <complex>
#include <optional>

#include "core/units.hpp"

namespace cellplan {

// One end of a link. Directivity and efficiency only ever appear as their
// product, so a gain figure in dBi can be loaded as directivity with
// efficiency 1 (see terminal_from_gain_dbi).
struct TerminalParams {
    double directivity = 1.0;    // linear
    double efficiency = 1.0;     // (0, 1]
    double reflection_mag = 0.0; // |reflection coefficient|, [0, 1)
    std::array<std::complex<double>, 2> polarization{{{1.0, 0.0}, {0.0, 0.0}}};
};

struct LinkParams {
    TerminalParams tx;
    TerminalParams rx;
    double tx_power_w = 1.0;
    double wavelength_m = 1.0;
    double range_m = 1.0;
    double line_efficiency = 1.0; // transmission line, (0, 1]
    // Direct polarization loss factor; set to bypass the vectors when only
    // the scalar coupling is known (slant-polarized field hardware).
    std::optional<double> plf_override;
};

TerminalParams terminal_from_gain_dbi(double gain_dbi);

// Radiated power density P*G/(4*pi*R^2) in W/m^2.
double power_density(double p_t_w, double g_t_linear, double range_m);

// Polarization loss factor |t . conj(r)|^2 for unit polarization vectors.
double plf(const std::array<std::complex<double>, 2>& pol_t,
           const std::array<std::complex<double>, 2>& pol_r);

double link_plf(const LinkParams& link);

// Full dimensionless rx/tx power ratio:
// (1-|Gt|^2)(1-|Gr|^2) * e_t*e_r * PLF * (lambda/(4*pi*R))^2 * D_t*D_r.
double power_ratio(const LinkParams& link);

// tx power (dBm) + 10*log10(power_ratio). A ratio of zero (cross-polarized,
// say) returns the no-link sentinel instead of -inf.
double received_power_dbm(const LinkParams& link);

double eirp_dbm(double p_t_dbm, double g_t_dbi, double line_efficiency);

// EIRP in watts from a peak radiation intensity in W/sr.
double eirp_watts(double u_max_w_per_sr);

// Largest range at which received power still meets p_r_min_dbm, from the
// closed-form square-root inversion of the power ratio.
double max_range_m(const LinkParams& link, double p_r_min_dbm);

} // namespace cellplan
