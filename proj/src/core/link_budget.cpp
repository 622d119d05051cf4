#include "core/link_budget.hpp"

#include <cmath>

#include "core/error.hpp"

namespace cellplan {

namespace {

void check_terminal(const TerminalParams& t, const char* which) {
    if (!(t.efficiency > 0.0) || t.efficiency > 1.0)
        raise(errc::invalid_argument, std::string(which) + " efficiency must be in (0, 1]");
    if (t.reflection_mag < 0.0 || t.reflection_mag >= 1.0)
        raise(errc::invalid_argument, std::string(which) + " reflection magnitude must be in [0, 1)");
    if (!(t.directivity > 0.0))
        raise(errc::invalid_argument, std::string(which) + " directivity must be positive");
}

void check_link(const LinkParams& link) {
    check_terminal(link.tx, "tx");
    check_terminal(link.rx, "rx");
    if (!(link.tx_power_w > 0.0))
        raise(errc::invalid_argument, "tx power must be positive");
    if (!(link.wavelength_m > 0.0))
        raise(errc::invalid_argument, "wavelength must be positive");
    if (!(link.range_m > 0.0))
        raise(errc::invalid_argument, "range must be positive");
    if (!(link.line_efficiency > 0.0) || link.line_efficiency > 1.0)
        raise(errc::invalid_argument, "line efficiency must be in (0, 1]");
    if (link.plf_override && (*link.plf_override < 0.0 || *link.plf_override > 1.0))
        raise(errc::invalid_argument, "polarization loss factor must be in [0, 1]");
}

double norm2(const std::array<std::complex<double>, 2>& v) {
    return std::norm(v[0]) + std::norm(v[1]);
}

} // namespace

TerminalParams terminal_from_gain_dbi(double gain_dbi) {
    TerminalParams t;
    t.directivity = linear_from_db(gain_dbi);
    t.efficiency = 1.0;
    return t;
}

double power_density(double p_t_w, double g_t_linear, double range_m) {
    if (!(range_m > 0.0))
        raise(errc::domain, "range must be positive");
    return p_t_w * g_t_linear / (4.0 * kPi * range_m * range_m);
}

double plf(const std::array<std::complex<double>, 2>& pol_t,
           const std::array<std::complex<double>, 2>& pol_r) {
    if (std::abs(norm2(pol_t) - 1.0) > 2e-9 || std::abs(norm2(pol_r) - 1.0) > 2e-9)
        raise(errc::invalid_argument, "polarization vectors must have unit norm");
    const std::complex<double> dot =
        pol_t[0] * std::conj(pol_r[0]) + pol_t[1] * std::conj(pol_r[1]);
    return std::norm(dot);
}

double link_plf(const LinkParams& link) {
    if (link.plf_override)
        return *link.plf_override;
    return plf(link.tx.polarization, link.rx.polarization);
}

double power_ratio(const LinkParams& link) {
    check_link(link);
    const double mismatch = (1.0 - link.tx.reflection_mag * link.tx.reflection_mag) *
                            (1.0 - link.rx.reflection_mag * link.rx.reflection_mag);
    const double spread = link.wavelength_m / (4.0 * kPi * link.range_m);
    return mismatch * link.tx.efficiency * link.rx.efficiency * link_plf(link) *
           spread * spread * link.tx.directivity * link.rx.directivity;
}

double received_power_dbm(const LinkParams& link) {
    const double ratio = power_ratio(link);
    if (ratio <= 0.0)
        return kNoLinkDbm;
    return dbm_from_watts(link.tx_power_w) + db_from_linear(ratio);
}

double eirp_dbm(double p_t_dbm, double g_t_dbi, double line_efficiency) {
    if (!(line_efficiency > 0.0) || line_efficiency > 1.0)
        raise(errc::invalid_argument, "line efficiency must be in (0, 1]");
    return p_t_dbm + g_t_dbi + db_from_linear(line_efficiency);
}

double eirp_watts(double u_max_w_per_sr) {
    if (u_max_w_per_sr < 0.0)
        raise(errc::invalid_argument, "radiation intensity must be non-negative");
    return 4.0 * kPi * u_max_w_per_sr;
}

double max_range_m(const LinkParams& link, double p_r_min_dbm) {
    LinkParams unit = link;
    unit.range_m = 1.0;
    const double k1 = power_ratio(unit); // ratio at 1 m; scales as 1/R^2
    if (k1 <= 0.0)
        raise(errc::domain, "infeasible link: power ratio is zero at every range");
    const double p_min_w = watts_from_dbm(p_r_min_dbm);
    return std::sqrt(link.tx_power_w * k1 / p_min_w);
}

} // namespace cellplan
