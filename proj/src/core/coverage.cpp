#include "core/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "core/error.hpp"
#include "core/link_budget.hpp"

namespace cellplan {

RasterGrid make_grid(const GridSpec& spec, GridQuantity quantity) {
    RasterGrid g;
    g.origin_x = spec.origin_x;
    g.origin_y = spec.origin_y;
    g.resolution_m = spec.resolution_m;
    g.width = spec.pixels_per_side();
    g.height = spec.pixels_per_side();
    g.quantity = quantity;
    g.values.assign(static_cast<std::size_t>(g.width) * g.height, 0.0);
    return g;
}

std::optional<double> bilinear(const RasterGrid& grid, double x, double y) {
    const double gx = (x - grid.origin_x) / grid.resolution_m - 0.5;
    const double gy = (y - grid.origin_y) / grid.resolution_m - 0.5;
    const double fi = std::floor(gx);
    const double fj = std::floor(gy);
    const int i0 = static_cast<int>(fi);
    const int j0 = static_cast<int>(fj);
    if (i0 < 0 || j0 < 0 || i0 + 1 >= grid.width || j0 + 1 >= grid.height)
        return std::nullopt;
    const double tx = gx - fi;
    const double ty = gy - fj;
    const double v00 = grid.at(i0, j0);
    const double v10 = grid.at(i0 + 1, j0);
    const double v01 = grid.at(i0, j0 + 1);
    const double v11 = grid.at(i0 + 1, j0 + 1);
    if (is_no_link(v00) || is_no_link(v10) || is_no_link(v01) || is_no_link(v11))
        return kNoLinkDbm;
    const double top = v00 + tx * (v10 - v00);
    const double bot = v01 + tx * (v11 - v01);
    return top + ty * (bot - top);
}

const char* to_string(RsrpClass c) {
    switch (c) {
    case RsrpClass::excellent:
        return "excellent";
    case RsrpClass::good:
        return "good";
    case RsrpClass::fair:
        return "fair";
    case RsrpClass::poor:
        return "poor";
    case RsrpClass::outage:
        return "outage";
    }
    return "?";
}

RsrpClass classify(double rsrp_dbm) {
    if (is_no_link(rsrp_dbm))
        return RsrpClass::outage;
    if (rsrp_dbm >= -90.0)
        return RsrpClass::excellent;
    if (rsrp_dbm >= -105.0)
        return RsrpClass::good;
    if (rsrp_dbm >= -110.0)
        return RsrpClass::fair;
    if (rsrp_dbm >= -120.0)
        return RsrpClass::poor;
    return RsrpClass::outage;
}

int n_resource_blocks(double bandwidth_mhz) {
    if (!(bandwidth_mhz > 0.0))
        raise(errc::invalid_argument, "bandwidth must be positive");
    static const struct {
        double mhz;
        int rb;
    } table[] = {{1.4, 6}, {3.0, 15}, {5.0, 25}, {10.0, 50}, {15.0, 75}, {20.0, 100}};
    for (const auto& row : table)
        if (std::abs(bandwidth_mhz - row.mhz) < 1e-9)
            return row.rb;
    return static_cast<int>(std::lround(5.0 * bandwidth_mhz));
}

double rsrp_offset_db(double bandwidth_mhz) {
    return db_from_linear(12.0 * n_resource_blocks(bandwidth_mhz));
}

double received_dbm(const Scenario& scenario, const Site& site, const Sector& sector,
                    double x, double y) {
    const double dx = x - site.x;
    const double dy = y - site.y;
    const double dist_m = std::max(std::hypot(dx, dy), 1.0);
    const double bearing = std::atan2(dy, dx);
    const double pl = pathloss_db(scenario.propagation, scenario.frequency_mhz,
                                  dist_m / 1000.0, site.height_m, scenario.receiver.height_m);
    return eirp_dbm(sector.tx_power_dbm, sector.antenna_gain_dbi, scenario.line_efficiency) +
           mimo_tx_gain_db(scenario.mimo) + sector_gain_db(scenario, sector, bearing) +
           scenario.receiver.gain_dbi - pl;
}

double rsrp_at_point(const Scenario& scenario, double x, double y,
                     int site_index, int sector_index) {
    const Site& site = scenario.sites.at(static_cast<std::size_t>(site_index));
    const Sector& sector = site.sectors.at(static_cast<std::size_t>(sector_index));
    return received_dbm(scenario, site, sector, x, y) - rsrp_offset_db(scenario.bandwidth_mhz);
}

PointServer best_server_at(const Scenario& scenario, double x, double y) {
    PointServer best;
    for (std::size_t s = 0; s < scenario.sites.size(); ++s) {
        const Site& site = scenario.sites[s];
        for (std::size_t k = 0; k < site.sectors.size(); ++k) {
            const double rx = received_dbm(scenario, site, site.sectors[k], x, y);
            if (best.site < 0 || rx > best.received_dbm) {
                best.received_dbm = rx;
                best.site = static_cast<int>(s);
                best.sector = static_cast<int>(k);
            }
        }
    }
    return best;
}

namespace {

void run_rows(int height, int threads, const std::function<void(int, int)>& body) {
    if (threads <= 1 || height <= 1) {
        body(0, height);
        return;
    }
    const int n = std::min(threads, height);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        const int j0 = static_cast<int>(static_cast<long long>(height) * t / n);
        const int j1 = static_cast<int>(static_cast<long long>(height) * (t + 1) / n);
        pool.emplace_back([&body, j0, j1] { body(j0, j1); });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace

CoverageResult coverage_grid(const Scenario& scenario, int threads) {
    if (scenario.sites.empty())
        raise(errc::invalid_argument, "scenario has no sites");
    CoverageResult res;
    res.rsrp = make_grid(scenario.grid, GridQuantity::rsrp);
    res.received = make_grid(scenario.grid, GridQuantity::rssi);
    const std::size_t n_px = res.rsrp.values.size();
    res.best_site.assign(n_px, -1);
    res.best_sector.assign(n_px, -1);

    const double offset = rsrp_offset_db(scenario.bandwidth_mhz);

    run_rows(res.rsrp.height, threads, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j) {
            for (int i = 0; i < res.rsrp.width; ++i) {
                const PointServer best =
                    best_server_at(scenario, res.rsrp.pixel_x(i), res.rsrp.pixel_y(j));
                const std::size_t idx = static_cast<std::size_t>(j) * res.rsrp.width + i;
                res.received.values[idx] = best.received_dbm;
                res.rsrp.values[idx] = best.received_dbm - offset;
                res.best_site[idx] = best.site;
                res.best_sector[idx] = best.sector;
            }
        }
    });
    return res;
}

Histogram histogram(const RasterGrid& grid, const std::vector<double>& edges) {
    if (grid.values.empty())
        raise(errc::invalid_argument, "empty grid");
    if (edges.size() < 2)
        raise(errc::invalid_argument, "need at least two bin edges");
    for (std::size_t k = 1; k < edges.size(); ++k)
        if (!(edges[k] > edges[k - 1]))
            raise(errc::invalid_argument, "bin edges must be strictly increasing");

    Histogram h;
    h.edges = edges;
    h.counts.assign(edges.size() - 1, 0);
    h.total = static_cast<std::int64_t>(grid.values.size());
    for (double v : grid.values) {
        if (is_no_link(v)) {
            ++h.no_link_count;
            continue;
        }
        if (v < edges.front()) {
            ++h.below_count;
            continue;
        }
        if (v >= edges.back()) {
            ++h.above_count;
            continue;
        }
        // linear scan; bin counts are small and fixed
        for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
            if (v >= edges[k] && v < edges[k + 1]) {
                ++h.counts[k];
                break;
            }
        }
    }
    const double scale = 100.0 / static_cast<double>(h.total);
    h.percent.resize(h.counts.size());
    for (std::size_t k = 0; k < h.counts.size(); ++k)
        h.percent[k] = scale * static_cast<double>(h.counts[k]);
    h.below_pct = scale * static_cast<double>(h.below_count);
    h.above_pct = scale * static_cast<double>(h.above_count);
    h.no_link_pct = scale * static_cast<double>(h.no_link_count);
    return h;
}

std::vector<double> default_rsrp_edges() {
    return {-140.0, -120.0, -110.0, -105.0, -90.0, -80.0, -70.0, -50.0, 0.0};
}

CellRange cell_range(const Scenario& scenario, const RasterGrid& rsrp_grid,
                     int site_index, double azimuth_deg) {
    const Site& site = scenario.sites.at(static_cast<std::size_t>(site_index));
    const double theta = rad_from_deg(azimuth_deg);
    const double cx = std::cos(theta);
    const double cy = std::sin(theta);
    const double step = rsrp_grid.resolution_m;

    CellRange out;
    out.azimuth_deg = azimuth_deg;
    double last_value = kNoLinkDbm;
    bool walked = false;
    for (int k = 1;; ++k) {
        const double r = k * step;
        const auto v = bilinear(rsrp_grid, site.x + r * cx, site.y + r * cy);
        if (!v)
            break;
        walked = true;
        last_value = *v;
        if (!is_no_link(*v)) {
            if (*v >= scenario.receiver.sensitivity_dbm)
                out.usable_km = r / 1000.0;
            if (*v >= scenario.receiver.detectable_dbm)
                out.detectable_km = r / 1000.0;
        }
    }
    // still detectable where the grid runs out: the true extent is unknown
    out.grid_limited =
        !walked || (!is_no_link(last_value) && last_value >= scenario.receiver.detectable_dbm);
    return out;
}

double fit_calibration_offset(const Scenario& scenario, double target_usable_km,
                              double margin_db) {
    if (!(target_usable_km > 0.0))
        raise(errc::invalid_argument, "target range must be positive");
    if (scenario.sites.empty())
        raise(errc::invalid_argument, "scenario has no sites");
    const Site& site = scenario.sites.front();
    const Sector& sector = site.sectors.front();
    PathlossModel uncal = scenario.propagation;
    uncal.calibration_offset_db = 0.0;
    const double pl = pathloss_db(uncal, scenario.frequency_mhz, target_usable_km,
                                  site.height_m, scenario.receiver.height_m);
    const double base =
        eirp_dbm(sector.tx_power_dbm, sector.antenna_gain_dbi, scenario.line_efficiency) +
        mimo_tx_gain_db(scenario.mimo) + scenario.receiver.gain_dbi;
    const double rsrp_at_target =
        base - pl - rsrp_offset_db(scenario.bandwidth_mhz); // boresight, offset 0
    return rsrp_at_target - (scenario.receiver.sensitivity_dbm + margin_db);
}

} // namespace cellplan
