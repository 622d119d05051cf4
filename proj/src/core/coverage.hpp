#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/scenario.hpp"

namespace cellplan {

enum class GridQuantity { rsrp, rssi, sinr_db, throughput_mbps };

// Row-major raster; pixel (i, j) is centered at origin + (i+0.5, j+0.5)*res.
// Values are finite or the no-link sentinel.
struct RasterGrid {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double resolution_m = 0.0;
    int width = 0;
    int height = 0;
    GridQuantity quantity = GridQuantity::rsrp;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }
    double pixel_x(int i) const { return origin_x + (i + 0.5) * resolution_m; }
    double pixel_y(int j) const { return origin_y + (j + 0.5) * resolution_m; }
};

RasterGrid make_grid(const GridSpec& spec, GridQuantity quantity);

// Bilinear interpolation between the four surrounding pixel centers;
// nullopt outside their hull, sentinel if any corner has no link.
std::optional<double> bilinear(const RasterGrid& grid, double x, double y);

enum class RsrpClass { excellent, good, fair, poor, outage };

const char* to_string(RsrpClass c);

// Half-open coverage classes: [-90, inf) excellent, [-105, -90) good,
// [-110, -105) fair, [-120, -110) poor, below that outage.
RsrpClass classify(double rsrp_dbm);

// Resource blocks for a carrier bandwidth: standard table at the defined
// channel sizes, round(5 * MHz) between them.
int n_resource_blocks(double bandwidth_mhz);

// Offset from total received power down to per-resource-element RSRP:
// 10*log10(12 * N_rb), 27.78 dB at 10 MHz.
double rsrp_offset_db(double bandwidth_mhz);

// Downlink power (dBm) one sector delivers to a point: EIRP + MIMO transmit
// gain + azimuth pattern gain + receiver gain - pathloss. Distance is
// clamped to 1 m.
double received_dbm(const Scenario& scenario, const Site& site, const Sector& sector,
                    double x, double y);

double rsrp_at_point(const Scenario& scenario, double x, double y,
                     int site_index, int sector_index);

struct CoverageResult {
    RasterGrid rsrp;     // best-server RSRP
    RasterGrid received; // best-server wideband received power
    std::vector<std::int32_t> best_site;   // per pixel
    std::vector<std::int32_t> best_sector; // per pixel
};

struct PointServer {
    int site = -1;
    int sector = -1;
    double received_dbm = 0.0;
};

// Strongest sector at a point, ties toward the lowest site then sector.
PointServer best_server_at(const Scenario& scenario, double x, double y);

// Evaluates every sector at every pixel and keeps the argmax-RSRP server
// (ties broken toward the lowest site, then sector index). Rows are
// partitioned across threads; output is identical for any thread count.
CoverageResult coverage_grid(const Scenario& scenario, int threads = 1);

struct Histogram {
    std::vector<double> edges;        // B+1 ascending edges, bins [e_k, e_k+1)
    std::vector<std::int64_t> counts; // per bin
    std::vector<double> percent;      // per bin, sums to 100 with the buckets below
    std::int64_t below_count = 0;     // under the first edge
    std::int64_t above_count = 0;     // at or over the last edge
    std::int64_t no_link_count = 0;
    double below_pct = 0.0;
    double above_pct = 0.0;
    double no_link_pct = 0.0;
    std::int64_t total = 0;
};

Histogram histogram(const RasterGrid& grid, const std::vector<double>& edges);

// Legend edges of the published coverage maps.
std::vector<double> default_rsrp_edges();

struct CellRange {
    double usable_km = 0.0;     // last radius meeting the service threshold
    double detectable_km = 0.0; // last radius meeting the detection threshold
    double azimuth_deg = 0.0;
    bool grid_limited = false; // profile still detectable at the grid edge
};

// Walks the radial profile of the best-server RSRP grid outward from a site
// in steps of the grid resolution, interpolating bilinearly.
CellRange cell_range(const Scenario& scenario, const RasterGrid& rsrp_grid,
                     int site_index, double azimuth_deg);

// Pathloss calibration offset that puts the service-threshold crossing at
// target_usable_km along sector 0's boresight of site 0 (closed form). The
// small margin keeps the target radius itself above threshold once the
// profile is read back through grid interpolation.
double fit_calibration_offset(const Scenario& scenario, double target_usable_km,
                              double margin_db = 1e-3);

} // namespace cellplan
