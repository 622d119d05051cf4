#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/pattern.hpp"
#include "core/propagation.hpp"

namespace cellplan {

struct MimoConfig {
    int tx = 2;
    int rx = 2;
    bool adaptive = true;
};

// Downlink/uplink division of the 47 usable symbols per frame.
struct TddSplit {
    int dl_symbols = 35;
    int ul_symbols = 12;
};

struct Sector {
    double azimuth_deg = 0.0;
    int pusc_segment = 0;
    double tx_power_dbm = 43.0;
    double antenna_gain_dbi = 18.5;
    ErpFit erp; // pointing carries the sector azimuth in radians
};

struct Site {
    double x = 0.0;
    double y = 0.0;
    double height_m = 35.0;
    std::vector<Sector> sectors; // exactly 3
};

// Square analysis raster; pixel (i, j) is centered at
// origin + (i + 0.5, j + 0.5) * resolution.
struct GridSpec {
    double origin_x = -5000.0;
    double origin_y = -5000.0;
    double extent_m = 10000.0;
    double resolution_m = 20.0;

    int pixels_per_side() const;
};

struct ReceiverParams {
    double sensitivity_dbm = -110.0;
    double detectable_dbm = -133.0;
    double height_m = 0.5;
    double gain_dbi = 0.0;
    double noise_figure_db = 7.0;
};

struct ReuseScheme {
    int channels = 1;
    int sectors = 3;
    int segments = 3;
};

struct CapacityParams {
    double data_fraction = 0.75;   // payload share of symbols
    double peak_rate_mbps = 75.0;  // per-pixel cap at 2x2
    double mimo_switch_db = 10.0;  // adaptive multiplexing threshold
    bool strict_tdd = false;       // lenient admits the 26:21 split
};

enum class PatternSource { erp, array };

struct Scenario {
    std::vector<Site> sites;
    double frequency_mhz = 2625.0;
    double bandwidth_mhz = 10.0;
    GridSpec grid;
    PathlossModel propagation;
    ReceiverParams receiver;
    ReuseScheme reuse;
    TddSplit tdd;
    MimoConfig mimo;
    CapacityParams capacity;
    std::uint64_t seed = 1;
    double site_spacing_m = 2000.0;
    double line_efficiency = 1.0;

    // Sector azimuth gain comes from the two-level step pattern unless the
    // config selects the sampled array pattern.
    PatternSource pattern_source = PatternSource::erp;
    int array_elements = 320;
    double array_spread_deg = 0.0;
    SampledPattern array_pattern; // built at load when pattern_source == array
};

struct LoadReport {
    std::vector<std::string> applied_defaults;
    std::vector<std::string> warnings;
};

// Hexagonal ring packing centered at the origin: center site, then rings of
// 6, 12, ... sites, truncated to n_sites. Nearest-neighbor spacing is
// exactly spacing_m.
std::vector<std::pair<double, double>> hex_layout(int n_sites, double spacing_m);

// Transmit-side gain of a MIMO order relative to the 2x2 baseline.
double mimo_tx_gain_db(const MimoConfig& mimo);

// Parses either the dotted key-value format ('site.height = 35', '#'
// comments) or the JSON equivalent (detected by a leading '{'). Unknown
// keys and invariant violations raise errors naming the key path; every
// defaulted key and every soft warning lands in the report.
Scenario load_scenario(const std::string& config_text, LoadReport* report = nullptr);

// Inverse of load_scenario for the supported schema; loading the output
// reproduces the scenario.
std::string scenario_to_config(const Scenario& scenario);

struct UserPos {
    int site = 0;
    double x = 0.0;
    double y = 0.0;
};

// True when (dx, dy) relative to a site center falls inside its hexagonal
// cell (flat sides facing the six lattice neighbors at spacing_m).
bool point_in_hex(double dx, double dy, double spacing_m);

// per_site uniform positions inside each site's hexagon, by rejection
// sampling from a per-site counter-based stream. Identical across runs,
// platforms, and thread counts.
std::vector<UserPos> place_users(const Scenario& scenario, int per_site);

// Azimuth gain (dB, <= 0) of a sector toward a world bearing, from the ERP
// step pattern or the sampled array pattern per scenario.pattern_source.
double sector_gain_db(const Scenario& scenario, const Sector& sector, double bearing_rad);

} // namespace cellplan
