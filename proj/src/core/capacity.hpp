#pragma once

#include <vector>

#include "core/coverage.hpp"
#include "core/scenario.hpp"

namespace cellplan {

// Fixed OFDMA frame accounting: 48.6 symbols per 5 ms frame, 1.6 guard,
// 47 usable; downlink slots span 2 symbols, uplink slots 3.
struct FrameBudget {
    double frame_ms = 5.0;
    double symbol_us = 102.8;
    double symbols_per_frame = 48.6;
    double guard_symbols = 1.6;
    int usable_symbols = 47;
    int dl_slot_symbols = 2;
    int ul_slot_symbols = 3;
};

// Splits keep uplink symbols divisible by 3 (whole uplink slots); strict
// mode additionally requires an odd downlink count, which the deployed
// 26:21 configuration violates.
std::vector<TddSplit> valid_tdd_splits(bool strict);

bool is_valid_tdd_split(const TddSplit& split, bool strict);

struct FluidModelParams {
    double reuse_k = 3.0;  // K
    double exponent = 3.0; // pathloss exponent, > 2
    double radius = 0.5;   // normalized cell radius, (0, 1]
};

// Analytic PUSC reuse SINR (linear):
// (K*sqrt(3)/pi) * (eta-2) * (2*sqrt(K) - r)^-2 * (2*sqrt(K)/r - 1)^eta.
double pusc_sinr(const FluidModelParams& params);

// Shannon spectral efficiency log2(1 + sinr), bits/s/Hz.
double pusc_capacity(double sinr_linear);

// Thermal noise floor over the full carrier: kTB at 290 K plus noise figure.
double thermal_noise_dbm(double bandwidth_mhz, double noise_figure_db);

// Per-pixel SINR (dB): best-server power over the sum of all co-segment
// sectors plus the noise floor. Interferers are accumulated in ascending
// site/sector order so results are bit-identical at any thread count.
RasterGrid sinr_grid(const Scenario& scenario, const CoverageResult& coverage,
                     int threads = 1);

// Per-pixel downlink throughput (Mbps): spectral efficiency x sector
// bandwidth share x TDD duty x payload fraction x MIMO multiplexing factor,
// capped at the configured peak rate scaled by the same factor; zero where
// RSRP is below receiver sensitivity.
RasterGrid throughput_grid(const Scenario& scenario, const CoverageResult& coverage,
                           const RasterGrid& sinr_db, const TddSplit& split,
                           int threads = 1);

// Legend edges of the published throughput maps (Mbps).
std::vector<double> default_throughput_edges();

struct SectorThroughput {
    double dl_mbps = 0.0;
    double ul_mbps = 0.0;
    double calibration = 0.0; // Mbps per downlink symbol
};

// Calibration constant such that the anchor split reaches the target
// downlink rate.
double fit_sector_calibration(double target_dl_mbps, const TddSplit& anchor);

// Frame-accounting sector rates: DL = n * calibration; UL fills the
// remaining symbols in 3-symbol slots, each slot carrying 3/2 of a downlink
// symbol pair's rate, so UL = (47 - n) * calibration / 2.
SectorThroughput sector_throughput(const TddSplit& split, double calibration);

struct SectorAverage {
    int site = 0;
    int sector = 0;
    double avg_dl_mbps = 0.0;
    long long pixels = 0;
};

// Mean downlink throughput over each sector's served pixels.
std::vector<SectorAverage> sector_averages(const Scenario& scenario,
                                           const CoverageResult& coverage,
                                           const RasterGrid& throughput);

// Mean throughput sampled at user positions (nearest pixel).
double mean_user_throughput(const RasterGrid& throughput, const std::vector<UserPos>& users);

// Point analogues of the grids, for radial profiles.
double sinr_db_at(const Scenario& scenario, double x, double y);
double throughput_at(const Scenario& scenario, double x, double y, const TddSplit& split);

} // namespace cellplan
