#include "core/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "core/error.hpp"

namespace cellplan {

std::vector<TddSplit> valid_tdd_splits(bool strict) {
    std::vector<TddSplit> out;
    for (int n = 1; n <= 47; ++n) {
        TddSplit s{n, 47 - n};
        if (is_valid_tdd_split(s, strict))
            out.push_back(s);
    }
    return out;
}

bool is_valid_tdd_split(const TddSplit& split, bool strict) {
    if (split.dl_symbols < 1 || split.ul_symbols < 0)
        return false;
    if (split.dl_symbols + split.ul_symbols != 47)
        return false;
    if (split.ul_symbols % 3 != 0)
        return false;
    if (strict && split.dl_symbols % 2 == 0)
        return false;
    return true;
}

double pusc_sinr(const FluidModelParams& params) {
    if (!(params.reuse_k >= 1.0))
        raise(errc::invalid_argument, "reuse factor K must be >= 1");
    if (!(params.exponent > 2.0))
        raise(errc::invalid_argument, "propagation exponent must exceed 2");
    if (!(params.radius > 0.0) || params.radius > 1.0)
        raise(errc::invalid_argument, "normalized radius must be in (0, 1]");
    const double rk = std::sqrt(params.reuse_k);
    const double near_factor = 2.0 * rk - params.radius;
    const double far_factor = 2.0 * rk / params.radius - 1.0;
    if (!(near_factor > 0.0) || !(far_factor > 0.0))
        raise(errc::domain, "reuse geometry factor non-positive at this radius");
    return (params.reuse_k * std::sqrt(3.0) / kPi) * (params.exponent - 2.0) *
           std::pow(near_factor, -2.0) * std::pow(far_factor, params.exponent);
}

double pusc_capacity(double sinr_linear) {
    if (sinr_linear < 0.0)
        raise(errc::domain, "SINR must be non-negative");
    return std::log2(1.0 + sinr_linear);
}

double thermal_noise_dbm(double bandwidth_mhz, double noise_figure_db) {
    if (!(bandwidth_mhz > 0.0))
        raise(errc::invalid_argument, "bandwidth must be positive");
    const double watts = kBoltzmann * kNoiseRefKelvin * bandwidth_mhz * 1e6;
    return dbm_from_watts(watts) + noise_figure_db;
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

// Co-segment interference on the best server's subcarriers, summed in
// ascending site/sector order.
double cochannel_interference_mw(const Scenario& scenario, double x, double y,
                                 int best_site, int best_sector) {
    const int segment = scenario.sites[static_cast<std::size_t>(best_site)]
                            .sectors[static_cast<std::size_t>(best_sector)]
                            .pusc_segment;
    double interf_mw = 0.0;
    for (std::size_t s = 0; s < scenario.sites.size(); ++s) {
        const Site& site = scenario.sites[s];
        for (std::size_t k = 0; k < site.sectors.size(); ++k) {
            if (static_cast<int>(s) == best_site && static_cast<int>(k) == best_sector)
                continue;
            if (site.sectors[k].pusc_segment != segment)
                continue;
            const double rx = received_dbm(scenario, site, site.sectors[k], x, y);
            interf_mw += std::pow(10.0, rx / 10.0);
        }
    }
    return interf_mw;
}

double noise_floor_mw(const Scenario& scenario) {
    return std::pow(
        10.0, thermal_noise_dbm(scenario.bandwidth_mhz, scenario.receiver.noise_figure_db) / 10.0);
}

} // namespace

RasterGrid sinr_grid(const Scenario& scenario, const CoverageResult& coverage, int threads) {
    RasterGrid out = make_grid(scenario.grid, GridQuantity::sinr_db);
    const double noise_mw = noise_floor_mw(scenario);

    run_rows(out.height, threads, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j) {
            for (int i = 0; i < out.width; ++i) {
                const std::size_t idx = static_cast<std::size_t>(j) * out.width + i;
                const double signal_mw = std::pow(10.0, coverage.received.values[idx] / 10.0);
                const double interf_mw =
                    cochannel_interference_mw(scenario, out.pixel_x(i), out.pixel_y(j),
                                              coverage.best_site[idx], coverage.best_sector[idx]);
                out.values[idx] = db_from_linear(signal_mw / (interf_mw + noise_mw));
            }
        }
    });
    return out;
}

double sinr_db_at(const Scenario& scenario, double x, double y) {
    const PointServer best = best_server_at(scenario, x, y);
    const double signal_mw = std::pow(10.0, best.received_dbm / 10.0);
    const double interf_mw = cochannel_interference_mw(scenario, x, y, best.site, best.sector);
    return db_from_linear(signal_mw / (interf_mw + noise_floor_mw(scenario)));
}

namespace {

double pixel_throughput(const Scenario& scenario, const TddSplit& split, double rsrp_dbm,
                        double sinr_db_value) {
    if (is_no_link(rsrp_dbm) || rsrp_dbm < scenario.receiver.sensitivity_dbm)
        return 0.0;
    const double sector_bw_mhz = scenario.bandwidth_mhz / scenario.reuse.segments;
    const double duty = (split.dl_symbols / 47.0) * scenario.capacity.data_fraction;
    const double full_mult = std::min(scenario.mimo.tx, scenario.mimo.rx) / 2.0;
    const double mult =
        scenario.mimo.adaptive
            ? (sinr_db_value >= scenario.capacity.mimo_switch_db ? full_mult : 1.0)
            : full_mult;
    const double sinr = std::pow(10.0, sinr_db_value / 10.0);
    const double rate = pusc_capacity(sinr) * sector_bw_mhz * duty * mult;
    return std::min(rate, scenario.capacity.peak_rate_mbps * mult);
}

} // namespace

RasterGrid throughput_grid(const Scenario& scenario, const CoverageResult& coverage,
                           const RasterGrid& sinr_db, const TddSplit& split, int threads) {
    if (!is_valid_tdd_split(split, scenario.capacity.strict_tdd))
        raise(errc::invalid_argument, "invalid TDD split");
    RasterGrid out = make_grid(scenario.grid, GridQuantity::throughput_mbps);
    run_rows(out.height, threads, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j) {
            for (int i = 0; i < out.width; ++i) {
                const std::size_t idx = static_cast<std::size_t>(j) * out.width + i;
                out.values[idx] = pixel_throughput(scenario, split, coverage.rsrp.values[idx],
                                                   sinr_db.values[idx]);
            }
        }
    });
    return out;
}

double throughput_at(const Scenario& scenario, double x, double y, const TddSplit& split) {
    if (!is_valid_tdd_split(split, scenario.capacity.strict_tdd))
        raise(errc::invalid_argument, "invalid TDD split");
    const PointServer best = best_server_at(scenario, x, y);
    const double rsrp = best.received_dbm - rsrp_offset_db(scenario.bandwidth_mhz);
    return pixel_throughput(scenario, split, rsrp, sinr_db_at(scenario, x, y));
}

std::vector<double> default_throughput_edges() {
    return {0.0, 1.0, 5.0, 10.0, 20.0, 30.0, 40.0};
}

double fit_sector_calibration(double target_dl_mbps, const TddSplit& anchor) {
    if (!(target_dl_mbps > 0.0))
        raise(errc::invalid_argument, "target rate must be positive");
    if (anchor.dl_symbols < 1)
        raise(errc::invalid_argument, "anchor split has no downlink symbols");
    return target_dl_mbps / anchor.dl_symbols;
}

SectorThroughput sector_throughput(const TddSplit& split, double calibration) {
    if (!(calibration > 0.0))
        raise(errc::invalid_argument, "calibration constant must be positive");
    SectorThroughput out;
    out.calibration = calibration;
    out.dl_mbps = split.dl_symbols * calibration;
    // (47 - n)/3 uplink slots of 3 symbols each, at 3/2 the per-slot rate of
    // a 2-symbol downlink slot pair
    out.ul_mbps = split.ul_symbols * calibration / 2.0;
    return out;
}

std::vector<SectorAverage> sector_averages(const Scenario& scenario,
                                           const CoverageResult& coverage,
                                           const RasterGrid& throughput) {
    std::vector<SectorAverage> out;
    std::vector<double> sums;
    const std::size_t n_sectors = scenario.sites.size() * 3;
    out.resize(n_sectors);
    sums.assign(n_sectors, 0.0);
    for (std::size_t s = 0; s < scenario.sites.size(); ++s) {
        for (int k = 0; k < 3; ++k) {
            auto& row = out[s * 3 + static_cast<std::size_t>(k)];
            row.site = static_cast<int>(s);
            row.sector = k;
        }
    }
    for (std::size_t idx = 0; idx < throughput.values.size(); ++idx) {
        const int bs = coverage.best_site[idx];
        const int bk = coverage.best_sector[idx];
        if (bs < 0)
            continue;
        const std::size_t slot = static_cast<std::size_t>(bs) * 3 + static_cast<std::size_t>(bk);
        sums[slot] += throughput.values[idx];
        ++out[slot].pixels;
    }
    for (std::size_t slot = 0; slot < n_sectors; ++slot)
        if (out[slot].pixels > 0)
            out[slot].avg_dl_mbps = sums[slot] / static_cast<double>(out[slot].pixels);
    return out;
}

double mean_user_throughput(const RasterGrid& throughput, const std::vector<UserPos>& users) {
    if (users.empty())
        raise(errc::invalid_argument, "no users");
    double sum = 0.0;
    for (const UserPos& u : users) {
        long long i = static_cast<long long>(
            std::floor((u.x - throughput.origin_x) / throughput.resolution_m));
        long long j = static_cast<long long>(
            std::floor((u.y - throughput.origin_y) / throughput.resolution_m));
        i = std::clamp(i, 0LL, static_cast<long long>(throughput.width - 1));
        j = std::clamp(j, 0LL, static_cast<long long>(throughput.height - 1));
        sum += throughput.at(static_cast<int>(i), static_cast<int>(j));
    }
    return sum / static_cast<double>(users.size());
}

} // namespace cellplan
