#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"

#include "core/capacity.hpp"
#include "core/coverage.hpp"
#include "core/error.hpp"
#include "core/scenario.hpp"
#include "core/units.hpp"

using namespace cellplan;

TEST_CASE("frame split enumeration") {
    const auto lenient = valid_tdd_splits(false);
    std::set<int> dl_lenient;
    for (const TddSplit& s : lenient) {
        CHECK(s.dl_symbols + s.ul_symbols == 47);
        CHECK(s.ul_symbols % 3 == 0);
        CHECK(s.dl_symbols >= 1);
        dl_lenient.insert(s.dl_symbols);
    }
    CHECK(lenient.size() == 16);
    CHECK(dl_lenient.count(26) == 1);
    CHECK(dl_lenient.count(35) == 1);

    const auto strict = valid_tdd_splits(true);
    std::set<int> dl_strict;
    for (const TddSplit& s : strict)
        dl_strict.insert(s.dl_symbols);
    CHECK(dl_strict == std::set<int>{5, 11, 17, 23, 29, 35, 41, 47});

    CHECK(is_valid_tdd_split({35, 12}, true));
    CHECK(is_valid_tdd_split({26, 21}, false));
    CHECK_FALSE(is_valid_tdd_split({26, 21}, true)); // even downlink count
    CHECK_FALSE(is_valid_tdd_split({36, 11}, false));
    CHECK_FALSE(is_valid_tdd_split({30, 12}, false));
}

TEST_CASE("analytic reuse SINR") {
    CHECK(pusc_sinr({3.0, 3.0, 0.5}) ==
          doctest::Approx(39.22067686540435).epsilon(1e-12));
    CHECK(pusc_capacity(pusc_sinr({3.0, 3.0, 0.5})) ==
          doctest::Approx(5.329865455549658).epsilon(1e-12));
    CHECK(pusc_capacity(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pusc_capacity(0.0) == 0.0);

    // strictly decreasing toward the cell edge, every configuration
    for (double k : {1.0, 3.0, 7.0}) {
        for (double eta : {2.5, 3.0, 4.0}) {
            double last = 1e300;
            for (int i = 1; i <= 20; ++i) {
                const double r = i / 20.0;
                const double s = pusc_sinr({k, eta, r});
                CHECK(s < last);
                CHECK(s > 0.0);
                last = s;
            }
        }
    }

    CHECK_THROWS_AS(pusc_sinr({0.5, 3.0, 0.5}), error);
    CHECK_THROWS_AS(pusc_sinr({3.0, 2.0, 0.5}), error);
    CHECK_THROWS_AS(pusc_sinr({3.0, 3.0, 1.5}), error);
    CHECK_THROWS_AS(pusc_sinr({3.0, 3.0, 0.0}), error);
    CHECK_THROWS_AS(pusc_capacity(-0.1), error);
}

TEST_CASE("thermal noise floor") {
    CHECK(thermal_noise_dbm(10.0, 7.0) == doctest::Approx(-96.97518719).epsilon(1e-9));
    CHECK(thermal_noise_dbm(10.0, 0.0) == doctest::Approx(-103.97518719).epsilon(1e-9));
    // 10x bandwidth adds 10 dB
    CHECK(thermal_noise_dbm(20.0, 7.0) - thermal_noise_dbm(2.0, 7.0) ==
          doctest::Approx(10.0).epsilon(1e-9));
    CHECK_THROWS_AS(thermal_noise_dbm(0.0, 7.0), error);
}

TEST_CASE("frame-accounting sector rates") {
    const double cal = fit_sector_calibration(28.51, {26, 21});
    CHECK(cal == doctest::Approx(28.51 / 26.0).epsilon(1e-15));

    const SectorThroughput anchor = sector_throughput({26, 21}, cal);
    CHECK(anchor.dl_mbps == doctest::Approx(28.51).epsilon(1e-12));
    CHECK(anchor.ul_mbps == doctest::Approx(11.51365385).epsilon(1e-9));

    const SectorThroughput deployed = sector_throughput({35, 12}, cal);
    CHECK(deployed.dl_mbps == doctest::Approx(38.37884615).epsilon(1e-9));
    CHECK(deployed.ul_mbps == doctest::Approx(6.57923077).epsilon(1e-9));

    // downlink grows and uplink shrinks across the strict ladder
    double last_dl = 0.0, last_ul = 1e18;
    for (const TddSplit& s : valid_tdd_splits(true)) {
        const SectorThroughput t = sector_throughput(s, cal);
        CHECK(t.dl_mbps > last_dl);
        CHECK(t.ul_mbps < last_ul);
        last_dl = t.dl_mbps;
        last_ul = t.ul_mbps;
    }
    CHECK_THROWS_AS(sector_throughput({30, 17}, cal), error);
    CHECK_THROWS_AS(fit_sector_calibration(-1.0, {26, 21}), error);
}

TEST_CASE("single-site SINR is signal over thermal noise") {
    const Scenario sc = load_scenario("grid.extent = 4000\ngrid.origin_x = -2000\n"
                                      "grid.origin_y = -2000\ngrid.resolution = 50\n");
    const double x = 900.0, y = 150.0;
    const PointServer best = best_server_at(sc, x, y);
    const double expected =
        best.received_dbm - thermal_noise_dbm(sc.bandwidth_mhz, sc.receiver.noise_figure_db);
    CHECK(sinr_db_at(sc, x, y) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("co-segment neighbors depress SINR") {
    const char* grid = "grid.extent = 4000\ngrid.origin_x = -2000\n"
                       "grid.origin_y = -2000\ngrid.resolution = 50\n";
    const Scenario alone = load_scenario(std::string("sites = 1\n") + grid);
    const Scenario cluster = load_scenario(std::string("sites = 7\n") + grid);
    const double x = 900.0, y = 150.0;
    CHECK(sinr_db_at(cluster, x, y) < sinr_db_at(alone, x, y));
}

TEST_CASE("sinr and throughput grids: threads, point parity, caps") {
    const Scenario sc = load_scenario("sites = 7\ngrid.extent = 6000\n"
                                      "grid.origin_x = -3000\ngrid.origin_y = -3000\n"
                                      "grid.resolution = 100\n");
    const CoverageResult cov = coverage_grid(sc, 2);
    const RasterGrid s1 = sinr_grid(sc, cov, 1);
    const RasterGrid s5 = sinr_grid(sc, cov, 5);
    const RasterGrid t1 = throughput_grid(sc, cov, s1, {35, 12}, 1);
    const RasterGrid t5 = throughput_grid(sc, cov, s5, {35, 12}, 5);
    for (std::size_t p = 0; p < s1.values.size(); ++p) {
        CHECK(s1.values[p] == s5.values[p]);
        CHECK(t1.values[p] == t5.values[p]);
    }

    const int i = 23, j = 41;
    CHECK(sinr_db_at(sc, s1.pixel_x(i), s1.pixel_y(j)) ==
          doctest::Approx(s1.at(i, j)).epsilon(1e-12));
    CHECK(throughput_at(sc, t1.pixel_x(i), t1.pixel_y(j), {35, 12}) ==
          doctest::Approx(t1.at(i, j)).epsilon(1e-12));

    // per-pixel cap: peak rate times the multiplexing factor (1 at 2x2)
    for (std::size_t p = 0; p < t1.values.size(); ++p) {
        CHECK(t1.values[p] <= sc.capacity.peak_rate_mbps + 1e-12);
        CHECK(t1.values[p] >= 0.0);
        if (cov.rsrp.values[p] < sc.receiver.sensitivity_dbm)
            CHECK(t1.values[p] == 0.0);
    }
}

TEST_CASE("tdd split validation at the grid boundary") {
    Scenario sc = load_scenario("grid.extent = 2000\ngrid.origin_x = -1000\n"
                                "grid.origin_y = -1000\ngrid.resolution = 100\n");
    const CoverageResult cov = coverage_grid(sc, 1);
    const RasterGrid s = sinr_grid(sc, cov, 1);
    CHECK_THROWS_AS(throughput_grid(sc, cov, s, {36, 11}, 1), error);
    CHECK_NOTHROW(throughput_grid(sc, cov, s, {26, 21}, 1)); // lenient default
    sc.capacity.strict_tdd = true;
    CHECK_THROWS_AS(throughput_grid(sc, cov, s, {26, 21}, 1), error);
    CHECK_NOTHROW(throughput_grid(sc, cov, s, {35, 12}, 1));
}

TEST_CASE("higher antenna orders never lose throughput anywhere") {
    Scenario sc = load_scenario("sites = 7\ngrid.extent = 6000\n"
                                "grid.origin_x = -3000\ngrid.origin_y = -3000\n"
                                "grid.resolution = 100\n");
    std::vector<RasterGrid> tput;
    for (int order : {2, 4, 8}) {
        sc.mimo = {order, order, true};
        const CoverageResult cov = coverage_grid(sc, 4);
        tput.push_back(throughput_grid(sc, cov, sinr_grid(sc, cov, 4), {35, 12}, 4));
    }
    for (std::size_t p = 0; p < tput[0].values.size(); ++p) {
        CHECK(tput[1].values[p] >= tput[0].values[p] - 1e-12);
        CHECK(tput[2].values[p] >= tput[1].values[p] - 1e-12);
    }
}

TEST_CASE("raising sidelobe suppression helps mainlobe pixels with a stable server") {
    const char* base = "sites = 7\ngrid.extent = 6000\ngrid.origin_x = -3000\n"
                       "grid.origin_y = -3000\ngrid.resolution = 100\n";
    const Scenario lo = load_scenario(std::string(base) + "sector.erp_sll = 20\n");
    const Scenario hi = load_scenario(std::string(base) + "sector.erp_sll = 30\n");
    const CoverageResult cov_lo = coverage_grid(lo, 4);
    const CoverageResult cov_hi = coverage_grid(hi, 4);
    const RasterGrid s_lo = sinr_grid(lo, cov_lo, 4);
    const RasterGrid s_hi = sinr_grid(hi, cov_hi, 4);

    int compared = 0;
    for (int j = 0; j < s_lo.height; ++j) {
        for (int i = 0; i < s_lo.width; ++i) {
            const std::size_t p = static_cast<std::size_t>(j) * s_lo.width + i;
            if (cov_lo.best_site[p] != cov_hi.best_site[p] ||
                cov_lo.best_sector[p] != cov_hi.best_sector[p])
                continue;
            const Site& site = lo.sites[static_cast<std::size_t>(cov_lo.best_site[p])];
            const Sector& sec =
                site.sectors[static_cast<std::size_t>(cov_lo.best_sector[p])];
            const double bearing =
                std::atan2(s_lo.pixel_y(j) - site.y, s_lo.pixel_x(i) - site.x);
            if (angular_distance(bearing, rad_from_deg(sec.azimuth_deg)) >
                0.5 * sec.erp.bw_rad - 1e-9)
                continue; // only pixels served through the mainlobe
            CHECK(s_hi.values[p] >= s_lo.values[p] - 1e-9);
            ++compared;
        }
    }
    CHECK(compared > 500); // the property covers a substantial share of the map
}

TEST_CASE("sector averages and user sampling") {
    const Scenario sc = load_scenario("sites = 7\ngrid.extent = 8000\n"
                                      "grid.origin_x = -4000\ngrid.origin_y = -4000\n"
                                      "grid.resolution = 100\nseed = 11\n");
    const CoverageResult cov = coverage_grid(sc, 4);
    const RasterGrid t = throughput_grid(sc, cov, sinr_grid(sc, cov, 4), {35, 12}, 4);

    const auto averages = sector_averages(sc, cov, t);
    CHECK(averages.size() == 7 * 3);
    long long pixels = 0;
    for (const SectorAverage& a : averages) {
        CHECK(a.avg_dl_mbps >= 0.0);
        CHECK(a.avg_dl_mbps <= sc.capacity.peak_rate_mbps + 1e-12);
        pixels += a.pixels;
    }
    CHECK(pixels <= static_cast<long long>(t.values.size()));

    const auto users = place_users(sc, 500);
    const double mean = mean_user_throughput(t, users);
    CHECK(mean > 0.0);
    CHECK(mean <= sc.capacity.peak_rate_mbps + 1e-12);
    CHECK(mean_user_throughput(t, users) == mean); // deterministic
    CHECK_THROWS_AS(mean_user_throughput(t, {}), error);
}
