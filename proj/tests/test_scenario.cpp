#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"

#include "core/error.hpp"
#include "core/scenario.hpp"
#include "core/units.hpp"

using namespace cellplan;

TEST_CASE("empty config loads the documented defaults") {
    LoadReport report;
    const Scenario sc = load_scenario("", &report);
    CHECK(sc.sites.size() == 1);
    CHECK(sc.frequency_mhz == 2625.0);
    CHECK(sc.bandwidth_mhz == 10.0);
    CHECK(sc.site_spacing_m == 2000.0);
    CHECK(sc.sites[0].height_m == 35.0);
    CHECK(sc.sites[0].sectors.size() == 3);
    CHECK(sc.sites[0].sectors[0].tx_power_dbm == 43.0);
    CHECK(sc.sites[0].sectors[0].antenna_gain_dbi == 18.5);
    CHECK(sc.sites[0].sectors[0].azimuth_deg == 0.0);
    CHECK(sc.sites[0].sectors[1].azimuth_deg == 120.0);
    CHECK(sc.sites[0].sectors[2].pusc_segment == 2);
    CHECK(sc.receiver.sensitivity_dbm == -110.0);
    CHECK(sc.receiver.detectable_dbm == -133.0);
    CHECK(sc.receiver.height_m == 0.5);
    CHECK(sc.receiver.noise_figure_db == 7.0);
    CHECK(sc.propagation.kind == PathlossKind::cost231_hata);
    CHECK(sc.propagation.environment == Environment::urban_metro);
    CHECK(sc.reuse.channels == 1);
    CHECK(sc.reuse.sectors == 3);
    CHECK(sc.reuse.segments == 3);
    CHECK(sc.tdd.dl_symbols == 35);
    CHECK(sc.tdd.ul_symbols == 12);
    CHECK(sc.mimo.tx == 2);
    CHECK(sc.mimo.rx == 2);
    CHECK(sc.mimo.adaptive);
    CHECK(sc.capacity.data_fraction == 0.75);
    CHECK(sc.capacity.peak_rate_mbps == 75.0);
    CHECK_FALSE(sc.capacity.strict_tdd);
    CHECK(sc.seed == 1);
    CHECK(sc.grid.pixels_per_side() == 500);
    CHECK_FALSE(report.applied_defaults.empty());
    // the 0.5 m receiver height triggers the model clamp note
    bool clamp_note = false;
    for (const std::string& w : report.warnings)
        clamp_note = clamp_note || w.find("clamp") != std::string::npos;
    CHECK(clamp_note);
}

TEST_CASE("key-value parsing: comments, errors, duplicates") {
    CHECK(load_scenario("# comment only\n\nfrequency = 2600\n").frequency_mhz == 2600.0);
    CHECK_THROWS_WITH_AS(load_scenario("frequency 2600\n"),
                         doctest::Contains("expected 'key = value'"), error);
    CHECK_THROWS_WITH_AS(load_scenario("frequency = 2600\nfrequency = 2500\n"),
                         doctest::Contains("duplicate key"), error);
    CHECK_THROWS_WITH_AS(load_scenario("frequenzy = 2600\n"),
                         doctest::Contains("unknown key: frequenzy"), error);
    CHECK_THROWS_WITH_AS(load_scenario("frequency = fast\n"),
                         doctest::Contains("malformed number"), error);
}

TEST_CASE("json configs flatten to the same keys") {
    const Scenario sc = load_scenario(
        R"({"frequency": 2600, "site": {"height": 40}, "sector": {"azimuths": [10, 130, 250]}, "tdd": {"dl": 26, "ul": 21}})");
    CHECK(sc.frequency_mhz == 2600.0);
    CHECK(sc.sites[0].height_m == 40.0);
    CHECK(sc.sites[0].sectors[1].azimuth_deg == 130.0);
    CHECK(sc.tdd.dl_symbols == 26);
    CHECK_THROWS_WITH_AS(load_scenario("{\"frequency\": [2600"),
                         doctest::Contains("invalid JSON"), error);
    CHECK_THROWS_WITH_AS(load_scenario("[1, 2]"),
                         doctest::Contains("must be an object"), error);
}

TEST_CASE("validation messages name the offending key") {
    CHECK_THROWS_WITH_AS(load_scenario("sector.azimuths = 0,120\n"),
                         doctest::Contains("sectors: expected 3"), error);
    CHECK_THROWS_WITH_AS(load_scenario("tdd.dl = 36\ntdd.ul = 11\n"),
                         doctest::Contains("divisible by 3"), error);
    CHECK_THROWS_WITH_AS(load_scenario("tdd.dl = 30\ntdd.ul = 12\n"),
                         doctest::Contains("equal 47"), error);
    CHECK_THROWS_WITH_AS(load_scenario("bandwidth = 40\n"), doctest::Contains("bandwidth"),
                         error);
    CHECK_THROWS_WITH_AS(load_scenario("site.height = 80\n"), doctest::Contains("height"),
                         error);
    CHECK_THROWS_WITH_AS(load_scenario("receiver.sensitivity = -110\nreceiver.detectable = -100\n"),
                         doctest::Contains("detectable"), error);
    CHECK_THROWS_WITH_AS(load_scenario("mimo.tx = 3\n"), doctest::Contains("2, 4, or 8"),
                         error);
    // free space accepts heights the street-level model rejects
    CHECK(load_scenario("propagation.kind = free_space\nsite.height = 80\n")
              .sites[0]
              .height_m == 80.0);
}

TEST_CASE("hex layout rings") {
    const auto one = hex_layout(1, 2000.0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].first == 0.0);
    CHECK(one[0].second == 0.0);

    const auto seven = hex_layout(7, 2000.0);
    REQUIRE(seven.size() == 7);
    for (std::size_t i = 1; i < 7; ++i) {
        const double d = std::hypot(seven[i].first, seven[i].second);
        CHECK(d == doctest::Approx(2000.0).epsilon(1e-12));
    }
    // nearest-neighbor distance anywhere in a larger layout is the spacing
    const auto many = hex_layout(19, 2000.0);
    double min_d = 1e18;
    for (std::size_t a = 0; a < many.size(); ++a)
        for (std::size_t b = a + 1; b < many.size(); ++b)
            min_d = std::min(min_d, std::hypot(many[a].first - many[b].first,
                                               many[a].second - many[b].second));
    CHECK(min_d == doctest::Approx(2000.0).epsilon(1e-9));
    // positions are distinct
    std::set<std::pair<long long, long long>> seen;
    for (const auto& [x, y] : many)
        seen.insert({std::llround(x * 1000), std::llround(y * 1000)});
    CHECK(seen.size() == many.size());
}

TEST_CASE("mimo transmit gain relative to the 2x2 baseline") {
    CHECK(mimo_tx_gain_db({2, 2, true}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mimo_tx_gain_db({4, 4, true}) == doctest::Approx(3.0102999566).epsilon(1e-9));
    CHECK(mimo_tx_gain_db({8, 8, true}) == doctest::Approx(6.0205999133).epsilon(1e-9));
    CHECK_THROWS_AS(mimo_tx_gain_db({3, 3, true}), error);
    CHECK_THROWS_AS(mimo_tx_gain_db({2, 5, true}), error);
}

TEST_CASE("canonical config round trip is a fixed point") {
    const char* text = "sites = 7\nfrequency = 2600\nbandwidth = 5\n"
                       "sector.erp_bw = 65\nsector.erp_sll = 22.5\n"
                       "tdd.dl = 26\ntdd.ul = 21\nseed = 42\n"
                       "mimo.tx = 4\nmimo.rx = 4\n";
    const Scenario sc = load_scenario(text);
    const std::string canon = scenario_to_config(sc);
    const Scenario sc2 = load_scenario(canon);
    CHECK(scenario_to_config(sc2) == canon);
    CHECK(sc2.sites.size() == sc.sites.size());
    CHECK(sc2.seed == 42);
    CHECK(sc2.tdd.dl_symbols == 26);
}

TEST_CASE("hexagon membership") {
    const double d = 2000.0;
    CHECK(point_in_hex(0.0, 0.0, d));
    // flat sides face the lattice neighbors at +-d/2 in x
    CHECK(point_in_hex(999.9, 0.0, d));
    CHECK_FALSE(point_in_hex(1000.1, 0.0, d));
    // vertices sit at d/sqrt(3) in y
    CHECK(point_in_hex(0.0, d / std::sqrt(3.0) - 0.1, d));
    CHECK_FALSE(point_in_hex(0.0, d / std::sqrt(3.0) + 0.1, d));
    // hex corner region: inside the bounding box but outside the cell
    CHECK_FALSE(point_in_hex(999.0, 650.0, d));
    CHECK(point_in_hex(999.0, 450.0, d));
}

TEST_CASE("user placement is deterministic and in-cell") {
    Scenario sc = load_scenario("sites = 7\nseed = 5\n");
    const auto users = place_users(sc, 200);
    REQUIRE(users.size() == 7 * 200);
    for (const UserPos& u : users) {
        const auto& site = sc.sites[static_cast<std::size_t>(u.site)];
        CHECK(point_in_hex(u.x - site.x, u.y - site.y, sc.site_spacing_m));
    }
    const auto again = place_users(sc, 200);
    for (std::size_t i = 0; i < users.size(); ++i) {
        CHECK(users[i].x == again[i].x);
        CHECK(users[i].y == again[i].y);
    }
    // site streams are independent of site count
    Scenario bigger = load_scenario("sites = 19\nseed = 5\n");
    const auto more = place_users(bigger, 200);
    for (std::size_t i = 0; i < users.size(); ++i) {
        CHECK(more[i].x == users[i].x);
        CHECK(more[i].y == users[i].y);
    }
    CHECK_THROWS_AS(place_users(sc, 0), error);
}

TEST_CASE("user placement is uniform over the cell") {
    // chi-squared against the flat density on a 10x10 grid over the cell's
    // bounding box; expected occupancy from a fine deterministic subgrid
    Scenario sc = load_scenario("sites = 1\nseed = 1\n");
    const double d = sc.site_spacing_m;
    const double hx = d / 2.0, hy = d / std::sqrt(3.0);
    const int bins = 10;

    std::vector<double> expected(bins * bins, 0.0);
    const int sub = 200; // per bin axis
    double total_in = 0.0;
    for (int bj = 0; bj < bins; ++bj)
        for (int bi = 0; bi < bins; ++bi) {
            double cnt = 0.0;
            for (int sj = 0; sj < sub; ++sj)
                for (int si = 0; si < sub; ++si) {
                    const double x = -hx + (bi + (si + 0.5) / sub) * (2 * hx / bins);
                    const double y = -hy + (bj + (sj + 0.5) / sub) * (2 * hy / bins);
                    if (point_in_hex(x, y, d))
                        cnt += 1.0;
                }
            expected[bj * bins + bi] = cnt;
            total_in += cnt;
        }

    const int n_users = 20000;
    const auto users = place_users(sc, n_users);
    std::vector<long long> observed(bins * bins, 0);
    for (const UserPos& u : users) {
        const int bi = std::min(bins - 1, static_cast<int>((u.x + hx) / (2 * hx / bins)));
        const int bj = std::min(bins - 1, static_cast<int>((u.y + hy) / (2 * hy / bins)));
        observed[bj * bins + bi] += 1;
    }

    double chi2 = 0.0;
    int live_bins = 0;
    for (int b = 0; b < bins * bins; ++b) {
        if (expected[b] == 0.0) {
            CHECK(observed[b] == 0);
            continue;
        }
        ++live_bins;
        const double e = expected[b] / total_in * n_users;
        const double diff = observed[b] - e;
        chi2 += diff * diff / e;
    }
    CHECK(live_bins == 84);
    // 0.001 critical value for 83 degrees of freedom
    CHECK(chi2 < 128.565);
}

TEST_CASE("sector azimuth gain, step and sampled sources") {
    Scenario sc = load_scenario("");
    const Sector& s0 = sc.sites[0].sectors[0]; // boresight 0 deg
    CHECK(sector_gain_db(sc, s0, rad_from_deg(0.0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sector_gain_db(sc, s0, rad_from_deg(29.0)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sector_gain_db(sc, s0, rad_from_deg(180.0)) ==
          doctest::Approx(-20.0).epsilon(1e-12));

    Scenario arr = load_scenario(
        "sector.pattern = array\nsector.elements = 64\nsector.spread_deg = 10\n");
    CHECK(arr.pattern_source == PatternSource::array);
    CHECK(arr.array_pattern.size() >= 16);
    const Sector& a0 = arr.sites[0].sectors[0];
    CHECK(sector_gain_db(arr, a0, rad_from_deg(0.0)) ==
          doctest::Approx(0.0).epsilon(1e-9));
    // off boresight the smoothed array is below peak but finite
    const double off = sector_gain_db(arr, a0, rad_from_deg(40.0));
    CHECK(off < -1.0);
    CHECK(off >= -400.0);
}

TEST_CASE("receiver height above the street model limit is rejected at load") {
    CHECK_THROWS_WITH_AS(load_scenario("receiver.height = 12\n"),
                         doctest::Contains("receiver.height"), error);
    // fine under free space
    CHECK(load_scenario("propagation.kind = free_space\nreceiver.height = 12\n")
              .receiver.height_m == 12.0);
}
