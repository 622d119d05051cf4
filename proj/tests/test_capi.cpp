#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "cellplan/cellplan.h"

using nlohmann::json;

namespace {

// run a tiny scenario end to end once per test that needs it
const char* kSmallScenario = "sites = 1\ngrid.extent = 3000\ngrid.origin_x = -1500\n"
                             "grid.origin_y = -1500\ngrid.resolution = 100\n";

struct Str {
    char* p = nullptr;
    ~Str() { cp_string_free(p); }
    std::string view() const { return p ? std::string(p) : std::string(); }
};

} // namespace

TEST_CASE("version and error surface") {
    CHECK(std::string(cp_version_string()) == "1.0.0");
    CHECK(cp_pattern_ideal(320, 2048, nullptr) == CP_EINVAL);
    CHECK(std::strlen(cp_last_error()) > 0);
}

TEST_CASE("pattern lifecycle through the c api") {
    cp_pattern* ideal = nullptr;
    REQUIRE(cp_pattern_ideal(64, 512, &ideal) == CP_OK);
    Str csv;
    REQUIRE(cp_pattern_csv(ideal, &csv.p) == CP_OK);
    CHECK(csv.view().rfind("angle_rad,gain", 0) == 0);

    cp_pattern* spread = nullptr;
    REQUIRE(cp_pattern_spread(ideal, 10.0 * 3.14159265358979 / 180.0, 0.0, &spread) == CP_OK);
    cp_erp_fit fit{};
    REQUIRE(cp_pattern_fit(spread, -25.0, 90, 100, &fit) == CP_OK);
    CHECK(fit.bw_rad > 0.0);
    CHECK(fit.sll_db > 0.0);
    Str fit_json;
    REQUIRE(cp_pattern_fit_json(&fit, &fit_json.p) == CP_OK);
    const json j = json::parse(fit_json.view());
    CHECK(j.contains("bw_deg"));
    CHECK(j["sll_db"].get<double>() == fit.sll_db);

    // under-resolved spread maps to the domain status
    cp_pattern* bad = nullptr;
    CHECK(cp_pattern_spread(ideal, 2.5 * 3.14159265 / 512.0, 0.0, &bad) == CP_EDOMAIN);
    CHECK(cp_pattern_ideal(1, 512, &bad) == CP_EINVAL);

    cp_pattern_free(spread);
    cp_pattern_free(ideal);
}

TEST_CASE("scenario lifecycle, report, hash, getters") {
    cp_scenario* sc = nullptr;
    Str report;
    REQUIRE(cp_scenario_load(kSmallScenario, &sc, &report.p) == CP_OK);
    const json rep = json::parse(report.view());
    CHECK(rep["applied_defaults"].is_array());
    CHECK(!rep["applied_defaults"].empty());
    CHECK(rep["warnings"].is_array());

    int n = 0;
    REQUIRE(cp_scenario_site_count(sc, &n) == CP_OK);
    CHECK(n == 1);
    double x = 1.0, y = 1.0;
    REQUIRE(cp_scenario_site_position(sc, 0, &x, &y) == CP_OK);
    CHECK(x == 0.0);
    CHECK(y == 0.0);
    CHECK(cp_scenario_site_position(sc, 5, &x, &y) == CP_EINVAL);
    int dl = 0, ul = 0;
    REQUIRE(cp_scenario_tdd(sc, &dl, &ul) == CP_OK);
    CHECK(dl == 35);
    CHECK(ul == 12);
    int tx = 0, rx = 0, adaptive = 0;
    REQUIRE(cp_scenario_mimo(sc, &tx, &rx, &adaptive) == CP_OK);
    CHECK(tx == 2);
    CHECK(rx == 2);
    CHECK(adaptive == 1);

    Str h1;
    REQUIRE(cp_scenario_hash(sc, &h1.p) == CP_OK);
    CHECK(h1.view().size() == 16);
    REQUIRE(cp_scenario_set_seed(sc, 99) == CP_OK);
    Str h2;
    REQUIRE(cp_scenario_hash(sc, &h2.p) == CP_OK);
    CHECK(h1.view() != h2.view()); // the seed is part of the canonical config

    Str canon;
    REQUIRE(cp_scenario_to_config(sc, &canon.p) == CP_OK);
    cp_scenario* again = nullptr;
    REQUIRE(cp_scenario_load(canon.p, &again, nullptr) == CP_OK);
    Str h3;
    REQUIRE(cp_scenario_hash(again, &h3.p) == CP_OK);
    CHECK(h3.view() == h2.view());
    cp_scenario_free(again);

    CHECK(cp_scenario_set_mimo(sc, 3, 3, 1) == CP_EINVAL);
    REQUIRE(cp_scenario_set_mimo(sc, 8, 8, 1) == CP_OK);

    cp_scenario* bad = nullptr;
    CHECK(cp_scenario_load("what is this\n", &bad, nullptr) == CP_EPARSE);
    CHECK(cp_scenario_load("frequenzy = 1\n", &bad, nullptr) == CP_EINVAL);
    cp_scenario_free(sc);
}

TEST_CASE("coverage and capacity through the c api") {
    cp_scenario* sc = nullptr;
    REQUIRE(cp_scenario_load(kSmallScenario, &sc, nullptr) == CP_OK);
    double offset = 0.0;
    REQUIRE(cp_scenario_fit_calibration(sc, 1.0, &offset) == CP_OK);
    CHECK(offset < 0.0);

    cp_coverage* cov = nullptr;
    REQUIRE(cp_coverage_run(sc, 2, &cov) == CP_OK);
    Str csv, pgm, hist, range;
    REQUIRE(cp_coverage_rsrp_csv(cov, &csv.p) == CP_OK);
    CHECK(csv.view().rfind("x,y,value", 0) == 0);
    REQUIRE(cp_coverage_rsrp_pgm(cov, &pgm.p) == CP_OK);
    CHECK(pgm.view().rfind("P2\n30 30\n255", 0) == 0);
    REQUIRE(cp_coverage_histogram_json(cov, &hist.p) == CP_OK);
    const json hj = json::parse(hist.view());
    CHECK(hj["total"].get<long long>() == 900);

    double frac_low = 0.0, frac_high = 0.0;
    REQUIRE(cp_coverage_fraction_at_least(cov, -110.0, &frac_low) == CP_OK);
    REQUIRE(cp_coverage_fraction_at_least(cov, -90.0, &frac_high) == CP_OK);
    CHECK(frac_low >= frac_high);
    CHECK(frac_low > 0.0);

    REQUIRE(cp_coverage_cell_range_json(cov, sc, 0, 0.0, &range.p) == CP_OK);
    const json rj = json::parse(range.view());
    CHECK(rj["usable_km"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rj["mimo"].get<std::string>() == "2x2");

    cp_capacity* cap = nullptr;
    CHECK(cp_capacity_run(sc, cov, 36, 11, 1, &cap) == CP_EINVAL);
    REQUIRE(cp_capacity_run(sc, cov, 35, 12, 2, &cap) == CP_OK);
    Str sinr, tput, thist, sectors, summary;
    REQUIRE(cp_capacity_sinr_csv(cap, &sinr.p) == CP_OK);
    REQUIRE(cp_capacity_throughput_csv(cap, &tput.p) == CP_OK);
    REQUIRE(cp_capacity_histogram_json(cap, &thist.p) == CP_OK);
    double cal = 0.0;
    REQUIRE(cp_fit_calibration(28.51, 26, &cal) == CP_OK);
    CHECK(cal == doctest::Approx(28.51 / 26.0).epsilon(1e-12));
    REQUIRE(cp_capacity_sector_csv(cap, sc, cov, cal, &sectors.p) == CP_OK);
    CHECK(sectors.view().rfind("site,sector,dl_mbps,ul_mbps,avg_dl_mbps", 0) == 0);
    REQUIRE(cp_capacity_summary_json(cap, sc, cov, cal, 25, &summary.p) == CP_OK);
    const json sj = json::parse(summary.view());
    CHECK(sj["split"].get<std::string>() == "35:12");
    CHECK(sj["sector_dl_mbps"].get<double>() == doctest::Approx(38.3788461538).epsilon(1e-9));
    CHECK(sj["user_mean_mbps"].is_number());

    double s = 0.0;
    REQUIRE(cp_pusc_sinr(3.0, 3.0, 0.5, &s) == CP_OK);
    CHECK(s == doctest::Approx(39.22067686540435).epsilon(1e-12));
    CHECK(cp_pusc_sinr(3.0, 1.5, 0.5, &s) == CP_EINVAL);
    double cap_bits = 0.0;
    REQUIRE(cp_pusc_capacity(1.0, &cap_bits) == CP_OK);
    CHECK(cap_bits == doctest::Approx(1.0).epsilon(1e-12));

    Str splits;
    REQUIRE(cp_valid_splits_json(1, &splits.p) == CP_OK);
    const json spj = json::parse(splits.view());
    CHECK(spj["strict"].get<bool>());
    CHECK(spj["splits"].size() == 8);
    int ok = 0;
    REQUIRE(cp_split_is_valid(26, 21, 0, &ok) == CP_OK);
    CHECK(ok == 1);
    REQUIRE(cp_split_is_valid(26, 21, 1, &ok) == CP_OK);
    CHECK(ok == 0);

    cp_capacity_free(cap);
    cp_coverage_free(cov);
    cp_scenario_free(sc);
}

TEST_CASE("drive-test comparison through the c api") {
    cp_scenario* sc = nullptr;
    REQUIRE(cp_scenario_load(kSmallScenario, &sc, nullptr) == CP_OK);

    cp_drivetest* dt = nullptr;
    Str issues;
    REQUIRE(cp_drivetest_parse("route,distance_km,rsrp_dbm,dl_mbps\n"
                               "east,0.2,-75,30\n"
                               "east,0.4,-85,22\n"
                               "east,0.6,-92,15\n"
                               "east,bad,-99,1\n",
                               0.0, 0.0, &dt, &issues.p) == CP_OK);
    int n = 0;
    REQUIRE(cp_drivetest_sample_count(dt, &n) == CP_OK);
    CHECK(n == 3);
    const json ij = json::parse(issues.view());
    CHECK(ij["issues"].size() == 1);
    CHECK(ij["issues"][0]["row"].get<int>() == 4);

    Str stats, series;
    REQUIRE(cp_compare_to_simulation(dt, sc, 0, 0.0, 0.2, 0, &stats.p, &series.p) == CP_OK);
    const json stj = json::parse(stats.view());
    CHECK(stj["n"].get<int>() == 3);
    CHECK(stj["rmse_db"].get<double>() >= 0.0);
    CHECK(series.view().rfind("distance_km,field,simulated,error", 0) == 0);

    Str report;
    REQUIRE(cp_sector_report_json(dt, &report.p) == CP_OK);
    const json rj = json::parse(report.view());
    CHECK(rj["routes"].size() == 1);
    CHECK(rj["global_peak_dl_mbps"].get<double>() == doctest::Approx(30.0).epsilon(1e-12));

    CHECK(cp_compare_to_simulation(dt, sc, 0, 0.0, 0.2, 2, &stats.p, nullptr) == CP_EINVAL);
    CHECK(cp_compare_to_simulation(dt, sc, 9, 0.0, 0.2, 0, &stats.p, nullptr) == CP_EINVAL);
    cp_drivetest_free(dt);

    cp_drivetest* empty = nullptr;
    CHECK(cp_drivetest_parse("", 0.0, 0.0, &empty, nullptr) == CP_EDATA);
    cp_scenario_free(sc);
}

TEST_CASE("run manifest checksums") {
    cp_manifest* m = nullptr;
    REQUIRE(cp_manifest_create(&m) == CP_OK);
    REQUIRE(cp_manifest_set_context(m, "00ff00ff00ff00ff", 7, "cellplan coverage",
                                    "2026-01-01T00:00:00Z") == CP_OK);
    REQUIRE(cp_manifest_add_output(m, "empty.txt", "", 0) == CP_OK);
    REQUIRE(cp_manifest_add_output(m, "a.txt", "a", 1) == CP_OK);
    Str js;
    REQUIRE(cp_manifest_json(m, &js.p) == CP_OK);
    const json j = json::parse(js.view());
    CHECK(j["seed"].get<int>() == 7);
    CHECK(j["scenario_hash"].get<std::string>() == "00ff00ff00ff00ff");
    REQUIRE(j["outputs"].size() == 2);
    // FNV-1a offset basis for the empty string
    CHECK(j["outputs"][0]["fnv1a64"].get<std::string>() == "cbf29ce484222325");
    CHECK(j["outputs"][1]["file"].get<std::string>() == "a.txt");
    CHECK(j["outputs"][1]["fnv1a64"].get<std::string>() == "af63dc4c8601ec8c");
    cp_manifest_free(m);
}
