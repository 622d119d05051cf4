#include "cellplan/cellplan.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "core/capacity.hpp"
#include "core/coverage.hpp"
#include "core/error.hpp"
#include "core/measurement.hpp"
#include "core/pattern.hpp"
#include "core/scenario.hpp"
#include "core/units.hpp"
#include "core/writers.hpp"

using nlohmann::json;

struct cp_pattern {
    cellplan::SampledPattern p;
};
struct cp_scenario {
    cellplan::Scenario sc;
};
struct cp_coverage {
    cellplan::CoverageResult res;
};
struct cp_capacity {
    cellplan::RasterGrid sinr;
    cellplan::RasterGrid throughput;
    cellplan::TddSplit split;
};
struct cp_drivetest {
    cellplan::DriveTestLog log;
};
struct cp_manifest {
    std::string scenario_hash;
    std::uint64_t seed = 0;
    std::string command_line;
    std::string timestamp;
    std::vector<std::pair<std::string, std::string>> outputs; // name, checksum
};

namespace {

thread_local std::string g_last_error;

cp_status status_of(cellplan::errc code) {
    switch (code) {
    case cellplan::errc::invalid_argument:
        return CP_EINVAL;
    case cellplan::errc::domain:
        return CP_EDOMAIN;
    case cellplan::errc::parse:
        return CP_EPARSE;
    case cellplan::errc::io:
        return CP_EIO;
    case cellplan::errc::data:
        return CP_EDATA;
    }
    return CP_EUNKNOWN;
}

template <typename F>
cp_status guard(F&& body) {
    try {
        body();
        g_last_error.clear();
        return CP_OK;
    } catch (const cellplan::error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CP_EUNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return CP_EUNKNOWN;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        cellplan::raise(cellplan::errc::io, "out of memory");
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok)
        cellplan::raise(cellplan::errc::invalid_argument, what);
}

std::string mimo_label(const cellplan::MimoConfig& m) {
    return std::to_string(m.tx) + "x" + std::to_string(m.rx);
}

json histogram_json(const cellplan::Histogram& h, const char* quantity) {
    json out;
    out["quantity"] = quantity;
    out["edges"] = h.edges;
    out["counts"] = h.counts;
    out["percent"] = h.percent;
    out["below_pct"] = h.below_pct;
    out["above_pct"] = h.above_pct;
    out["no_link_pct"] = h.no_link_pct;
    out["total"] = h.total;
    return out;
}

} // namespace

extern "C" {

const char* cp_last_error(void) { return g_last_error.c_str(); }

const char* cp_version_string(void) { return CELLPLAN_VERSION_STR; }

void cp_string_free(char* s) { std::free(s); }

/* ---- patterns ---- */

cp_status cp_pattern_ideal(int elements, int samples, cp_pattern** out) {
    return guard([&] {
        require(out != nullptr, "null output");
        cellplan::ArraySpec spec;
        spec.n_elements = elements;
        spec.n_samples = samples;
        *out = new cp_pattern{cellplan::make_ideal_pattern(spec)};
    });
}

cp_status cp_pattern_spread(const cp_pattern* in, double sigma_rad, double mean_az_rad,
                            cp_pattern** out) {
    return guard([&] {
        require(in != nullptr && out != nullptr, "null argument");
        cellplan::PasSpec pas;
        pas.sigma_rad = sigma_rad;
        pas.mean_az_rad = mean_az_rad;
        *out = new cp_pattern{cellplan::spread_pattern(in->p, pas)};
    });
}

cp_status cp_pattern_fit(const cp_pattern* in, double floor_db, int bw_steps, int sll_steps,
                         cp_erp_fit* out) {
    return guard([&] {
        require(in != nullptr && out != nullptr, "null argument");
        const cellplan::ErpFit fit = cellplan::fit_erp(in->p, floor_db, bw_steps, sll_steps);
        out->bw_rad = fit.bw_rad;
        out->sll_db = fit.sll_db;
        out->pointing_rad = fit.pointing_rad;
        out->residual = fit.residual;
    });
}

cp_status cp_pattern_csv(const cp_pattern* in, char** out) {
    return guard([&] {
        require(in != nullptr && out != nullptr, "null argument");
        *out = dup_string(cellplan::pattern_csv(in->p));
    });
}

cp_status cp_pattern_fit_json(const cp_erp_fit* fit, char** out) {
    return guard([&] {
        require(fit != nullptr && out != nullptr, "null argument");
        json j;
        j["bw_rad"] = fit->bw_rad;
        j["bw_deg"] = cellplan::deg_from_rad(fit->bw_rad);
        j["sll_db"] = fit->sll_db;
        j["pointing_rad"] = fit->pointing_rad;
        j["pointing_deg"] = cellplan::deg_from_rad(fit->pointing_rad);
        j["residual"] = fit->residual;
        *out = dup_string(j.dump(2) + "\n");
    });
}

void cp_pattern_free(cp_pattern* p) { delete p; }

/* ---- scenarios ---- */

cp_status cp_scenario_load(const char* config_text, cp_scenario** out, char** report_json) {
    return guard([&] {
        require(config_text != nullptr && out != nullptr, "null argument");
        cellplan::LoadReport report;
        auto* sc = new cp_scenario{cellplan::load_scenario(config_text, &report)};
        if (report_json) {
            json j;
            j["applied_defaults"] = report.applied_defaults;
            j["warnings"] = report.warnings;
            try {
                *report_json = dup_string(j.dump(2) + "\n");
            } catch (...) {
                delete sc;
                throw;
            }
        }
        *out = sc;
    });
}

cp_status cp_scenario_to_config(const cp_scenario* sc, char** out) {
    return guard([&] {
        require(sc != nullptr && out != nullptr, "null argument");
        *out = dup_string(cellplan::scenario_to_config(sc->sc));
    });
}

cp_status cp_scenario_hash(const cp_scenario* sc, char** out) {
    return guard([&] {
        require(sc != nullptr && out != nullptr, "null argument");
        *out = dup_string(cellplan::hex64(cellplan::fnv1a64(cellplan::scenario_to_config(sc->sc))));
    });
}

cp_status cp_scenario_seed(const cp_scenario* sc, uint64_t* out) {
    return guard([&] {
        require(sc != nullptr && out != nullptr, "null argument");
        *out = sc->sc.seed;
    });
}

cp_status cp_scenario_set_seed(cp_scenario* sc, uint64_t seed) {
    return guard([&] {
        require(sc != nullptr, "null argument");
        sc->sc.seed = seed;
    });
}

cp_status cp_scenario_set_mimo(cp_scenario* sc, int tx, int rx, int adaptive) {
    return guard([&] {
        require(sc != nullptr, "null argument");
        cellplan::MimoConfig m;
        m.tx = tx;
        m.rx = rx;
        m.adaptive = adaptive != 0;
        cellplan::mimo_tx_gain_db(m); // validates
        sc->sc.mimo = m;
    });
}

cp_status cp_scenario_set_calibration_offset(cp_scenario* sc, double offset_db) {
    return guard([&] {
        require(sc != nullptr, "null argument");
        sc->sc.propagation.calibration_offset_db = offset_db;
    });
}

cp_status cp_scenario_fit_calibration(cp_scenario* sc, double target_usable_km,
                                      double* offset_db) {
    return guard([&] {
        require(sc != nullptr, "null argument");
        const double offset = cellplan::fit_calibration_offset(sc->sc, target_usable_km);
        sc->sc.propagation.calibration_offset_db = offset;
        if (offset_db)
            *offset_db = offset;
    });
}

cp_status cp_scenario_site_count(const cp_scenario* sc, int* out) {
    return guard([&] {
        require(sc != nullptr && out != nullptr, "null argument");
        *out = static_cast<int>(sc->sc.sites.size());
    });
}

cp_status cp_scenario_site_position(const cp_scenario* sc, int site_index, double* x,
                                    double* y) {
    return guard([&] {
        require(sc != nullptr && x != nullptr && y != nullptr, "null argument");
        require(site_index >= 0 &&
                    static_cast<std::size_t>(site_index) < sc->sc.sites.size(),
                "site index out of range");
        *x = sc->sc.sites[static_cast<std::size_t>(site_index)].x;
        *y = sc->sc.sites[static_cast<std::size_t>(site_index)].y;
    });
}

cp_status cp_scenario_tdd(const cp_scenario* sc, int* dl, int* ul) {
    return guard([&] {
        require(sc != nullptr && dl != nullptr && ul != nullptr, "null argument");
        *dl = sc->sc.tdd.dl_symbols;
        *ul = sc->sc.tdd.ul_symbols;
    });
}

cp_status cp_scenario_mimo(const cp_scenario* sc, int* tx, int* rx, int* adaptive) {
    return guard([&] {
        require(sc != nullptr && tx != nullptr && rx != nullptr && adaptive != nullptr,
                "null argument");
        *tx = sc->sc.mimo.tx;
        *rx = sc->sc.mimo.rx;
        *adaptive = sc->sc.mimo.adaptive ? 1 : 0;
    });
}

void cp_scenario_free(cp_scenario* sc) { delete sc; }

/* ---- coverage ---- */

cp_status cp_coverage_run(const cp_scenario* sc, int threads, cp_coverage** out) {
    return guard([&] {
        require(sc != nullptr && out != nullptr, "null argument");
        require(threads >= 1, "thread count must be >= 1");
        *out = new cp_coverage{cellplan::coverage_grid(sc->sc, threads)};
    });
}

cp_status cp_coverage_rsrp_csv(const cp_coverage* cov, char** out) {
    return guard([&] {
        require(cov != nullptr && out != nullptr, "null argument");
        *out = dup_string(cellplan::grid_csv(cov->res.rsrp));
    });
}

cp_status cp_coverage_rsrp_pgm(const cp_coverage* cov, char** out) {
    return guard([&] {
        require(cov != nullptr && out != nullptr, "null argument");
        *out = dup_string(cellplan::grid_pgm(cov->res.rsrp));
    });
}

cp_status cp_coverage_histogram_json(const cp_coverage* cov, char** out) {
    return guard([&] {
        require(cov != nullptr && out != nullptr, "null argument");
        const cellplan::Histogram h =
            cellplan::histogram(cov->res.rsrp, cellplan::default_rsrp_edges());
        *out = dup_string(histogram_json(h, "rsrp").dump(2) + "\n");
    });
}

cp_status cp_coverage_fraction_at_least(const cp_coverage* cov, double rsrp_dbm, double* out) {
    return guard([&] {
        require(cov != nullptr && out != nullptr, "null argument");
        const auto& v = cov->res.rsrp.values;
        std::size_t n = 0;
        for (double x : v)
            if (!cellplan::is_no_link(x) && x >= rsrp_dbm)
                ++n;
        *out = static_cast<double>(n) / static_cast<double>(v.size());
    });
}

cp_status cp_coverage_cell_range_json(const cp_coverage* cov, const cp_scenario* sc,
                                      int site_index, double azimuth_deg, char** out) {
    return guard([&] {
        require(cov != nullptr && sc != nullptr && out != nullptr, "null argument");
        const cellplan::CellRange r =
            cellplan::cell_range(sc->sc, cov->res.rsrp, site_index, azimuth_deg);
        json j;
        j["azimuth_deg"] = r.azimuth_deg;
        j["usable_km"] = r.usable_km;
        j["detectable_km"] = r.detectable_km;
        j["grid_limited"] = r.grid_limited;
        j["mimo"] = mimo_label(sc->sc.mimo);
        *out = dup_string(j.dump(2) + "\n");
    });
}

void cp_coverage_free(cp_coverage* cov) { delete cov; }

/* ---- capacity ---- */

cp_status cp_valid_splits_json(int strict, char** out) {
    return guard([&] {
        require(out != nullptr, "null argument");
        json splits = json::array();
        for (const cellplan::TddSplit& s : cellplan::valid_tdd_splits(strict != 0)) {
            json row;
            row["dl"] = s.dl_symbols;
            row["ul"] = s.ul_symbols;
            splits.push_back(row);
        }
        json j;
        j["strict"] = strict != 0;
        j["splits"] = splits;
        *out = dup_string(j.dump(2) + "\n");
    });
}

cp_status cp_split_is_valid(int dl, int ul, int strict, int* out) {
    return guard([&] {
        require(out != nullptr, "null argument");
        *out = cellplan::is_valid_tdd_split({dl, ul}, strict != 0) ? 1 : 0;
    });
}

cp_status cp_pusc_sinr(double reuse_k, double exponent, double radius, double* out) {
    return guard([&] {
        require(out != nullptr, "null argument");
        cellplan::FluidModelParams p;
        p.reuse_k = reuse_k;
        p.exponent = exponent;
        p.radius = radius;
        *out = cellplan::pusc_sinr(p);
    });
}

cp_status cp_pusc_capacity(double sinr_linear, double* out) {
    return guard([&] {
        require(out != nullptr, "null argument");
        *out = cellplan::pusc_capacity(sinr_linear);
    });
}

cp_status cp_capacity_run(const cp_scenario* sc, const cp_coverage* cov, int dl, int ul,
                          int threads, cp_capacity** out) {
    return guard([&] {
        require(sc != nullptr && cov != nullptr && out != nullptr, "null argument");
        require(threads >= 1, "thread count must be >= 1");
        const cellplan::TddSplit split{dl, ul};
        if (!cellplan::is_valid_tdd_split(split, sc->sc.capacity.strict_tdd)) {
            std::string valid;
            for (const cellplan::TddSplit& s :
                 cellplan::valid_tdd_splits(sc->sc.capacity.strict_tdd)) {
                if (!valid.empty())
                    valid += ", ";
                valid += std::to_string(s.dl_symbols) + ":" + std::to_string(s.ul_symbols);
            }
            cellplan::raise(cellplan::errc::invalid_argument,
                            "invalid TDD split " + std::to_string(dl) + ":" +
                                std::to_string(ul) + "; valid splits: " + valid);
        }
        auto cap = std::make_unique<cp_capacity>();
        cap->split = split;
        cap->sinr = cellplan::sinr_grid(sc->sc, cov->res, threads);
        cap->throughput =
            cellplan::throughput_grid(sc->sc, cov->res, cap->sinr, split, threads);
        *out = cap.release();
    });
}

cp_status cp_capacity_sinr_csv(const cp_capacity* cap, char** out) {
    return guard([&] {
        require(cap != nullptr && out != nullptr, "null argument");
        *out = dup_string(cellplan::grid_csv(cap->sinr));
    });
}

cp_status cp_capacity_throughput_csv(const cp_capacity* cap, char** out) {
    return guard([&] {
        require(cap != nullptr && out != nullptr, "null argument");
        *out = dup_string(cellplan::grid_csv(cap->throughput));
    });
}

cp_status cp_capacity_throughput_pgm(const cp_capacity* cap, char** out) {
    return guard([&] {
        require(cap != nullptr && out != nullptr, "null argument");
        *out = dup_string(cellplan::grid_pgm(cap->throughput));
    });
}

cp_status cp_capacity_histogram_json(const cp_capacity* cap, char** out) {
    return guard([&] {
        require(cap != nullptr && out != nullptr, "null argument");
        const cellplan::Histogram h =
            cellplan::histogram(cap->throughput, cellplan::default_throughput_edges());
        *out = dup_string(histogram_json(h, "throughput_mbps").dump(2) + "\n");
    });
}

cp_status cp_capacity_sector_csv(const cp_capacity* cap, const cp_scenario* sc,
                                 const cp_coverage* cov, double calibration, char** out) {
    return guard([&] {
        require(cap != nullptr && sc != nullptr && cov != nullptr && out != nullptr,
                "null argument");
        const cellplan::SectorThroughput st =
            cellplan::sector_throughput(cap->split, calibration);
        const auto averages = cellplan::sector_averages(sc->sc, cov->res, cap->throughput);
        std::string csv = "site,sector,dl_mbps,ul_mbps,avg_dl_mbps\n";
        char buf[96];
        for (const cellplan::SectorAverage& row : averages) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.10g,%.10g,%.10g\n", row.site, row.sector,
                          st.dl_mbps, st.ul_mbps, row.avg_dl_mbps);
            csv += buf;
        }
        *out = dup_string(csv);
    });
}

cp_status cp_capacity_summary_json(const cp_capacity* cap, const cp_scenario* sc,
                                   const cp_coverage* cov, double calibration,
                                   int per_site_users, char** out) {
    return guard([&] {
        require(cap != nullptr && sc != nullptr && cov != nullptr && out != nullptr,
                "null argument");
        require(per_site_users >= 0, "user count must be >= 0");
        const cellplan::SectorThroughput st =
            cellplan::sector_throughput(cap->split, calibration);
        double mean = 0.0, peak = 0.0;
        for (double v : cap->throughput.values) {
            mean += v;
            peak = std::max(peak, v);
        }
        mean /= static_cast<double>(cap->throughput.values.size());
        json j;
        j["split"] = std::to_string(cap->split.dl_symbols) + ":" +
                     std::to_string(cap->split.ul_symbols);
        j["dl_symbols"] = cap->split.dl_symbols;
        j["ul_symbols"] = cap->split.ul_symbols;
        j["calibration_mbps_per_symbol"] = st.calibration;
        j["sector_dl_mbps"] = st.dl_mbps;
        j["sector_ul_mbps"] = st.ul_mbps;
        j["grid_mean_mbps"] = mean;
        j["grid_peak_mbps"] = peak;
        j["mimo"] = mimo_label(sc->sc.mimo);
        if (per_site_users > 0) {
            const auto users = cellplan::place_users(sc->sc, per_site_users);
            j["users_per_site"] = per_site_users;
            j["user_mean_mbps"] = cellplan::mean_user_throughput(cap->throughput, users);
        }
        *out = dup_string(j.dump(2) + "\n");
    });
}

cp_status cp_fit_calibration(double target_dl_mbps, int anchor_dl, double* out) {
    return guard([&] {
        require(out != nullptr, "null argument");
        *out = cellplan::fit_sector_calibration(target_dl_mbps, {anchor_dl, 47 - anchor_dl});
    });
}

void cp_capacity_free(cp_capacity* cap) { delete cap; }

/* ---- drive-test comparison ---- */

cp_status cp_drivetest_parse(const char* csv_text, double site_x, double site_y,
                             cp_drivetest** out, char** issues_json) {
    return guard([&] {
        require(csv_text != nullptr && out != nullptr, "null argument");
        auto* dt = new cp_drivetest{cellplan::parse_drive_test(csv_text, site_x, site_y)};
        if (issues_json) {
            json issues = json::array();
            for (const cellplan::ParseIssue& it : dt->log.issues) {
                json row;
                row["row"] = it.row;
                row["column"] = it.column;
                row["message"] = it.message;
                issues.push_back(row);
            }
            json j;
            j["issues"] = issues;
            j["warnings"] = dt->log.warnings;
            try {
                *issues_json = dup_string(j.dump(2) + "\n");
            } catch (...) {
                delete dt;
                throw;
            }
        }
        *out = dt;
    });
}

cp_status cp_drivetest_sample_count(const cp_drivetest* dt, int* out) {
    return guard([&] {
        require(dt != nullptr && out != nullptr, "null argument");
        *out = static_cast<int>(dt->log.samples.size());
    });
}

cp_status cp_compare_to_simulation(const cp_drivetest* dt, const cp_scenario* sc,
                                   int site_index, double azimuth_deg, double bin_width_km,
                                   int field, char** stats_json, char** series_csv) {
    return guard([&] {
        require(dt != nullptr && sc != nullptr && stats_json != nullptr, "null argument");
        require(field == 0 || field == 1, "field must be 0 (rsrp) or 1 (dl)");
        const cellplan::MeasuredField mf =
            field == 0 ? cellplan::MeasuredField::rsrp : cellplan::MeasuredField::dl;
        const cellplan::BinnedSeries binned =
            cellplan::bin_by_distance(dt->log.samples, bin_width_km, mf);

        require(site_index >= 0 &&
                    static_cast<std::size_t>(site_index) < sc->sc.sites.size(),
                "site index out of range");
        const cellplan::Site& site = sc->sc.sites[static_cast<std::size_t>(site_index)];
        const double theta = cellplan::rad_from_deg(azimuth_deg);
        const double step_km = sc->sc.grid.resolution_m / 1000.0;
        const double reach_km = binned.centers_km.back() + bin_width_km + step_km;
        std::vector<double> dist_km, values;
        for (int k = 1; k * step_km <= reach_km; ++k) {
            const double r_km = k * step_km;
            const double x = site.x + 1000.0 * r_km * std::cos(theta);
            const double y = site.y + 1000.0 * r_km * std::sin(theta);
            dist_km.push_back(r_km);
            if (field == 0) {
                const cellplan::PointServer best = cellplan::best_server_at(sc->sc, x, y);
                values.push_back(best.received_dbm -
                                 cellplan::rsrp_offset_db(sc->sc.bandwidth_mhz));
            } else {
                values.push_back(cellplan::throughput_at(sc->sc, x, y, sc->sc.tdd));
            }
        }
        const cellplan::ComparisonStats stats = cellplan::compare(dist_km, values, binned);

        json j;
        j["mean_error_db"] = stats.mean_error;
        j["std_dev_db"] = stats.std_dev;
        j["rmse_db"] = stats.rmse;
        j["n"] = stats.n;
        j["field"] = field == 0 ? "rsrp_dbm" : "dl_mbps";
        *stats_json = dup_string(j.dump(2) + "\n");

        if (series_csv) {
            std::string csv = "distance_km,field,simulated,error\n";
            char buf[128];
            for (std::size_t i = 0; i < binned.centers_km.size(); ++i) {
                const double c = binned.centers_km[i];
                if (c < dist_km.front() || c > dist_km.back())
                    continue;
                // linear interpolation against the uniform simulated profile
                const double t = (c - dist_km.front()) / step_km;
                const std::size_t k0 =
                    std::min(static_cast<std::size_t>(t), dist_km.size() - 2);
                const double frac = t - static_cast<double>(k0);
                const double sim = values[k0] + frac * (values[k0 + 1] - values[k0]);
                std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", c,
                              binned.means[i], sim, binned.means[i] - sim);
                csv += buf;
            }
            *series_csv = dup_string(csv);
        }
    });
}

cp_status cp_sector_report_json(const cp_drivetest* dt, char** out) {
    return guard([&] {
        require(dt != nullptr && out != nullptr, "null argument");
        const cellplan::SectorReport rep = cellplan::sector_report(dt->log.samples);
        json rows = json::array();
        for (const cellplan::SectorReportRow& r : rep.rows) {
            json row;
            row["route"] = r.route;
            row["peak_dl_mbps"] = r.peak_dl_mbps;
            row["peak_ul_mbps"] = r.peak_ul_mbps;
            row["mean_dl_mbps"] = r.mean_dl_mbps;
            row["n"] = r.n;
            rows.push_back(row);
        }
        json j;
        j["routes"] = rows;
        j["global_peak_dl_mbps"] = rep.global_peak_dl_mbps;
        j["global_peak_ul_mbps"] = rep.global_peak_ul_mbps;
        j["warnings"] = rep.warnings;
        *out = dup_string(j.dump(2) + "\n");
    });
}

void cp_drivetest_free(cp_drivetest* dt) { delete dt; }

/* ---- run manifests ---- */

cp_status cp_manifest_create(cp_manifest** out) {
    return guard([&] {
        require(out != nullptr, "null argument");
        *out = new cp_manifest{};
    });
}

cp_status cp_manifest_set_context(cp_manifest* m, const char* scenario_hash, uint64_t seed,
                                  const char* command_line, const char* timestamp) {
    return guard([&] {
        require(m != nullptr, "null argument");
        m->scenario_hash = scenario_hash ? scenario_hash : "";
        m->seed = seed;
        m->command_line = command_line ? command_line : "";
        m->timestamp = timestamp ? timestamp : "";
    });
}

cp_status cp_manifest_add_output(cp_manifest* m, const char* filename, const char* content,
                                 size_t content_len) {
    return guard([&] {
        require(m != nullptr && filename != nullptr && content != nullptr, "null argument");
        m->outputs.emplace_back(
            filename, cellplan::hex64(cellplan::fnv1a64(std::string(content, content_len))));
    });
}

cp_status cp_manifest_json(const cp_manifest* m, char** out) {
    return guard([&] {
        require(m != nullptr && out != nullptr, "null argument");
        json outputs = json::array();
        for (const auto& [name, sum] : m->outputs) {
            json row;
            row["file"] = name;
            row["fnv1a64"] = sum;
            outputs.push_back(row);
        }
        json j;
        j["scenario_hash"] = m->scenario_hash;
        j["seed"] = m->seed;
        j["version"] = CELLPLAN_VERSION_STR;
        j["command_line"] = m->command_line;
        j["timestamp"] = m->timestamp;
        j["outputs"] = outputs;
        *out = dup_string(j.dump(2) + "\n");
    });
}

void cp_manifest_free(cp_manifest* m) { delete m; }

} // extern "C"
