#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cellplan {

struct DriveTestSample {
    std::string route;
    double distance_km = 0.0;
    std::optional<double> rsrp_dbm;
    std::optional<double> dl_mbps;
    std::optional<double> ul_mbps;
    std::string timestamp;
};

struct ParseIssue {
    int row = 0; // 1-based data row number (header excluded)
    std::string column;
    std::string message;
};

struct DriveTestLog {
    std::vector<DriveTestSample> samples;
    std::vector<ParseIssue> issues;       // malformed rows, excluded but reported
    std::vector<std::string> warnings;    // e.g. ignored columns
};

// Parses the drive-test CSV schema
// route,distance_km,rsrp_dbm,dl_mbps,ul_mbps,timestamp. Position columns
// x_m,y_m may replace distance_km; distance is then planar range from the
// declared site position. Unknown columns are ignored with a warning; bad
// rows land in issues rather than stopping the parse.
DriveTestLog parse_drive_test(const std::string& csv_text, double site_x = 0.0,
                              double site_y = 0.0);

enum class MeasuredField { rsrp, dl, ul };

struct BinnedSeries {
    std::vector<double> centers_km;
    std::vector<double> means;
    std::vector<std::int64_t> counts;
};

// Arithmetic mean per distance bin of one measured field, in the field's
// own unit (RSRP averages in dB). Empty bins are omitted.
BinnedSeries bin_by_distance(const std::vector<DriveTestSample>& samples,
                             double bin_width_km, MeasuredField field);

struct ComparisonStats {
    double mean_error = 0.0;
    double std_dev = 0.0; // sample standard deviation (n-1)
    double rmse = 0.0;
    std::int64_t n = 0;
};

// Field-minus-simulated errors at the field bin centers; the simulated
// profile is interpolated linearly between its sample distances. Centers
// outside the simulated support are skipped.
ComparisonStats compare(const std::vector<double>& sim_distances_km,
                        const std::vector<double>& sim_values,
                        const BinnedSeries& field);

struct SectorReportRow {
    std::string route;
    double peak_dl_mbps = 0.0;
    double peak_ul_mbps = 0.0;
    double mean_dl_mbps = 0.0;
    std::int64_t n = 0; // samples carrying throughput
};

struct SectorReport {
    std::vector<SectorReportRow> rows; // one per route, input order
    double global_peak_dl_mbps = 0.0;
    double global_peak_ul_mbps = 0.0;
    std::vector<std::string> warnings; // routes omitted for lack of data
};

SectorReport sector_report(const std::vector<DriveTestSample>& samples);

} // namespace cellplan
