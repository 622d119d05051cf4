#include "core/measurement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "core/error.hpp"

namespace cellplan {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(line);
    while (std::getline(in, item, ','))
        out.push_back(trim(item));
    if (!line.empty() && line.back() == ',')
        out.push_back("");
    return out;
}

bool parse_field(const std::string& raw, double& out) {
    const std::string v = trim(raw);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    return ec == std::errc() && ptr == v.data() + v.size();
}

int find_col(const std::vector<std::string>& header, const char* name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return static_cast<int>(i);
    return -1;
}

} // namespace

DriveTestLog parse_drive_test(const std::string& csv_text, double site_x, double site_y) {
    std::istringstream in(csv_text);
    std::string line;
    std::string header_line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            header_line = line;
            break;
        }
    }
    if (header_line.empty())
        raise(errc::data, "empty drive-test file");

    const std::vector<std::string> header = split_csv_line(header_line);
    DriveTestLog log;
    static const char* known[] = {"route",   "distance_km", "rsrp_dbm", "dl_mbps",
                                  "ul_mbps", "timestamp",   "x_m",      "y_m"};
    for (const std::string& col : header) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return col == k; }) == std::end(known))
            log.warnings.push_back("unknown column '" + col + "' ignored");
    }
    const int c_route = find_col(header, "route");
    const int c_dist = find_col(header, "distance_km");
    const int c_x = find_col(header, "x_m");
    const int c_y = find_col(header, "y_m");
    const int c_rsrp = find_col(header, "rsrp_dbm");
    const int c_dl = find_col(header, "dl_mbps");
    const int c_ul = find_col(header, "ul_mbps");
    const int c_ts = find_col(header, "timestamp");

    if (c_dist < 0 && (c_x < 0 || c_y < 0))
        raise(errc::data, "missing mandatory column: distance_km (or x_m and y_m)");
    if (c_rsrp < 0 && c_dl < 0 && c_ul < 0)
        raise(errc::data, "no measurement columns (rsrp_dbm, dl_mbps, ul_mbps)");

    int row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        ++row;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            log.issues.push_back({row, "", "expected " + std::to_string(header.size()) +
                                               " fields, got " + std::to_string(cells.size())});
            continue;
        }
        auto cell = [&](int c) { return c >= 0 ? cells[static_cast<std::size_t>(c)] : ""; };
        auto numeric = [&](int c, const char* name, std::optional<double>& out, bool& ok) {
            const std::string raw = cell(c);
            if (raw.empty())
                return;
            double v = 0.0;
            if (!parse_field(raw, v)) {
                log.issues.push_back({row, name, "malformed number '" + raw + "'"});
                ok = false;
                return;
            }
            out = v;
        };

        bool ok = true;
        DriveTestSample s;
        s.route = cell(c_route);
        s.timestamp = cell(c_ts);
        std::optional<double> dist, x, y;
        numeric(c_dist, "distance_km", dist, ok);
        numeric(c_x, "x_m", x, ok);
        numeric(c_y, "y_m", y, ok);
        numeric(c_rsrp, "rsrp_dbm", s.rsrp_dbm, ok);
        numeric(c_dl, "dl_mbps", s.dl_mbps, ok);
        numeric(c_ul, "ul_mbps", s.ul_mbps, ok);
        if (!ok)
            continue;

        if (dist) {
            s.distance_km = *dist;
        } else if (x && y) {
            s.distance_km = std::hypot(*x - site_x, *y - site_y) / 1000.0;
        } else {
            log.issues.push_back({row, "distance_km", "no distance and no position"});
            continue;
        }
        if (s.distance_km < 0.0) {
            log.issues.push_back({row, "distance_km", "negative distance"});
            continue;
        }
        if (!s.rsrp_dbm && !s.dl_mbps && !s.ul_mbps) {
            log.issues.push_back({row, "", "no measurement fields"});
            continue;
        }
        log.samples.push_back(std::move(s));
    }
    return log;
}

BinnedSeries bin_by_distance(const std::vector<DriveTestSample>& samples,
                             double bin_width_km, MeasuredField field) {
    if (!(bin_width_km > 0.0))
        raise(errc::invalid_argument, "bin width must be positive");
    std::map<long long, std::pair<double, std::int64_t>> bins;
    for (const DriveTestSample& s : samples) {
        const std::optional<double>* v = nullptr;
        switch (field) {
        case MeasuredField::rsrp:
            v = &s.rsrp_dbm;
            break;
        case MeasuredField::dl:
            v = &s.dl_mbps;
            break;
        case MeasuredField::ul:
            v = &s.ul_mbps;
            break;
        }
        if (!*v)
            continue;
        const long long idx = static_cast<long long>(std::floor(s.distance_km / bin_width_km));
        auto& [sum, count] = bins[idx];
        sum += **v;
        ++count;
    }
    if (bins.empty())
        raise(errc::data, "no samples carry the requested field");
    BinnedSeries out;
    for (const auto& [idx, acc] : bins) {
        out.centers_km.push_back((static_cast<double>(idx) + 0.5) * bin_width_km);
        out.means.push_back(acc.first / static_cast<double>(acc.second));
        out.counts.push_back(acc.second);
    }
    return out;
}

ComparisonStats compare(const std::vector<double>& sim_distances_km,
                        const std::vector<double>& sim_values, const BinnedSeries& field) {
    if (sim_distances_km.size() != sim_values.size() || sim_distances_km.size() < 2)
        raise(errc::invalid_argument, "simulated profile needs >= 2 aligned samples");
    for (std::size_t i = 1; i < sim_distances_km.size(); ++i)
        if (!(sim_distances_km[i] > sim_distances_km[i - 1]))
            raise(errc::invalid_argument, "simulated distances must be strictly increasing");

    std::vector<double> errors;
    errors.reserve(field.centers_km.size());
    for (std::size_t i = 0; i < field.centers_km.size(); ++i) {
        const double c = field.centers_km[i];
        if (c < sim_distances_km.front() || c > sim_distances_km.back())
            continue;
        const auto hi =
            std::upper_bound(sim_distances_km.begin(), sim_distances_km.end(), c);
        std::size_t k1 = static_cast<std::size_t>(hi - sim_distances_km.begin());
        if (k1 == sim_distances_km.size())
            --k1; // c equals the final distance
        const std::size_t k0 = k1 - 1;
        const double t =
            (c - sim_distances_km[k0]) / (sim_distances_km[k1] - sim_distances_km[k0]);
        const double sim = sim_values[k0] + t * (sim_values[k1] - sim_values[k0]);
        errors.push_back(field.means[i] - sim);
    }
    if (errors.empty())
        raise(errc::data, "no overlapping distance support");

    ComparisonStats st;
    st.n = static_cast<std::int64_t>(errors.size());
    double sum = 0.0, sq = 0.0;
    for (double e : errors) {
        sum += e;
        sq += e * e;
    }
    st.mean_error = sum / static_cast<double>(st.n);
    st.rmse = std::sqrt(sq / static_cast<double>(st.n));
    if (st.n > 1) {
        double var = 0.0;
        for (double e : errors)
            var += (e - st.mean_error) * (e - st.mean_error);
        st.std_dev = std::sqrt(var / static_cast<double>(st.n - 1));
    }
    return st;
}

SectorReport sector_report(const std::vector<DriveTestSample>& samples) {
    SectorReport report;
    std::vector<std::string> order;
    std::map<std::string, std::vector<const DriveTestSample*>> groups;
    for (const DriveTestSample& s : samples) {
        if (!groups.count(s.route))
            order.push_back(s.route);
        groups[s.route].push_back(&s);
    }
    for (const std::string& route : order) {
        SectorReportRow row;
        row.route = route;
        double dl_sum = 0.0;
        std::int64_t dl_n = 0;
        for (const DriveTestSample* s : groups[route]) {
            if (s->dl_mbps) {
                row.peak_dl_mbps = std::max(row.peak_dl_mbps, *s->dl_mbps);
                dl_sum += *s->dl_mbps;
                ++dl_n;
            }
            if (s->ul_mbps)
                row.peak_ul_mbps = std::max(row.peak_ul_mbps, *s->ul_mbps);
            if (s->dl_mbps || s->ul_mbps)
                ++row.n;
        }
        if (row.n == 0) {
            report.warnings.push_back("route '" + route + "' has no throughput data; omitted");
            continue;
        }
        if (dl_n > 0)
            row.mean_dl_mbps = dl_sum / static_cast<double>(dl_n);
        report.global_peak_dl_mbps = std::max(report.global_peak_dl_mbps, row.peak_dl_mbps);
        report.global_peak_ul_mbps = std::max(report.global_peak_ul_mbps, row.peak_ul_mbps);
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace cellplan
