#include "core/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "core/error.hpp"
#include "core/rng.hpp"

namespace cellplan {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // trim digits that add nothing, keeping exact round trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        double back = 0.0;
        std::from_chars(probe, probe + std::strlen(probe), back);
        if (back == v)
            return probe;
    }
    return buf;
}

double parse_num(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        raise(errc::parse, key + ": malformed number '" + raw + "'");
    return out;
}

long long parse_int(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        raise(errc::parse, key + ": malformed integer '" + raw + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        raise(errc::parse, key + ": malformed unsigned integer '" + raw + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    raise(errc::parse, key + ": expected true or false, got '" + raw + "'");
}

using KvMap = std::map<std::string, std::string>;

KvMap parse_kv_text(const std::string& text) {
    KvMap kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty())
            continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            raise(errc::parse, "line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        if (key.empty())
            raise(errc::parse, "line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key))
            raise(errc::parse, "duplicate key: " + key);
        kv[key] = val;
    }
    return kv;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix, KvMap& kv) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
            flatten_json(it.value(), key, kv);
        }
        return;
    }
    std::string val;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            const auto& e = j[i];
            if (!(e.is_number() || e.is_string()))
                raise(errc::parse, prefix + ": arrays may hold numbers or strings only");
            if (i)
                val += ",";
            val += e.is_string() ? e.get<std::string>() : e.dump();
        }
    } else if (j.is_string()) {
        val = j.get<std::string>();
    } else if (j.is_boolean()) {
        val = j.get<bool>() ? "true" : "false";
    } else if (j.is_number()) {
        val = j.dump();
    } else {
        raise(errc::parse, prefix + ": unsupported value type");
    }
    if (kv.count(prefix))
        raise(errc::parse, "duplicate key: " + prefix);
    kv[prefix] = val;
}

KvMap parse_config_text(const std::string& text) {
    const std::string lead = trim(text);
    if (!lead.empty() && lead[0] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const std::exception& e) {
            raise(errc::parse, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object())
            raise(errc::parse, "config JSON must be an object");
        KvMap kv;
        flatten_json(j, "", kv);
        return kv;
    }
    return parse_kv_text(text);
}

// Pulls typed values out of the flat key map, recording defaults for every
// absent key and tracking consumption so leftovers can be rejected.
struct ConfigReader {
    KvMap kv;
    std::set<std::string> used;
    LoadReport* rpt = nullptr;

    bool has(const std::string& k) const { return kv.count(k) != 0; }

    std::string raw(const std::string& k) {
        used.insert(k);
        return kv.at(k);
    }

    void note_default(const std::string& key, const std::string& val) {
        if (rpt)
            rpt->applied_defaults.push_back(key + " = " + val);
    }

    std::string str(const std::string& key, const std::string& def) {
        if (!has(key)) {
            note_default(key, def);
            return def;
        }
        return trim(raw(key));
    }

    double num(const std::string& key, double def) {
        if (!has(key)) {
            note_default(key, format_num(def));
            return def;
        }
        return parse_num(key, raw(key));
    }

    long long integer(const std::string& key, long long def) {
        if (!has(key)) {
            note_default(key, std::to_string(def));
            return def;
        }
        return parse_int(key, raw(key));
    }

    std::uint64_t u64(const std::string& key, std::uint64_t def) {
        if (!has(key)) {
            note_default(key, std::to_string(def));
            return def;
        }
        return parse_u64(key, raw(key));
    }

    bool boolean(const std::string& key, bool def) {
        if (!has(key)) {
            note_default(key, def ? "true" : "false");
            return def;
        }
        return parse_bool(key, raw(key));
    }

    void reject_unknown() const {
        std::string unknown;
        for (const auto& [k, v] : kv) {
            if (!used.count(k)) {
                if (!unknown.empty())
                    unknown += ", ";
                unknown += k;
            }
        }
        if (!unknown.empty())
            raise(errc::invalid_argument, "unknown key: " + unknown);
    }
};

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ','))
        out.push_back(parse_num(key, item));
    return out;
}

void check(bool ok, const std::string& msg) {
    if (!ok)
        raise(errc::invalid_argument, msg);
}

} // namespace

int GridSpec::pixels_per_side() const {
    return static_cast<int>(std::lround(extent_m / resolution_m));
}

std::vector<std::pair<double, double>> hex_layout(int n_sites, double spacing_m) {
    if (n_sites < 1)
        raise(errc::invalid_argument, "site count must be >= 1");
    if (!(spacing_m > 0.0))
        raise(errc::invalid_argument, "site spacing must be positive");
    const double e2x = 0.5 * spacing_m;
    const double e2y = 0.5 * std::sqrt(3.0) * spacing_m;
    auto axial = [&](long q, long r) {
        return std::make_pair(q * spacing_m + r * e2x, r * e2y);
    };
    std::vector<std::pair<double, double>> pos;
    pos.reserve(static_cast<std::size_t>(n_sites));
    pos.push_back(axial(0, 0));
    static const int dirs[6][2] = {{-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}};
    for (long ring = 1; pos.size() < static_cast<std::size_t>(n_sites); ++ring) {
        long q = ring, r = 0;
        for (const auto& dir : dirs) {
            for (long step = 0; step < ring && pos.size() < static_cast<std::size_t>(n_sites); ++step) {
                pos.push_back(axial(q, r));
                q += dir[0];
                r += dir[1];
            }
        }
    }
    return pos;
}

double mimo_tx_gain_db(const MimoConfig& mimo) {
    auto valid = [](int v) { return v == 2 || v == 4 || v == 8; };
    if (!valid(mimo.tx) || !valid(mimo.rx))
        raise(errc::invalid_argument, "mimo: antenna counts must be 2, 4, or 8");
    return db_from_linear(mimo.tx / 2.0);
}

Scenario load_scenario(const std::string& config_text, LoadReport* report) {
    ConfigReader cfg;
    cfg.kv = parse_config_text(config_text);
    cfg.rpt = report;

    Scenario sc;

    const long long n_sites = cfg.integer("sites", 1);
    check(n_sites >= 1, "sites: must be >= 1");
    sc.site_spacing_m = cfg.num("site.spacing", 2000.0);
    check(sc.site_spacing_m > 0.0, "site.spacing: must be positive");
    const double height = cfg.num("site.height", 35.0);
    check(height > 0.0, "site.height: must be positive");

    sc.frequency_mhz = cfg.num("frequency", 2625.0);
    check(sc.frequency_mhz > 0.0, "frequency: must be positive");
    sc.bandwidth_mhz = cfg.num("bandwidth", 10.0);
    check(sc.bandwidth_mhz >= 1.25 && sc.bandwidth_mhz <= 20.0,
          "bandwidth: must be within 1.25-20 MHz");

    sc.grid.origin_x = cfg.num("grid.origin_x", -5000.0);
    sc.grid.origin_y = cfg.num("grid.origin_y", -5000.0);
    sc.grid.extent_m = cfg.num("grid.extent", 10000.0);
    check(sc.grid.extent_m > 0.0, "grid.extent: must be positive");
    sc.grid.resolution_m = cfg.num("grid.resolution", 20.0);
    check(sc.grid.resolution_m > 0.0, "grid.resolution: must be positive");
    check(sc.grid.pixels_per_side() >= 1, "grid: resolution exceeds extent");

    const double tx_power = cfg.num("sector.tx_power", 43.0);
    const double ant_gain = cfg.num("sector.gain", 18.5);
    const double erp_bw = cfg.num("sector.erp_bw", 60.0);
    check(erp_bw > 0.0 && erp_bw <= 360.0, "sector.erp_bw: must be in (0, 360] degrees");
    const double erp_sll = cfg.num("sector.erp_sll", 20.0);
    check(erp_sll > 0.0, "sector.erp_sll: suppression must be positive dB");
    std::vector<double> azimuths{0.0, 120.0, 240.0};
    if (cfg.has("sector.azimuths")) {
        azimuths = parse_list("sector.azimuths", cfg.raw("sector.azimuths"));
        check(azimuths.size() == 3, "sector.azimuths: sectors: expected 3, got " +
                                        std::to_string(azimuths.size()));
    } else {
        cfg.note_default("sector.azimuths", "0,120,240");
    }

    const std::string pattern = cfg.str("sector.pattern", "erp");
    if (pattern == "erp")
        sc.pattern_source = PatternSource::erp;
    else if (pattern == "array")
        sc.pattern_source = PatternSource::array;
    else
        raise(errc::invalid_argument, "sector.pattern: expected erp or array, got '" + pattern + "'");
    sc.array_elements = static_cast<int>(cfg.integer("sector.elements", 320));
    check(sc.array_elements >= 2, "sector.elements: must be >= 2");
    sc.array_spread_deg = cfg.num("sector.spread_deg", 0.0);
    check(sc.array_spread_deg >= 0.0, "sector.spread_deg: must be non-negative");

    sc.mimo.tx = static_cast<int>(cfg.integer("mimo.tx", 2));
    sc.mimo.rx = static_cast<int>(cfg.integer("mimo.rx", 2));
    mimo_tx_gain_db(sc.mimo); // validates the counts
    sc.mimo.adaptive = cfg.boolean("mimo.adaptive", true);

    const std::string kind = cfg.str("propagation.kind", "cost231_hata");
    if (kind == "cost231_hata")
        sc.propagation.kind = PathlossKind::cost231_hata;
    else if (kind == "free_space")
        sc.propagation.kind = PathlossKind::free_space;
    else
        raise(errc::invalid_argument,
              "propagation.kind: expected cost231_hata or free_space, got '" + kind + "'");
    const std::string env = cfg.str("propagation.environment", "urban_metro");
    if (env == "urban_metro")
        sc.propagation.environment = Environment::urban_metro;
    else if (env == "urban_medium")
        sc.propagation.environment = Environment::urban_medium;
    else
        raise(errc::invalid_argument,
              "propagation.environment: expected urban_metro or urban_medium, got '" + env + "'");
    sc.propagation.calibration_offset_db = cfg.num("propagation.offset_db", 0.0);

    sc.receiver.sensitivity_dbm = cfg.num("receiver.sensitivity", -110.0);
    sc.receiver.detectable_dbm = cfg.num("receiver.detectable", -133.0);
    check(sc.receiver.detectable_dbm <= sc.receiver.sensitivity_dbm,
          "receiver.detectable: must not exceed receiver.sensitivity");
    sc.receiver.height_m = cfg.num("receiver.height", 0.5);
    check(sc.receiver.height_m >= 0.0, "receiver.height: must be non-negative");
    sc.receiver.gain_dbi = cfg.num("receiver.gain", 0.0);
    sc.receiver.noise_figure_db = cfg.num("receiver.noise_figure", 7.0);
    check(sc.receiver.noise_figure_db >= 0.0, "receiver.noise_figure: must be non-negative");

    if (sc.propagation.kind == PathlossKind::cost231_hata) {
        check(height >= 4.0 && height <= 50.0,
              "site.height: cost231_hata needs base height within 4-50 m");
        check(sc.receiver.height_m <= 10.0,
              "receiver.height: cost231_hata caps mobile height at 10 m");
        if (report && mobile_height_clamped(sc.propagation, sc.receiver.height_m))
            report->warnings.push_back(
                "receiver.height " + format_num(sc.receiver.height_m) +
                " m is below the 1 m cost231_hata floor; clamped to 1 m in pathloss evaluation");
    }

    sc.reuse.channels = static_cast<int>(cfg.integer("reuse.channels", 1));
    sc.reuse.sectors = static_cast<int>(cfg.integer("reuse.sectors", 3));
    sc.reuse.segments = static_cast<int>(cfg.integer("reuse.segments", 3));
    check(sc.reuse.channels >= 1 && sc.reuse.sectors >= 1 && sc.reuse.segments >= 1,
          "reuse: all factors must be >= 1");

    sc.tdd.dl_symbols = static_cast<int>(cfg.integer("tdd.dl", 35));
    sc.tdd.ul_symbols = static_cast<int>(cfg.integer("tdd.ul", 12));
    check(sc.tdd.dl_symbols >= 1, "tdd.dl: must be >= 1");
    check(sc.tdd.ul_symbols >= 0, "tdd.ul: must be >= 0");
    check(sc.tdd.dl_symbols + sc.tdd.ul_symbols == 47, "tdd: dl + ul must equal 47 symbols");
    check(sc.tdd.ul_symbols % 3 == 0, "tdd.ul: must be divisible by 3");

    sc.capacity.data_fraction = cfg.num("capacity.data_fraction", 0.75);
    check(sc.capacity.data_fraction > 0.0 && sc.capacity.data_fraction <= 1.0,
          "capacity.data_fraction: must be in (0, 1]");
    sc.capacity.peak_rate_mbps = cfg.num("capacity.peak_rate", 75.0);
    check(sc.capacity.peak_rate_mbps > 0.0, "capacity.peak_rate: must be positive");
    sc.capacity.mimo_switch_db = cfg.num("capacity.mimo_switch", 10.0);
    const std::string tdd_mode = cfg.str("capacity.tdd_mode", "lenient");
    if (tdd_mode == "strict")
        sc.capacity.strict_tdd = true;
    else if (tdd_mode == "lenient")
        sc.capacity.strict_tdd = false;
    else
        raise(errc::invalid_argument,
              "capacity.tdd_mode: expected strict or lenient, got '" + tdd_mode + "'");

    sc.line_efficiency = cfg.num("line_efficiency", 1.0);
    check(sc.line_efficiency > 0.0 && sc.line_efficiency <= 1.0,
          "line_efficiency: must be in (0, 1]");
    sc.seed = cfg.u64("seed", 1);

    cfg.reject_unknown();

    // Materialize the layout.
    const auto positions = hex_layout(static_cast<int>(n_sites), sc.site_spacing_m);
    sc.sites.reserve(positions.size());
    for (const auto& [x, y] : positions) {
        Site site;
        site.x = x;
        site.y = y;
        site.height_m = height;
        for (int s = 0; s < 3; ++s) {
            Sector sec;
            sec.azimuth_deg = azimuths[static_cast<std::size_t>(s)];
            sec.pusc_segment = s;
            sec.tx_power_dbm = tx_power;
            sec.antenna_gain_dbi = ant_gain;
            sec.erp.bw_rad = rad_from_deg(erp_bw);
            sec.erp.sll_db = erp_sll;
            sec.erp.pointing_rad = rad_from_deg(sec.azimuth_deg);
            site.sectors.push_back(sec);
        }
        sc.sites.push_back(std::move(site));
    }

    if (sc.pattern_source == PatternSource::array) {
        ArraySpec arr;
        arr.n_elements = sc.array_elements;
        arr.n_samples = 2048;
        const double sigma = rad_from_deg(sc.array_spread_deg);
        if (sigma > 0.0) {
            const int needed = static_cast<int>(std::ceil(8.0 * kPi / sigma));
            if (needed > arr.n_samples) {
                arr.n_samples = needed;
                if (report)
                    report->warnings.push_back(
                        "sector.spread_deg: pattern sample count raised to " +
                        std::to_string(needed) + " to resolve the spread");
            }
        }
        SampledPattern ideal = make_ideal_pattern(arr);
        if (sigma > 0.0) {
            PasSpec pas;
            pas.sigma_rad = sigma;
            sc.array_pattern = spread_pattern(ideal, pas);
        } else {
            sc.array_pattern = std::move(ideal);
        }
    }

    return sc;
}

std::string scenario_to_config(const Scenario& sc) {
    std::string azimuths;
    if (!sc.sites.empty()) {
        for (std::size_t s = 0; s < sc.sites.front().sectors.size(); ++s) {
            if (s)
                azimuths += ",";
            azimuths += format_num(sc.sites.front().sectors[s].azimuth_deg);
        }
    } else {
        azimuths = "0,120,240";
    }
    const Site& site0 = sc.sites.front();
    const Sector& sec0 = site0.sectors.front();
    std::ostringstream out;
    out << "sites = " << sc.sites.size() << "\n";
    out << "site.spacing = " << format_num(sc.site_spacing_m) << "\n";
    out << "site.height = " << format_num(site0.height_m) << "\n";
    out << "frequency = " << format_num(sc.frequency_mhz) << "\n";
    out << "bandwidth = " << format_num(sc.bandwidth_mhz) << "\n";
    out << "grid.origin_x = " << format_num(sc.grid.origin_x) << "\n";
    out << "grid.origin_y = " << format_num(sc.grid.origin_y) << "\n";
    out << "grid.extent = " << format_num(sc.grid.extent_m) << "\n";
    out << "grid.resolution = " << format_num(sc.grid.resolution_m) << "\n";
    out << "sector.tx_power = " << format_num(sec0.tx_power_dbm) << "\n";
    out << "sector.gain = " << format_num(sec0.antenna_gain_dbi) << "\n";
    out << "sector.erp_bw = " << format_num(deg_from_rad(sec0.erp.bw_rad)) << "\n";
    out << "sector.erp_sll = " << format_num(sec0.erp.sll_db) << "\n";
    out << "sector.azimuths = " << azimuths << "\n";
    out << "sector.pattern = " << (sc.pattern_source == PatternSource::erp ? "erp" : "array")
        << "\n";
    out << "sector.elements = " << sc.array_elements << "\n";
    out << "sector.spread_deg = " << format_num(sc.array_spread_deg) << "\n";
    out << "mimo.tx = " << sc.mimo.tx << "\n";
    out << "mimo.rx = " << sc.mimo.rx << "\n";
    out << "mimo.adaptive = " << (sc.mimo.adaptive ? "true" : "false") << "\n";
    out << "propagation.kind = "
        << (sc.propagation.kind == PathlossKind::cost231_hata ? "cost231_hata" : "free_space")
        << "\n";
    out << "propagation.environment = "
        << (sc.propagation.environment == Environment::urban_metro ? "urban_metro"
                                                                   : "urban_medium")
        << "\n";
    out << "propagation.offset_db = " << format_num(sc.propagation.calibration_offset_db) << "\n";
    out << "receiver.sensitivity = " << format_num(sc.receiver.sensitivity_dbm) << "\n";
    out << "receiver.detectable = " << format_num(sc.receiver.detectable_dbm) << "\n";
    out << "receiver.height = " << format_num(sc.receiver.height_m) << "\n";
    out << "receiver.gain = " << format_num(sc.receiver.gain_dbi) << "\n";
    out << "receiver.noise_figure = " << format_num(sc.receiver.noise_figure_db) << "\n";
    out << "reuse.channels = " << sc.reuse.channels << "\n";
    out << "reuse.sectors = " << sc.reuse.sectors << "\n";
    out << "reuse.segments = " << sc.reuse.segments << "\n";
    out << "tdd.dl = " << sc.tdd.dl_symbols << "\n";
    out << "tdd.ul = " << sc.tdd.ul_symbols << "\n";
    out << "capacity.data_fraction = " << format_num(sc.capacity.data_fraction) << "\n";
    out << "capacity.peak_rate = " << format_num(sc.capacity.peak_rate_mbps) << "\n";
    out << "capacity.mimo_switch = " << format_num(sc.capacity.mimo_switch_db) << "\n";
    out << "capacity.tdd_mode = " << (sc.capacity.strict_tdd ? "strict" : "lenient") << "\n";
    out << "line_efficiency = " << format_num(sc.line_efficiency) << "\n";
    out << "seed = " << sc.seed << "\n";
    return out.str();
}

bool point_in_hex(double dx, double dy, double spacing_m) {
    const double half = 0.5 * spacing_m;
    const double ry = 0.5 * std::sqrt(3.0) * dy;
    if (std::abs(dx) > half)
        return false;
    if (std::abs(0.5 * dx + ry) > half)
        return false;
    if (std::abs(-0.5 * dx + ry) > half)
        return false;
    return true;
}

std::vector<UserPos> place_users(const Scenario& scenario, int per_site) {
    if (per_site < 1)
        raise(errc::invalid_argument, "per-site user count must be >= 1");
    const double d = scenario.site_spacing_m;
    const double half_w = 0.5 * d;
    const double half_h = d / std::sqrt(3.0);
    std::vector<UserPos> users;
    users.reserve(scenario.sites.size() * static_cast<std::size_t>(per_site));
    for (std::size_t s = 0; s < scenario.sites.size(); ++s) {
        SplitMix64 rng = site_stream(scenario.seed, s);
        int placed = 0;
        while (placed < per_site) {
            const double dx = (2.0 * rng.uniform() - 1.0) * half_w;
            const double dy = (2.0 * rng.uniform() - 1.0) * half_h;
            if (!point_in_hex(dx, dy, d))
                continue;
            users.push_back({static_cast<int>(s), scenario.sites[s].x + dx,
                             scenario.sites[s].y + dy});
            ++placed;
        }
    }
    return users;
}

double sector_gain_db(const Scenario& scenario, const Sector& sector, double bearing_rad) {
    double g;
    if (scenario.pattern_source == PatternSource::erp) {
        g = erp_gain(sector.erp, bearing_rad);
    } else {
        const double off = wrap_pi(bearing_rad - rad_from_deg(sector.azimuth_deg));
        g = sampled_gain(scenario.array_pattern, off);
    }
    // pattern nulls would be -inf dB; clamp keeps grids finite
    return std::max(db_from_linear(g), -400.0);
}

} // namespace cellplan
