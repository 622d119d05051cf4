#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cellplan/cellplan.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

int exit_code_for(cp_status s) {
    switch (s) {
    case CP_OK:
        return 0;
    case CP_EINVAL:
    case CP_EDOMAIN:
    case CP_EPARSE:
        return 2;
    case CP_EIO:
    case CP_EDATA:
        return 3;
    default:
        return 1;
    }
}

[[noreturn]] void fail(cp_status s, const std::string& context) {
    std::fprintf(stderr, "cellplan: %s: %s\n", context.c_str(), cp_last_error());
    std::exit(exit_code_for(s));
}

void check(cp_status s, const std::string& context) {
    if (s != CP_OK)
        fail(s, context);
}

// Owns a string handed out by the library.
struct CStr {
    char* p = nullptr;
    ~CStr() { cp_string_free(p); }
    CStr() = default;
    CStr(const CStr&) = delete;
    CStr& operator=(const CStr&) = delete;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "cellplan: cannot open %s\n", path.c_str());
        std::exit(3);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string iso_utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm_utc{};
#if defined(_WIN32)
    gmtime_s(&tm_utc, &t);
#else
    gmtime_r(&t, &tm_utc);
#endif
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

// Collects output files and their checksums for the run manifest.
struct OutputDir {
    std::filesystem::path dir;
    cp_manifest* manifest = nullptr;

    explicit OutputDir(const std::string& path) : dir(path) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            std::fprintf(stderr, "cellplan: cannot create %s: %s\n", path.c_str(),
                         ec.message().c_str());
            std::exit(3);
        }
        check(cp_manifest_create(&manifest), "manifest");
    }
    ~OutputDir() { cp_manifest_free(manifest); }

    void write(const std::string& name, const char* content) {
        const std::filesystem::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out.write(content, static_cast<std::streamsize>(std::strlen(content)));
        if (!out) {
            std::fprintf(stderr, "cellplan: cannot write %s\n", p.string().c_str());
            std::exit(3);
        }
        check(cp_manifest_add_output(manifest, name.c_str(), content, std::strlen(content)),
              "manifest");
    }

    void finish(const std::string& scenario_hash, uint64_t seed,
                const std::string& command_line) {
        check(cp_manifest_set_context(manifest, scenario_hash.c_str(), seed,
                                      command_line.c_str(), iso_utc_now().c_str()),
              "manifest");
        CStr js;
        check(cp_manifest_json(manifest, &js.p), "manifest");
        const std::filesystem::path p = dir / "manifest.json";
        std::ofstream out(p, std::ios::binary);
        out.write(js.p, static_cast<std::streamsize>(std::strlen(js.p)));
        if (!out) {
            std::fprintf(stderr, "cellplan: cannot write %s\n", p.string().c_str());
            std::exit(3);
        }
    }
};

std::string join_args(int argc, char** argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i)
            line += " ";
        line += argv[i];
    }
    return line;
}

int resolve_threads(int flag_value) {
    if (flag_value > 0)
        return flag_value;
    if (const char* env = std::getenv("CELLPLAN_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return 1;
}

// 7.5 -> "7p5" so the value can sit in a filename.
std::string num_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s = buf;
    for (char& c : s)
        if (c == '.')
            c = 'p';
    return s;
}

bool parse_pair(const std::string& text, char sep, int& a, int& b) {
    const std::size_t pos = text.find(sep);
    if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size())
        return false;
    try {
        std::size_t used = 0;
        a = std::stoi(text.substr(0, pos), &used);
        if (used != pos)
            return false;
        const std::string rest = text.substr(pos + 1);
        b = std::stoi(rest, &used);
        return used == rest.size();
    } catch (...) {
        return false;
    }
}

cp_scenario* load_scenario_file(const std::string& path, uint64_t seed_override,
                                bool have_seed, OutputDir* out) {
    const std::string text = slurp(path);
    cp_scenario* sc = nullptr;
    CStr report;
    const cp_status s = cp_scenario_load(text.c_str(), &sc, &report.p);
    if (s != CP_OK)
        fail(s, path);
    if (out && report.p)
        out->write("load_report.json", report.p);
    if (have_seed)
        check(cp_scenario_set_seed(sc, seed_override), "seed");
    return sc;
}

struct ScenarioGuard {
    cp_scenario* sc = nullptr;
    ~ScenarioGuard() { cp_scenario_free(sc); }
};

/* ---- fit-pattern ---- */

struct FitPatternArgs {
    int elements = 320;
    int samples = 2048;
    double floor_db = -25.0;
    std::vector<double> spreads_deg;
    std::string out_dir = "out";
};

int run_fit_pattern(const FitPatternArgs& a, const std::string& cmdline) {
    OutputDir out(a.out_dir);

    cp_pattern* ideal = nullptr;
    check(cp_pattern_ideal(a.elements, a.samples, &ideal), "ideal pattern");
    {
        CStr csv;
        check(cp_pattern_csv(ideal, &csv.p), "pattern csv");
        out.write("pattern_ideal.csv", csv.p);
        cp_erp_fit fit{};
        check(cp_pattern_fit(ideal, a.floor_db, 180, 200, &fit), "pattern fit");
        CStr js;
        check(cp_pattern_fit_json(&fit, &js.p), "fit json");
        out.write("fit_ideal.json", js.p);
        std::printf("ideal: bw %.4f deg, suppression %.4f dB, residual %.6f\n",
                    fit.bw_rad * 180.0 / kPi, fit.sll_db, fit.residual);
    }
    cp_pattern_free(ideal);

    for (double sdeg : a.spreads_deg) {
        const double srad = sdeg * kPi / 180.0;
        if (srad <= 0.0) {
            std::fprintf(stderr, "cellplan: spread must be positive, got %g\n", sdeg);
            return 2;
        }
        int samples = a.samples;
        const int needed = static_cast<int>(std::ceil(8.0 * kPi / srad));
        if (needed > samples) {
            samples = needed;
            std::fprintf(stderr, "note: raised samples to %d for spread %g deg\n", samples,
                         sdeg);
        }
        cp_pattern* base = nullptr;
        check(cp_pattern_ideal(a.elements, samples, &base), "ideal pattern");
        cp_pattern* spread = nullptr;
        const cp_status s = cp_pattern_spread(base, srad, 0.0, &spread);
        cp_pattern_free(base);
        if (s != CP_OK)
            fail(s, "spread pattern");

        const std::string label = num_label(sdeg);
        CStr csv;
        check(cp_pattern_csv(spread, &csv.p), "pattern csv");
        out.write("pattern_sigma" + label + ".csv", csv.p);
        cp_erp_fit fit{};
        check(cp_pattern_fit(spread, a.floor_db, 180, 200, &fit), "pattern fit");
        cp_pattern_free(spread);
        CStr js;
        check(cp_pattern_fit_json(&fit, &js.p), "fit json");
        out.write("fit_sigma" + label + ".json", js.p);
        std::printf("sigma %g deg: bw %.4f deg, suppression %.4f dB, residual %.6f\n", sdeg,
                    fit.bw_rad * 180.0 / kPi, fit.sll_db, fit.residual);
    }

    out.finish("", 0, cmdline);
    return 0;
}

/* ---- coverage ---- */

struct CoverageArgs {
    std::string scenario;
    std::string out_dir = "out";
    int threads = 0;
    std::vector<std::string> mimo;
    bool fixed_mimo = false;
    double calibrate_km = 0.0;
    int site = 0;
    std::vector<double> azimuths{0.0};
    uint64_t seed = 0;
    bool have_seed = false;
};

int run_coverage(const CoverageArgs& a, const std::string& cmdline) {
    OutputDir out(a.out_dir);
    ScenarioGuard g;
    g.sc = load_scenario_file(a.scenario, a.seed, a.have_seed, &out);
    const int threads = resolve_threads(a.threads);

    if (a.calibrate_km > 0.0) {
        double offset = 0.0;
        check(cp_scenario_fit_calibration(g.sc, a.calibrate_km, &offset), "calibration");
        std::printf("calibration offset: %.6f dB\n", offset);
    }

    {
        CStr cfg;
        check(cp_scenario_to_config(g.sc, &cfg.p), "scenario");
        out.write("scenario.cfg", cfg.p);
    }

    int cur_tx = 0, cur_rx = 0, cur_adaptive = 0;
    check(cp_scenario_mimo(g.sc, &cur_tx, &cur_rx, &cur_adaptive), "scenario");
    if (a.fixed_mimo)
        cur_adaptive = 0;

    struct Pass {
        int tx, rx;
        std::string suffix; // "" or "_2x2"
    };
    std::vector<Pass> passes;
    if (a.mimo.empty()) {
        passes.push_back({cur_tx, cur_rx, ""});
        if (a.fixed_mimo)
            check(cp_scenario_set_mimo(g.sc, cur_tx, cur_rx, 0), "mimo");
    } else {
        for (const std::string& m : a.mimo) {
            int tx = 0, rx = 0;
            if (!parse_pair(m, 'x', tx, rx)) {
                std::fprintf(stderr, "cellplan: bad mimo '%s', expected TXxRX\n", m.c_str());
                return 2;
            }
            passes.push_back({tx, rx, "_" + m});
        }
    }

    std::string ranges;
    for (const Pass& p : passes) {
        if (!a.mimo.empty())
            check(cp_scenario_set_mimo(g.sc, p.tx, p.rx, cur_adaptive), "mimo");
        cp_coverage* cov = nullptr;
        check(cp_coverage_run(g.sc, threads, &cov), "coverage");
        CStr csv, pgm, hist;
        check(cp_coverage_rsrp_csv(cov, &csv.p), "rsrp csv");
        out.write("rsrp" + p.suffix + ".csv", csv.p);
        check(cp_coverage_rsrp_pgm(cov, &pgm.p), "rsrp pgm");
        out.write("rsrp" + p.suffix + ".pgm", pgm.p);
        check(cp_coverage_histogram_json(cov, &hist.p), "histogram");
        out.write("rsrp_histogram" + p.suffix + ".json", hist.p);

        for (double az : a.azimuths) {
            CStr rec;
            const cp_status s = cp_coverage_cell_range_json(cov, g.sc, a.site, az, &rec.p);
            if (s != CP_OK) {
                cp_coverage_free(cov);
                fail(s, "cell range");
            }
            std::string one = rec.p;
            while (!one.empty() && one.back() == '\n')
                one.pop_back();
            if (!ranges.empty())
                ranges += ",\n";
            ranges += one;
        }
        cp_coverage_free(cov);
    }
    out.write("cell_range.json", ("[\n" + ranges + "\n]\n").c_str());

    CStr hash;
    check(cp_scenario_hash(g.sc, &hash.p), "scenario");
    uint64_t seed = 0;
    check(cp_scenario_seed(g.sc, &seed), "scenario");
    out.finish(hash.p, seed, cmdline);
    return 0;
}

/* ---- capacity ---- */

struct CapacityArgs {
    std::string scenario;
    std::string out_dir = "out";
    int threads = 0;
    std::vector<std::string> splits;
    double anchor_dl = 28.51;
    std::string anchor_split = "26:21";
    int users = 0;
    uint64_t seed = 0;
    bool have_seed = false;
};

int run_capacity(const CapacityArgs& a, const std::string& cmdline) {
    OutputDir out(a.out_dir);
    ScenarioGuard g;
    g.sc = load_scenario_file(a.scenario, a.seed, a.have_seed, &out);
    const int threads = resolve_threads(a.threads);

    {
        CStr cfg;
        check(cp_scenario_to_config(g.sc, &cfg.p), "scenario");
        out.write("scenario.cfg", cfg.p);
    }

    int anchor_d = 0, anchor_u = 0;
    if (!parse_pair(a.anchor_split, ':', anchor_d, anchor_u) || anchor_d + anchor_u != 47) {
        std::fprintf(stderr, "cellplan: bad anchor split '%s', expected D:U summing to 47\n",
                     a.anchor_split.c_str());
        return 2;
    }
    double calibration = 0.0;
    check(cp_fit_calibration(a.anchor_dl, anchor_d, &calibration), "calibration");

    std::vector<std::pair<int, int>> splits;
    if (a.splits.empty()) {
        int d = 0, u = 0;
        check(cp_scenario_tdd(g.sc, &d, &u), "scenario");
        splits.emplace_back(d, u);
    } else {
        for (const std::string& s : a.splits) {
            int d = 0, u = 0;
            if (!parse_pair(s, ':', d, u)) {
                std::fprintf(stderr, "cellplan: bad split '%s', expected D:U\n", s.c_str());
                return 2;
            }
            splits.emplace_back(d, u);
        }
    }

    cp_coverage* cov = nullptr;
    check(cp_coverage_run(g.sc, threads, &cov), "coverage");

    bool wrote_sinr = false;
    for (const auto& [d, u] : splits) {
        cp_capacity* cap = nullptr;
        const cp_status s = cp_capacity_run(g.sc, cov, d, u, threads, &cap);
        if (s != CP_OK) {
            cp_coverage_free(cov);
            fail(s, "capacity");
        }
        if (!wrote_sinr) {
            CStr sinr;
            check(cp_capacity_sinr_csv(cap, &sinr.p), "sinr csv");
            out.write("sinr.csv", sinr.p);
            wrote_sinr = true;
        }
        const std::string tag = "_" + std::to_string(d) + "_" + std::to_string(u);
        CStr csv, pgm, hist, sectors, summary;
        check(cp_capacity_throughput_csv(cap, &csv.p), "throughput csv");
        out.write("throughput" + tag + ".csv", csv.p);
        check(cp_capacity_throughput_pgm(cap, &pgm.p), "throughput pgm");
        out.write("throughput" + tag + ".pgm", pgm.p);
        check(cp_capacity_histogram_json(cap, &hist.p), "histogram");
        out.write("throughput_histogram" + tag + ".json", hist.p);
        check(cp_capacity_sector_csv(cap, g.sc, cov, calibration, &sectors.p), "sector csv");
        out.write("sectors" + tag + ".csv", sectors.p);
        check(cp_capacity_summary_json(cap, g.sc, cov, calibration, a.users, &summary.p),
              "summary");
        out.write("summary" + tag + ".json", summary.p);
        cp_capacity_free(cap);
        std::printf("split %d:%d written\n", d, u);
    }
    cp_coverage_free(cov);

    CStr hash;
    check(cp_scenario_hash(g.sc, &hash.p), "scenario");
    uint64_t seed = 0;
    check(cp_scenario_seed(g.sc, &seed), "scenario");
    out.finish(hash.p, seed, cmdline);
    return 0;
}

/* ---- compare ---- */

struct CompareArgs {
    std::string scenario;
    std::string drive_test;
    std::string out_dir = "out";
    int site = 0;
    double azimuth = 0.0;
    double bin_km = 0.1;
    std::string field = "rsrp";
    uint64_t seed = 0;
    bool have_seed = false;
};

int run_compare(const CompareArgs& a, const std::string& cmdline) {
    OutputDir out(a.out_dir);
    ScenarioGuard g;
    g.sc = load_scenario_file(a.scenario, a.seed, a.have_seed, &out);

    double sx = 0.0, sy = 0.0;
    check(cp_scenario_site_position(g.sc, a.site, &sx, &sy), "site");

    const std::string csv_text = slurp(a.drive_test);
    cp_drivetest* dt = nullptr;
    CStr issues;
    const cp_status ps = cp_drivetest_parse(csv_text.c_str(), sx, sy, &dt, &issues.p);
    if (ps != CP_OK)
        fail(ps, a.drive_test);
    if (issues.p)
        out.write("parse_issues.json", issues.p);

    {
        CStr report;
        const cp_status s = cp_sector_report_json(dt, &report.p);
        if (s != CP_OK) {
            cp_drivetest_free(dt);
            fail(s, "sector report");
        }
        out.write("sector_report.json", report.p);
    }

    const int field = a.field == "rsrp" ? 0 : 1;
    CStr stats, series;
    const cp_status cs = cp_compare_to_simulation(dt, g.sc, a.site, a.azimuth, a.bin_km,
                                                  field, &stats.p, &series.p);
    if (cs != CP_OK) {
        cp_drivetest_free(dt);
        fail(cs, "compare");
    }
    out.write("stats.json", stats.p);
    out.write("series.csv", series.p);
    std::fputs(stats.p, stdout);
    cp_drivetest_free(dt);

    CStr hash;
    check(cp_scenario_hash(g.sc, &hash.p), "scenario");
    uint64_t seed = 0;
    check(cp_scenario_seed(g.sc, &seed), "scenario");
    out.finish(hash.p, seed, cmdline);
    return 0;
}

/* ---- splits ---- */

struct SplitsArgs {
    bool strict = false;
    std::string out_dir;
};

int run_splits(const SplitsArgs& a, const std::string& cmdline) {
    CStr js;
    check(cp_valid_splits_json(a.strict ? 1 : 0, &js.p), "splits");
    std::fputs(js.p, stdout);
    if (!a.out_dir.empty()) {
        OutputDir out(a.out_dir);
        out.write("splits.json", js.p);
        out.finish("", 0, cmdline);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic radio network planning tool"};
    app.set_version_flag("--version", cp_version_string());
    app.require_subcommand(1);
    const std::string cmdline = join_args(argc, argv);

    FitPatternArgs fit;
    CLI::App* fit_cmd =
        app.add_subcommand("fit-pattern", "fit rectangular beam models to array patterns");
    fit_cmd->add_option("--elements", fit.elements, "array element count")
        ->check(CLI::Range(2, 100000));
    fit_cmd->add_option("--samples", fit.samples, "pattern samples over the half circle")
        ->check(CLI::Range(16, 100000000));
    fit_cmd->add_option("--floor-db", fit.floor_db, "pattern floor in dB (negative)");
    fit_cmd->add_option("--spread-deg", fit.spreads_deg,
                        "angular spread sigma values in degrees");
    fit_cmd->add_option("--out-dir", fit.out_dir, "output directory");

    CoverageArgs cov;
    CLI::App* cov_cmd = app.add_subcommand("coverage", "best-server signal maps and ranges");
    cov_cmd->add_option("--scenario", cov.scenario, "scenario config file")->required();
    cov_cmd->add_option("--out-dir", cov.out_dir, "output directory");
    cov_cmd->add_option("--threads", cov.threads, "worker threads (default CELLPLAN_THREADS or 1)");
    cov_cmd->add_option("--mimo", cov.mimo, "antenna configs to sweep, e.g. 2x2 4x4 8x8");
    cov_cmd->add_flag("--fixed-mimo", cov.fixed_mimo, "disable adaptive fallback to 1 stream");
    cov_cmd->add_option("--calibrate-range", cov.calibrate_km,
                        "fit the pathloss offset so usable range hits this many km");
    cov_cmd->add_option("--site", cov.site, "site index for range reports");
    cov_cmd->add_option("--azimuth", cov.azimuths, "range walk azimuths in degrees");
    auto* cov_seed = cov_cmd->add_option("--seed", cov.seed, "override the scenario seed");

    CapacityArgs cap;
    CLI::App* cap_cmd = app.add_subcommand("capacity", "SINR and throughput maps");
    cap_cmd->add_option("--scenario", cap.scenario, "scenario config file")->required();
    cap_cmd->add_option("--out-dir", cap.out_dir, "output directory");
    cap_cmd->add_option("--threads", cap.threads, "worker threads (default CELLPLAN_THREADS or 1)");
    cap_cmd->add_option("--split", cap.splits, "TDD splits D:U to evaluate");
    cap_cmd->add_option("--anchor-dl", cap.anchor_dl,
                        "measured sector downlink rate at the anchor split, Mbps");
    cap_cmd->add_option("--anchor-split", cap.anchor_split, "anchor split, default 26:21");
    cap_cmd->add_option("--users", cap.users, "users per site for the mean-user summary")
        ->check(CLI::Range(0, 1000000));
    auto* cap_seed = cap_cmd->add_option("--seed", cap.seed, "override the scenario seed");

    CompareArgs cmp;
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "score a drive-test log against the simulation");
    cmp_cmd->add_option("--scenario", cmp.scenario, "scenario config file")->required();
    cmp_cmd->add_option("--drive-test", cmp.drive_test, "drive-test CSV file")->required();
    cmp_cmd->add_option("--out-dir", cmp.out_dir, "output directory");
    cmp_cmd->add_option("--site", cmp.site, "site index the route belongs to");
    cmp_cmd->add_option("--route-azimuth", cmp.azimuth, "radial route azimuth in degrees");
    cmp_cmd->add_option("--bin-km", cmp.bin_km, "distance bin width in km")
        ->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--field", cmp.field, "measured field to compare")
        ->check(CLI::IsMember({"rsrp", "dl"}));
    auto* cmp_seed = cmp_cmd->add_option("--seed", cmp.seed, "override the scenario seed");

    SplitsArgs spl;
    CLI::App* spl_cmd = app.add_subcommand("splits", "list the valid TDD splits");
    spl_cmd->add_flag("--strict", spl.strict, "require an odd downlink symbol count");
    spl_cmd->add_option("--out-dir", spl.out_dir, "also write splits.json here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    cov.have_seed = cov_seed->count() > 0;
    cap.have_seed = cap_seed->count() > 0;
    cmp.have_seed = cmp_seed->count() > 0;

    if (fit_cmd->parsed())
        return run_fit_pattern(fit, cmdline);
    if (cov_cmd->parsed())
        return run_coverage(cov, cmdline);
    if (cap_cmd->parsed())
        return run_capacity(cap, cmdline);
    if (cmp_cmd->parsed())
        return run_compare(cmp, cmdline);
    if (spl_cmd->parsed())
        return run_splits(spl, cmdline);
    return 2;
}
