#ifndef CELLPLAN_H
#define CELLPLAN_H

/* C interface to the radio planning engine. All entry points return a
 * cp_status; on any failure cp_last_error() describes the problem for the
 * calling thread. Every object handed out by the library is released with
 * its matching _free function; strings with cp_string_free. Handles are
 * immutable once created unless a setter is documented, and distinct
 * handles may be used from different threads concurrently. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CP_API __declspec(dllexport)
#else
#define CP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cp_status {
    CP_OK = 0,
    CP_EINVAL = 1,  /* invalid argument or configuration */
    CP_EDOMAIN = 2, /* out of a model's mathematical domain */
    CP_EPARSE = 3,  /* malformed config or document */
    CP_EIO = 4,     /* file system failure */
    CP_EDATA = 5,   /* input data unusable (schema, empty, no overlap) */
    CP_EUNKNOWN = 6
} cp_status;

typedef struct cp_pattern cp_pattern;
typedef struct cp_scenario cp_scenario;
typedef struct cp_coverage cp_coverage;
typedef struct cp_capacity cp_capacity;
typedef struct cp_drivetest cp_drivetest;
typedef struct cp_manifest cp_manifest;

/* Message for the most recent failure on this thread; empty string if none. */
CP_API const char* cp_last_error(void);

CP_API const char* cp_version_string(void);

CP_API void cp_string_free(char* s);

/* ---- antenna patterns ---- */

typedef struct cp_erp_fit {
    double bw_rad;       /* effective beamwidth */
    double sll_db;       /* sidelobe suppression, positive dB */
    double pointing_rad; /* mainlobe center */
    double residual;     /* L1 cost of the fit */
} cp_erp_fit;

CP_API cp_status cp_pattern_ideal(int elements, int samples, cp_pattern** out);
/* Circular Laplacian spread; sigma below one sample step is an identity,
 * sigma under eight steps is rejected (raise the sample count). */
CP_API cp_status cp_pattern_spread(const cp_pattern* in, double sigma_rad,
                                   double mean_az_rad, cp_pattern** out);
CP_API cp_status cp_pattern_fit(const cp_pattern* in, double floor_db, int bw_steps,
                                int sll_steps, cp_erp_fit* out);
CP_API cp_status cp_pattern_csv(const cp_pattern* in, char** out);
CP_API cp_status cp_pattern_fit_json(const cp_erp_fit* fit, char** out);
CP_API void cp_pattern_free(cp_pattern* p);

/* ---- scenarios ---- */

/* Parses the dotted key-value or JSON scenario document. report_json
 * (optional) receives {"applied_defaults": [...], "warnings": [...]}. */
CP_API cp_status cp_scenario_load(const char* config_text, cp_scenario** out,
                                  char** report_json);
CP_API cp_status cp_scenario_to_config(const cp_scenario* sc, char** out);
/* FNV-1a of the canonical config rendering, as 16 hex digits. */
CP_API cp_status cp_scenario_hash(const cp_scenario* sc, char** out);
CP_API cp_status cp_scenario_seed(const cp_scenario* sc, uint64_t* out);
CP_API cp_status cp_scenario_set_seed(cp_scenario* sc, uint64_t seed);
CP_API cp_status cp_scenario_set_mimo(cp_scenario* sc, int tx, int rx, int adaptive);
CP_API cp_status cp_scenario_set_calibration_offset(cp_scenario* sc, double offset_db);
/* Fits the pathloss calibration offset that places the service-threshold
 * crossing at target_usable_km, applies it, and returns it. */
CP_API cp_status cp_scenario_fit_calibration(cp_scenario* sc, double target_usable_km,
                                             double* offset_db);
CP_API cp_status cp_scenario_site_count(const cp_scenario* sc, int* out);
CP_API cp_status cp_scenario_site_position(const cp_scenario* sc, int site_index,
                                           double* x, double* y);
CP_API cp_status cp_scenario_tdd(const cp_scenario* sc, int* dl, int* ul);
CP_API cp_status cp_scenario_mimo(const cp_scenario* sc, int* tx, int* rx, int* adaptive);
CP_API void cp_scenario_free(cp_scenario* sc);

/* ---- coverage ---- */

CP_API cp_status cp_coverage_run(const cp_scenario* sc, int threads, cp_coverage** out);
CP_API cp_status cp_coverage_rsrp_csv(const cp_coverage* cov, char** out);
CP_API cp_status cp_coverage_rsrp_pgm(const cp_coverage* cov, char** out);
/* Histogram over the preset coverage legend bins. */
CP_API cp_status cp_coverage_histogram_json(const cp_coverage* cov, char** out);
/* Fraction of pixels with RSRP at or above a threshold. */
CP_API cp_status cp_coverage_fraction_at_least(const cp_coverage* cov, double rsrp_dbm,
                                               double* out);
/* One cell-range record {azimuth_deg, usable_km, detectable_km,
 * grid_limited} walked from the given site. */
CP_API cp_status cp_coverage_cell_range_json(const cp_coverage* cov, const cp_scenario* sc,
                                             int site_index, double azimuth_deg, char** out);
CP_API void cp_coverage_free(cp_coverage* cov);

/* ---- capacity ---- */

/* Valid downlink:uplink splits of the 47 usable symbols. */
CP_API cp_status cp_valid_splits_json(int strict, char** out);
CP_API cp_status cp_split_is_valid(int dl, int ul, int strict, int* out);
CP_API cp_status cp_pusc_sinr(double reuse_k, double exponent, double radius, double* out);
CP_API cp_status cp_pusc_capacity(double sinr_linear, double* out);

/* SINR and downlink-throughput grids for one TDD split. */
CP_API cp_status cp_capacity_run(const cp_scenario* sc, const cp_coverage* cov, int dl,
                                 int ul, int threads, cp_capacity** out);
CP_API cp_status cp_capacity_sinr_csv(const cp_capacity* cap, char** out);
CP_API cp_status cp_capacity_throughput_csv(const cp_capacity* cap, char** out);
CP_API cp_status cp_capacity_throughput_pgm(const cp_capacity* cap, char** out);
CP_API cp_status cp_capacity_histogram_json(const cp_capacity* cap, char** out);
/* site,sector,dl_mbps,ul_mbps,avg_dl_mbps rows. */
CP_API cp_status cp_capacity_sector_csv(const cp_capacity* cap, const cp_scenario* sc,
                                        const cp_coverage* cov, double calibration,
                                        char** out);
/* Frame-model DL/UL rates plus grid statistics for the split. per_site_users
 * of 0 skips the user-sampled mean. */
CP_API cp_status cp_capacity_summary_json(const cp_capacity* cap, const cp_scenario* sc,
                                          const cp_coverage* cov, double calibration,
                                          int per_site_users, char** out);
/* Calibration constant hitting target_dl_mbps at an anchor split. */
CP_API cp_status cp_fit_calibration(double target_dl_mbps, int anchor_dl, double* out);
CP_API void cp_capacity_free(cp_capacity* cap);

/* ---- drive-test comparison ---- */

/* Parses the drive-test CSV; site position anchors x_m/y_m columns.
 * issues_json (optional) receives {"issues": [...], "warnings": [...]}. */
CP_API cp_status cp_drivetest_parse(const char* csv_text, double site_x, double site_y,
                                    cp_drivetest** out, char** issues_json);
CP_API cp_status cp_drivetest_sample_count(const cp_drivetest* dt, int* out);
/* Field selector: 0 = RSRP, 1 = downlink Mbps, 2 = uplink Mbps. */
CP_API cp_status cp_compare_to_simulation(const cp_drivetest* dt, const cp_scenario* sc,
                                          int site_index, double azimuth_deg,
                                          double bin_width_km, int field,
                                          char** stats_json, char** series_csv);
CP_API cp_status cp_sector_report_json(const cp_drivetest* dt, char** out);
CP_API void cp_drivetest_free(cp_drivetest* dt);

/* ---- run manifests ---- */

CP_API cp_status cp_manifest_create(cp_manifest** out);
CP_API cp_status cp_manifest_set_context(cp_manifest* m, const char* scenario_hash,
                                         uint64_t seed, const char* command_line,
                                         const char* timestamp);
/* Registers an output file and checksums its content. */
CP_API cp_status cp_manifest_add_output(cp_manifest* m, const char* filename,
                                        const char* content, size_t content_len);
CP_API cp_status cp_manifest_json(const cp_manifest* m, char** out);
CP_API void cp_manifest_free(cp_manifest* m);

#ifdef __cplusplus
}
#endif

#endif /* CELLPLAN_H */
