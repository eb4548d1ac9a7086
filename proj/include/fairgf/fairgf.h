/* fairgf — fairness-aware graph spectral filtering toolkit.
 *
 * C API for the shared library. All functions return FAIRGF_OK (0) on
 * success or an error code; fairgf_last_error() describes the most recent
 * failure on the calling thread. Objects returned through out-parameters
 * are owned by the caller and released with the matching _free function.
 */
#ifndef FAIRGF_H
#define FAIRGF_H

#include <stddef.h>

#if defined(_WIN32)
#define FAIRGF_API __declspec(dllexport)
#else
#define FAIRGF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  FAIRGF_OK = 0,
  FAIRGF_E_VALIDATION = 1, /* bad inputs, contract violations */
  FAIRGF_E_IO = 2,         /* file system failures */
  FAIRGF_E_INTERNAL = 3    /* numerical failures, unexpected conditions */
};

/* Opaque handles. */
typedef struct fairgf_dataset fairgf_dataset;
typedef struct fairgf_spectrum fairgf_spectrum;
typedef struct fairgf_filter fairgf_filter;

/* Message for the last failing call on this thread; never NULL. */
FAIRGF_API const char* fairgf_last_error(void);

/* Frees strings returned through char** out-parameters. */
FAIRGF_API void fairgf_string_free(char* s);

/* ---- datasets --------------------------------------------------------- */

/* Node CSV + edge list; column names locate id/sensitive/label. */
FAIRGF_API int fairgf_dataset_load(const char* node_csv, const char* edge_file,
                                   const char* id_column,
                                   const char* sensitive_column,
                                   const char* label_column,
                                   fairgf_dataset** out);

/* sbm_json holds the SbmConfig object, e.g.
 * {"group_neg":100,"group_pos":100,"p_intra":0.1,"p_inter":0.01,
 *  "label_flip":0.1,"feature_dim":8,"feature_noise":0.1,"seed":1}   */
FAIRGF_API int fairgf_dataset_generate_sbm(const char* sbm_json,
                                           fairgf_dataset** out);

FAIRGF_API int fairgf_dataset_save(const fairgf_dataset* d,
                                   const char* node_csv,
                                   const char* edge_file);

FAIRGF_API int fairgf_dataset_num_nodes(const fairgf_dataset* d);
FAIRGF_API int fairgf_dataset_num_features(const fairgf_dataset* d);

/* {"group_neg":..,"group_pos":..,"inter_edges":..,"intra_edges":..,
 *  "num_features":..}                                                   */
FAIRGF_API int fairgf_dataset_stats_json(const fairgf_dataset* d,
                                         char** json_out);

FAIRGF_API void fairgf_dataset_free(fairgf_dataset* d);

/* ---- spectrum --------------------------------------------------------- */

/* Eigendecomposition of the dataset graph's normalized Laplacian. */
FAIRGF_API int fairgf_spectrum_compute(const fairgf_dataset* d,
                                       fairgf_spectrum** out);

FAIRGF_API int fairgf_spectrum_size(const fairgf_spectrum* s);

/* Copies the ascending eigenvalues into out[0..len). len must equal size. */
FAIRGF_API int fairgf_spectrum_eigenvalues(const fairgf_spectrum* s,
                                           double* out, size_t len);

/* Writes `lambda,abs_s_tilde,abs_y_tilde` rows for the dataset's sensitive
 * and label signals. */
FAIRGF_API int fairgf_spectrum_profile_csv(const fairgf_spectrum* s,
                                           const fairgf_dataset* d,
                                           const char* csv_path);

FAIRGF_API void fairgf_spectrum_free(fairgf_spectrum* s);

/* ---- fair filter design ----------------------------------------------- */

/* Designs the fairness-aware filter for the dataset's sensitive signal at
 * threshold tau in (0,1]. */
FAIRGF_API int fairgf_filter_design(const fairgf_spectrum* s,
                                    const fairgf_dataset* d, double tau,
                                    fairgf_filter** out);

/* Copies the per-frequency gains into out[0..len). */
FAIRGF_API int fairgf_filter_gains(const fairgf_filter* f, double* out,
                                   size_t len);

/* Bias report {"tau","k","rho","rho_bound","m","cutoff"} plus a "variants"
 * object with rho/rho_bound for the identity, fair and uniform filters. */
FAIRGF_API int fairgf_filter_report_json(const fairgf_filter* f,
                                         char** json_out);

/* Writes the filtered feature matrix X^f as CSV (header feat_0..feat_{F-1}). */
FAIRGF_API int fairgf_filter_write_features(const fairgf_filter* f,
                                            const fairgf_spectrum* s,
                                            const fairgf_dataset* d,
                                            const char* csv_path);

FAIRGF_API void fairgf_filter_free(fairgf_filter* f);

/* ---- config-driven commands (the CLI surface) ------------------------- */

/* Each command reads a JSON config file, writes its outputs under out_dir
 * and, when summary_out is non-NULL, returns a human-readable summary.
 * seed_override >= 0 replaces every seed in the config. */

FAIRGF_API int fairgf_cmd_spectrum(const char* config_path,
                                   const char* out_dir,
                                   long long seed_override,
                                   char** summary_out);

/* tau > 0 selects the threshold; tau <= 0 takes the config's first
 * tau_grid entry. */
FAIRGF_API int fairgf_cmd_filter(const char* config_path, const char* out_dir,
                                 double tau, long long seed_override,
                                 char** summary_out);

FAIRGF_API int fairgf_cmd_experiment(const char* config_path,
                                     const char* out_dir,
                                     long long seed_override,
                                     char** summary_out);

FAIRGF_API int fairgf_cmd_generate(const char* config_path,
                                   const char* out_dir,
                                   long long seed_override,
                                   char** summary_out);

#ifdef __cplusplus
}
#endif

#endif /* FAIRGF_H */
