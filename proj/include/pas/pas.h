#ifndef PAS_PAS_H
#define PAS_PAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(PAS_BUILDING_LIBRARY)
#define PAS_API __attribute__((visibility("default")))
#else
#define PAS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the CLI uses them as exit codes. */
typedef enum pas_status {
    PAS_OK = 0,
    PAS_ERR_INTERNAL = 1,
    PAS_ERR_CONFIG = 2, /* config, size, domain, shape, range and bracket errors */
    PAS_ERR_BUDGET = 3,
    PAS_ERR_CONVERGENCE = 4
} pas_status;

/* Message of the last failing call on this thread, "" if none. */
PAS_API const char* pas_last_error(void);
/* Error category of the last failing call ("config", "budget", ...). */
PAS_API const char* pas_last_error_kind(void);
PAS_API const char* pas_version(void);
PAS_API void pas_string_free(char* s);

/* ASK constellation of order 2^(m+1). */
typedef struct pas_constellation pas_constellation;
PAS_API pas_status pas_constellation_create(int order, pas_constellation** out);
PAS_API void pas_constellation_free(pas_constellation* c);
PAS_API size_t pas_constellation_size(const pas_constellation* c);
PAS_API pas_status pas_constellation_points(const pas_constellation* c, int* points, size_t capacity);
/* BRGC label of point x: sign bit and amplitude bits with B1 most significant. */
PAS_API pas_status pas_brgc_label(const pas_constellation* c, int x, int* sign_bit, unsigned* amplitude_bits);

/* Discrete memoryless channel p(y|x). */
typedef struct pas_dmc pas_dmc;
/* Quantized AWGN; power_pmf over the points sets the SNR reference (NULL = uniform). */
PAS_API pas_status pas_dmc_awgn(const pas_constellation* c, double snr_db, int num_bins, double clip_sigmas,
                                const double* power_pmf, size_t pmf_len, pas_dmc** out);
/* w is nin x nout row-major; input_points may be NULL. */
PAS_API pas_status pas_dmc_create(size_t nin, size_t nout, const double* w, const double* input_points,
                                  pas_dmc** out);
PAS_API pas_status pas_dmc_from_json(const char* json, pas_dmc** out);
PAS_API pas_status pas_dmc_to_json(const pas_dmc* dmc, char** out);
PAS_API void pas_dmc_free(pas_dmc* dmc);
PAS_API size_t pas_dmc_nin(const pas_dmc* dmc);
PAS_API size_t pas_dmc_nout(const pas_dmc* dmc);
PAS_API double pas_dmc_prob(const pas_dmc* dmc, size_t x, size_t y);

/* Information measures in bits for an input pmf over the channel inputs. */
PAS_API pas_status pas_mutual_information(const double* pmf, size_t len, const pas_dmc* dmc, double* out);
/* R_BMD with BRGC labels; the channel must be driven by c. */
PAS_API pas_status pas_r_bmd(const pas_constellation* c, const double* pmf, size_t len, const pas_dmc* dmc,
                             double* out);

#define PAS_MAX_AMPLITUDES 64

typedef struct pas_air_point {
    double snr_db;
    double capacity;
    double h_a;
    double gamma;
    double mi_uniform;
    double r_bmd_star;
    double power;
    double scale;
    double sigma;
    int iterations;
    size_t num_amplitudes;
    double p_a_star[PAS_MAX_AMPLITUDES];
} pas_air_point;

PAS_API pas_status pas_optimize_capacity(const pas_constellation* c, double snr_db, int num_bins,
                                         double clip_sigmas, pas_air_point* out);

/* Sign-coding experiment built from a sim config (JSON). */
typedef struct pas_experiment pas_experiment;
PAS_API pas_status pas_experiment_create(const char* config_json, pas_experiment** out);
PAS_API pas_status pas_experiment_run(const pas_experiment* e, int threads, char** stats_json);
PAS_API void pas_experiment_free(pas_experiment* e);

/* Runs a CLI subcommand on a JSON config; *out receives the full output. */
PAS_API pas_status pas_command_run(const char* command, const char* config_json, int threads, char** out);
/* CSV header / row for a sim stats object (the "stats" member of sim output). */
PAS_API pas_status pas_sim_csv_header(char** out);
PAS_API pas_status pas_sim_csv_row(const char* stats_json, char** out);

#ifdef __cplusplus
}
#endif

#endif
