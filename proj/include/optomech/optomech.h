/* C interface to the optomech solvers: configuration, scenario runs and a few
 * direct numeric entry points. Every function returns an om_status; on failure
 * om_last_error() holds a message for the calling thread. Angular frequencies
 * are rad/s, lengths m, intensities W/m^2. */

#ifndef OPTOMECH_H
#define OPTOMECH_H

#include <stddef.h>

#if defined(_WIN32)
#define OM_API __declspec(dllexport)
#else
#define OM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  OM_OK = 0,
  OM_ERR_INVALID_INPUT = 1,
  OM_ERR_CONFIG = 2,
  OM_ERR_NUMERICAL = 3,
  OM_ERR_IO = 4,
  OM_ERR_INTERNAL = 5
} om_status;

typedef struct om_config om_config;
typedef struct om_result om_result;

OM_API const char* om_version(void);
OM_API const char* om_status_name(om_status status);

/* Message of the last failure on this thread; "" after a success. */
OM_API const char* om_last_error(void);

/* Key listing with defaults, as printed by --help. */
OM_API const char* om_config_help(void);

/* Parses YAML or JSON text (NULL or "" gives all defaults) plus n_overrides
 * "key=value" strings. On OM_ERR_CONFIG *out is NULL, om_last_error() lists
 * every problem one per line and om_config_error_count() reports how many. */
OM_API om_status om_config_parse(const char* text, const char* const* overrides,
                                 size_t n_overrides, om_config** out);
OM_API size_t om_config_error_count(void);
OM_API om_status om_config_set(om_config* config, const char* key, const char* value);
/* Value of one key as text, NULL for an unknown key. Valid until the next call on this handle. */
OM_API const char* om_config_value(om_config* config, const char* key);
/* Config echo as JSON text, valid until the next call on this handle. */
OM_API const char* om_config_json(om_config* config);
OM_API void om_config_free(om_config* config);

OM_API om_status om_run(const om_config* config, om_result** out);
/* Writes <table>.csv for every table and meta.json into dir. */
OM_API om_status om_result_write(const om_result* result, const char* dir);
OM_API size_t om_result_table_count(const om_result* result);
OM_API const char* om_result_table_name(const om_result* result, size_t table);
OM_API size_t om_result_rows(const om_result* result, size_t table);
OM_API size_t om_result_columns(const om_result* result, size_t table);
OM_API const char* om_result_column_name(const om_result* result, size_t table, size_t column);
/* NaN for out-of-range indices. */
OM_API double om_result_value(const om_result* result, size_t table, size_t row, size_t column);
OM_API size_t om_result_warning_count(const om_result* result);
OM_API const char* om_result_warning(const om_result* result, size_t index);
OM_API void om_result_free(om_result* result);

/* Lowest n_modes natural-plus-trap frequencies in Hz of azimuthal index m for
 * a SiN disk under a plane-wave trap of intensity i0. apodized selects the
 * d0 (1 - r^2/a^2)^2 profile. */
OM_API om_status om_disk_frequencies(double radius, double thickness, int apodized, double i0,
                                     int m, int n_modes, double* frequencies_hz);

/* Thermoelastic Q f limit of a SiN film, Hz. */
OM_API om_status om_qf_limit(double thickness, double temperature, double energy_ratio,
                             double* qf_hz);

/* Tether spectrum below max_frequency_hz for a uniform SiN disk on a square
 * tether. Fills up to capacity frequencies and sets *count to the number found. */
OM_API om_status om_tether_frequencies(double disk_radius, double disk_thickness,
                                       double tether_length, double tether_width,
                                       double optical_frequency_hz, double max_frequency_hz,
                                       double* frequencies_hz, size_t capacity, size_t* count);

/* Waist of the empty symmetric two-mirror resonator. */
OM_API om_status om_empty_cavity_waist(double length, double mirror_roc, double wavelength,
                                       double* waist);

#ifdef __cplusplus
}
#endif

#endif
