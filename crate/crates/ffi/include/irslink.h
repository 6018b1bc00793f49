#ifndef IRSLINK_H
#define IRSLINK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum IrslinkStatus {
  IRSLINK_STATUS_OK = 0,
  IRSLINK_STATUS_INVALID_INPUT = 1,
  IRSLINK_STATUS_DEGENERATE_GEOMETRY = 2,
  IRSLINK_STATUS_CONFIG = 3,
  IRSLINK_STATUS_IO = 4,
  IRSLINK_STATUS_NULL_POINTER = 5,
  IRSLINK_STATUS_INVALID_UTF8 = 6,
  IRSLINK_STATUS_OUT_OF_RANGE = 7,
  IRSLINK_STATUS_PANIC = 8,
} IrslinkStatus;

typedef enum IrslinkFormat {
  IRSLINK_FORMAT_CSV = 0,
  IRSLINK_FORMAT_JSON = 1,
} IrslinkFormat;

// A parsed scenario and sweep, ready to run.
typedef struct IrslinkPlan IrslinkPlan;

// Output of [`irslink_plan_run`].
typedef struct IrslinkResults IrslinkResults;

// IRS panel description. Gains are linear, angles in degrees.
typedef struct IrslinkPanel {
  double element_length;
  double element_width;
  uint32_t tx_side_elements;
  uint32_t rx_side_elements;
  double reflection_coefficient;
  double tx_gain;
  double rx_gain;
  double theta_t;
  double theta_r;
} IrslinkPanel;

// SINR together with its inputs, all in watts except `sinr_db`.
typedef struct IrslinkLinkBudget {
  double rx_power;
  double interference;
  double noise;
  double sinr_linear;
  double sinr_db;
} IrslinkLinkBudget;

// One row of a sweep result.
typedef struct IrslinkRow {
  double x;
  double rx_power_dbm;
  double sinr_db;
  double sinr_db_stddev;
} IrslinkRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, or "" if none.
// The pointer stays valid until the next failing call on the same thread.
const char *irslink_last_error_message(void);

// Static, human readable name of a status code.
const char *irslink_status_name(enum IrslinkStatus status);

// Carrier wavelength in metres.
enum IrslinkStatus irslink_wavelength(double frequency_hz, double *out);

// Received power of the direct link in watts. `friis` selects the squared
// wavelength variant.
enum IrslinkStatus irslink_conventional_rx_power(double frequency_hz,
                                                 double tx_power_w,
                                                 double path_loss_exponent,
                                                 double distance_m,
                                                 double fading,
                                                 bool friis,
                                                 double *out);

// Received power through the IRS in watts, for leg lengths `r1` and `r2`.
enum IrslinkStatus irslink_irs_rx_power(const struct IrslinkPanel *panel,
                                        double frequency_hz,
                                        double tx_power_w,
                                        double r1,
                                        double r2,
                                        double *out);

// SINR from received power, aggregate interference and noise (watts).
enum IrslinkStatus irslink_sinr(double rx_power,
                                double interference,
                                double noise,
                                struct IrslinkLinkBudget *out);

// Number of built-in presets.
size_t irslink_preset_count(void);

// Name of preset `index`. The string is static.
const char *irslink_preset_name(size_t index);

// Loads a built-in preset.
enum IrslinkStatus irslink_plan_from_preset(const char *name, struct IrslinkPlan **out);

// Parses a scenario document (TOML text, not a path).
enum IrslinkStatus irslink_plan_from_config(const char *text, struct IrslinkPlan **out);

// Number of rows a run will produce.
enum IrslinkStatus irslink_plan_points(const struct IrslinkPlan *plan, size_t *out);

enum IrslinkStatus irslink_plan_set_seed(struct IrslinkPlan *plan, uint64_t seed);

enum IrslinkStatus irslink_plan_set_trials(struct IrslinkPlan *plan, uint64_t trials);

// Switches between deterministic (false) and Rayleigh (true) fading.
enum IrslinkStatus irslink_plan_set_rayleigh(struct IrslinkPlan *plan, bool rayleigh);

void irslink_plan_free(struct IrslinkPlan *plan);

// Runs the plan. `serial` disables the thread pool; results are identical
// either way.
enum IrslinkStatus irslink_plan_run(const struct IrslinkPlan *plan,
                                    bool serial,
                                    struct IrslinkResults **out);

// Number of curves (one per scenario label).
size_t irslink_results_count(const struct IrslinkResults *results);

// Label of curve `index`, owned by the results handle.
const char *irslink_results_label(const struct IrslinkResults *results, size_t index);

// Number of rows in curve `index`, 0 if out of range.
size_t irslink_results_row_count(const struct IrslinkResults *results, size_t index);

enum IrslinkStatus irslink_results_row(const struct IrslinkResults *results,
                                       size_t index,
                                       size_t row,
                                       struct IrslinkRow *out);

// Renders all curves as CSV or JSON, the same bytes the CLI writes.
// Release the string with [`irslink_string_free`].
enum IrslinkStatus irslink_results_render(const struct IrslinkResults *results,
                                          enum IrslinkFormat format,
                                          char **out);

void irslink_results_free(struct IrslinkResults *results);

void irslink_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IRSLINK_H */
