#ifndef PIPECLIMBER_H
#define PIPECLIMBER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PcFrictionSign {
  PC_FRICTION_SIGN_PAPER = 0,
  PC_FRICTION_SIGN_PHYSICAL = 1,
} PcFrictionSign;

typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_NULL_ARGUMENT = 1,
  PC_STATUS_INVALID_UTF8 = 2,
  PC_STATUS_PARSE = 3,
  PC_STATUS_VALIDATION = 4,
  PC_STATUS_INFEASIBLE = 5,
  PC_STATUS_IO = 6,
  PC_STATUS_PANIC = 7,
} PcStatus;

// Parsed robot design.
typedef struct PcDesign PcDesign;

// Parsed pipe network.
typedef struct PcNetwork PcNetwork;

// Result of a traversal simulation.
typedef struct PcTrace PcTrace;

// Inputs for [`pc_design_report_json`].
typedef struct PcReportParams {
  // m/s².
  double gravity;
  // m/s².
  double accel;
  double rolling_coefficient;
  double safety_factor;
  enum PcFrictionSign friction_sign;
  // N·m.
  double motor_torque;
} PcReportParams;

// Inputs for [`pc_simulate`].
typedef struct PcSimConfig {
  // mm/s.
  double velocity;
  // s.
  double dt;
  // degrees.
  double roll;
  // m/s².
  double gravity;
  enum PcFrictionSign friction_sign;
} PcSimConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *pc_last_error_message(void);

// Writes the 1-based line and column of the last parse error on this thread.
// Returns false when the last error had no source position.
//
// # Safety
// `line` and `column` must be valid for writes.
bool pc_last_error_position(size_t *line, size_t *column);

// Library version as a static NUL-terminated string.
const char *pc_version(void);

// # Safety
// `s` must be NULL or a string returned by this library.
void pc_string_free(char *s);

// Parses `.pcn` text into a new network handle.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be valid for writes.
enum PcStatus pc_network_parse(const char *text, struct PcNetwork **out);

// # Safety
// `network` must be NULL or a handle from [`pc_network_parse`], freed once.
void pc_network_free(struct PcNetwork *network);

// Centerline length in mm.
//
// # Safety
// `network` must be a live handle; `out` must be valid for writes.
enum PcStatus pc_network_total_length(const struct PcNetwork *network, double *out);

// Canonical `.pcn` text of a network.
//
// # Safety
// `network` must be a live handle; `out` must be valid for writes.
enum PcStatus pc_network_emit(const struct PcNetwork *network, char **out);

// Parses `.pcr` text into a new design handle.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be valid for writes.
enum PcStatus pc_design_parse(const char *text, struct PcDesign **out);

// # Safety
// `design` must be NULL or a handle from [`pc_design_parse`], freed once.
void pc_design_free(struct PcDesign *design);

// Canonical `.pcr` text of a design.
//
// # Safety
// `design` must be a live handle; `out` must be valid for writes.
enum PcStatus pc_design_emit(const struct PcDesign *design, char **out);

// Spring stiffness (N/m) that holds the robot in a vertical pipe on static friction.
//
// # Safety
// `out` must be valid for writes.
enum PcStatus pc_required_stiffness(double mass_kg,
                                    double preload_m,
                                    double mu_static,
                                    double gravity,
                                    uint32_t n_modules,
                                    uint32_t springs_per_module,
                                    double *out);

// Robot minimum-diameter band (mm) for a bend of centerline radius `radius`.
//
// # Safety
// `lower` and `upper` must be valid for writes.
enum PcStatus pc_min_diameter_bounds(double radius,
                                     double diameter,
                                     double angle_deg,
                                     double *lower,
                                     double *upper);

// Longest body (mm) of minimum diameter `d` that fits through the bend.
//
// # Safety
// `out` must be valid for writes.
enum PcStatus pc_max_length(double radius, double diameter, double d, double *out);

struct PcReportParams pc_report_params_default(void);

// Design report as JSON. `params` may be NULL for defaults.
//
// # Safety
// `design` must be a live handle; `params` NULL or valid; `out` valid for writes.
enum PcStatus pc_design_report_json(const struct PcDesign *design,
                                    const struct PcReportParams *params,
                                    char **out);

struct PcSimConfig pc_sim_config_default(void);

// Runs a traversal. `config` may be NULL for defaults.
//
// # Safety
// `network` and `design` must be live handles; `config` NULL or valid;
// `out` valid for writes.
enum PcStatus pc_simulate(const struct PcNetwork *network,
                          const struct PcDesign *design,
                          const struct PcSimConfig *config,
                          struct PcTrace **out);

// # Safety
// `trace` must be NULL or a handle from [`pc_simulate`], freed once.
void pc_trace_free(struct PcTrace *trace);

// Number of time steps, or 0 for NULL.
//
// # Safety
// `trace` must be NULL or a live handle.
size_t pc_trace_row_count(const struct PcTrace *trace);

// Minimum slip margin over all steps and modules, N.
//
// # Safety
// `trace` must be a live handle; `out` valid for writes.
enum PcStatus pc_trace_min_slip_margin(const struct PcTrace *trace, double *out);

// Full trace as CSV text.
//
// # Safety
// `trace` must be a live handle; `out` valid for writes.
enum PcStatus pc_trace_csv(const struct PcTrace *trace, char **out);

// Writes the trace CSV to `path`.
//
// # Safety
// `trace` must be a live handle; `path` a NUL-terminated string.
enum PcStatus pc_trace_write_csv(const struct PcTrace *trace, const char *path);

// Traversal summary as JSON.
//
// # Safety
// `trace` must be a live handle; `out` valid for writes.
enum PcStatus pc_trace_summary_json(const struct PcTrace *trace, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PIPECLIMBER_H */
