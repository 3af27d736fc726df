/* C interface to the hybrid-domain NOMA simulator and allocator.
 *
 * Usage: create a simulation handle, apply flat key/value settings (the same
 * keys the CLI flags and config files use), then run an experiment. All
 * functions returning hdnoma_status report failures through the return code;
 * hdnoma_sim_last_error() describes the most recent failure on that handle.
 */
#ifndef HDNOMA_H
#define HDNOMA_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hdnoma_status {
  HDNOMA_OK = 0,
  HDNOMA_ERR_INVALID_ARGUMENT = 1, /* bad key, value, or call */
  HDNOMA_ERR_PARSE = 2,            /* config or codebook file did not parse */
  HDNOMA_ERR_INFEASIBLE = 3,       /* allocation problem has no feasible point */
  HDNOMA_ERR_BUDGET = 4,           /* enumeration budget exceeded */
  HDNOMA_ERR_IO = 5,               /* file could not be opened or written */
  HDNOMA_ERR_INTERNAL = 6
} hdnoma_status;

typedef struct hdnoma_sim hdnoma_sim;

const char* hdnoma_version(void);

hdnoma_sim* hdnoma_sim_create(void);
void hdnoma_sim_destroy(hdnoma_sim* sim);

/* Settings use the CLI flag names without leading dashes, e.g.
 * hdnoma_sim_set(sim, "scheme", "hd-noma") or ("power-dbm-min", "30"). */
hdnoma_status hdnoma_sim_set(hdnoma_sim* sim, const char* key, const char* value);

/* Flat key/value file, one pair per line; '#' starts a comment. */
hdnoma_status hdnoma_sim_load_config(hdnoma_sim* sim, const char* path);

/* experiment is "ber", "sumrate", or "converge". The CSV result is written to
 * out_path, or to the callback line by line (including the header) when
 * on_line is non-null and out_path is null. */
typedef void (*hdnoma_line_cb)(const char* line, void* user);
hdnoma_status hdnoma_sim_run(hdnoma_sim* sim, const char* experiment,
                             const char* out_path, hdnoma_line_cb on_line, void* user);

/* Message for the last failing call on this handle; empty string if none. */
const char* hdnoma_sim_last_error(const hdnoma_sim* sim);

/* Stateless helpers mirroring the channel model. Both return HDNOMA_OK or
 * HDNOMA_ERR_INVALID_ARGUMENT. */
hdnoma_status hdnoma_path_loss_db(double distance_km, double* out_db);
hdnoma_status hdnoma_noise_variance_w(double bandwidth_hz, int subcarriers,
                                      double* out_watts);

#ifdef __cplusplus
}
#endif

#endif /* HDNOMA_H */
