/* C interface to the gnnsim shared library.
 *
 * All functions return a gnnsim_status; on failure the thread-local
 * message from gnnsim_last_error() describes what went wrong. Objects are
 * opaque handles released with their matching _free function. Strings
 * returned through char** are owned by the caller and released with
 * gnnsim_string_free.
 */

#ifndef GNNSIM_H
#define GNNSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gnnsim_status {
    GNNSIM_OK = 0,
    GNNSIM_ERR_INVALID_ARGUMENT = 1, /* bad parameter or malformed input */
    GNNSIM_ERR_RUNTIME = 2,         /* I/O, parse, or state failure */
    GNNSIM_ERR_INTERNAL = 3,
} gnnsim_status;

typedef struct gnnsim_config gnnsim_config;
typedef struct gnnsim_dataset gnnsim_dataset;
typedef struct gnnsim_network gnnsim_network;

typedef struct gnnsim_epoch_stats {
    double mean_loss;
    double accuracy;
    uint64_t cycles;
} gnnsim_epoch_stats;

/* Last error message raised on this thread; empty string if none. */
const char* gnnsim_last_error(void);

void gnnsim_string_free(char* s);

/* --- run configuration ------------------------------------------------ */

gnnsim_status gnnsim_config_load(const char* path, gnnsim_config** out);
void gnnsim_config_free(gnnsim_config* cfg);

int gnnsim_config_epochs(const gnnsim_config* cfg);
int gnnsim_config_batch_size(const gnnsim_config* cfg);
int gnnsim_config_input_dim(const gnnsim_config* cfg);
int gnnsim_config_output_dim(const gnnsim_config* cfg);
int gnnsim_config_total_bits(const gnnsim_config* cfg);
int gnnsim_config_frac_bits(const gnnsim_config* cfg);
/* Paths are owned by the handle; valid until gnnsim_config_free. */
const char* gnnsim_config_dataset_path(const gnnsim_config* cfg);
const char* gnnsim_config_model_path(const gnnsim_config* cfg);
const char* gnnsim_config_metrics_path(const gnnsim_config* cfg);

/* --- datasets ----------------------------------------------------------- */

/* Label-first CSV, features quantized to the given fixed-point format. */
gnnsim_status gnnsim_dataset_load(const char* path, int feature_dim, int num_classes,
                                  int total_bits, int frac_bits, gnnsim_dataset** out);
void gnnsim_dataset_free(gnnsim_dataset* data);
int gnnsim_dataset_size(const gnnsim_dataset* data);

/* --- networks ----------------------------------------------------------- */

/* Fresh network with seed-derived weights from the config. */
gnnsim_status gnnsim_network_create(const gnnsim_config* cfg, gnnsim_network** out);
gnnsim_status gnnsim_network_load(const char* model_path, gnnsim_network** out);
gnnsim_status gnnsim_network_save(const gnnsim_network* net, const char* model_path);
void gnnsim_network_free(gnnsim_network* net);

int gnnsim_network_input_dim(const gnnsim_network* net);
int gnnsim_network_output_dim(const gnnsim_network* net);
int gnnsim_network_total_bits(const gnnsim_network* net);
int gnnsim_network_frac_bits(const gnnsim_network* net);

/* One epoch of mini-batch training. The handle tracks the epoch index:
 * the first epoch runs in dataset order, later epochs in a seed-derived
 * shuffle, so a full run is reproducible from (config, dataset) alone. */
gnnsim_status gnnsim_network_train_epoch(gnnsim_network* net, const gnnsim_dataset* data,
                                         int batch_size, gnnsim_epoch_stats* out);

/* Forward-only accuracy and mean loss. */
gnnsim_status gnnsim_network_evaluate(const gnnsim_network* net, const gnnsim_dataset* data,
                                      gnnsim_epoch_stats* out);

/* Labeled decimal dump of one sample's forward pass (S, M, z, yhat). */
gnnsim_status gnnsim_network_trace(const gnnsim_network* net, const gnnsim_dataset* data,
                                   int sample_index, char** out_text);

/* --- reports ------------------------------------------------------------ */

/* Cycle and resource report for the configured network; *fits is 1 when
 * the estimate is within the device budget. */
gnnsim_status gnnsim_estimate(const gnnsim_config* cfg, char** out_text, int* fits);

/* --- LUT dumps ---------------------------------------------------------- */

gnnsim_status gnnsim_lut_dump(const char* kind, int total_bits, int frac_bits, double x_min,
                              double x_max, int n, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* GNNSIM_H */
