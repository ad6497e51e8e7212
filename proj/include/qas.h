/*
 * qas — quantum architecture search via progressive-widening MCTS.
 *
 * C interface to the shared library: opaque handles, integer status codes,
 * and a thread-local error message. All functions return QAS_OK (0) on
 * success; on failure they return a negative code and leave a description
 * retrievable through qas_last_error().
 */
#ifndef QAS_H
#define QAS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qas_status {
    QAS_OK = 0,
    QAS_ERR_CONFIG = -1,
    QAS_ERR_CIRCUIT = -2,
    QAS_ERR_OBSERVABLE = -3,
    QAS_ERR_RESOURCE = -4,
    QAS_ERR_PARSE = -5,
    QAS_ERR_SAMPLING = -6,
    QAS_ERR_ACTION = -7,
    QAS_ERR_PROBLEM = -8,
    QAS_ERR_DEGENERATE = -9,
    QAS_ERR_OPTIMIZER = -10,
    QAS_ERR_INTERNAL = -11,
    QAS_ERR_IO = -12,
    QAS_ERR_INVALID_ARGUMENT = -13
} qas_status;

/* Message describing the most recent failure on this thread. */
const char* qas_last_error(void);

const char* qas_version(void);

/* Frees strings returned through char** out-parameters. */
void qas_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Circuits                                                            */

typedef struct qas_circuit qas_circuit;

qas_status qas_circuit_load(const char* path, qas_circuit** out);
qas_status qas_circuit_from_text(const char* text, qas_circuit** out);
qas_status qas_circuit_save(const qas_circuit* c, const char* path);
qas_status qas_circuit_to_text(const qas_circuit* c, char** out_text);
void qas_circuit_free(qas_circuit* c);

/* Any out-parameter may be NULL when the caller does not need it. */
qas_status qas_circuit_counts(const qas_circuit* c, int* qubits, int* gates, int* cnots,
                              int* params, int* depth);

/* Stabilizer 2-Renyi entropy of the circuit's output state (<= 8 qubits). */
qas_status qas_circuit_m2(const qas_circuit* c, double* out);

/* ------------------------------------------------------------------ */
/* Hamiltonians                                                        */

typedef struct qas_pauli_sum qas_pauli_sum;

qas_status qas_pauli_sum_load(const char* path, qas_pauli_sum** out);
qas_status qas_pauli_sum_from_text(const char* text, qas_pauli_sum** out);
void qas_pauli_sum_free(qas_pauli_sum* h);
qas_status qas_pauli_sum_qubits(const qas_pauli_sum* h, int* out);

/* Minimum eigenvalue by dense diagonalization (<= 12 qubits). */
qas_status qas_ground_energy(const qas_pauli_sum* h, double* out);

/* ------------------------------------------------------------------ */
/* Experiment configuration                                            */

typedef struct qas_config qas_config;

qas_status qas_config_create(qas_config** out);
qas_status qas_config_load(const char* path, qas_config** out);
/* Same keys as the config file, e.g. qas_config_set(c, "iterations", "5000"). */
qas_status qas_config_set(qas_config* cfg, const char* key, const char* value);
qas_status qas_config_to_text(const qas_config* cfg, char** out_text);
void qas_config_free(qas_config* cfg);

/* ------------------------------------------------------------------ */
/* Drivers                                                             */

/* Runs the full experiment grid; one JSON record per run plus summary.tsv
 * under the configured output directory (overridden by out_dir if non-NULL). */
qas_status qas_run_experiment(const qas_config* cfg, const char* out_dir);

/* 30-circuit Clifford+T benchmark with M2 labels under out_dir. */
qas_status qas_generate_dataset(uint64_t seed, const char* out_dir);

/* Plot-ready TSV exports from a directory of run records. */
qas_status qas_write_report(const char* results_dir, const char* out_dir);

/* ------------------------------------------------------------------ */
/* Single runs (embedding)                                             */

typedef struct qas_run_result qas_run_result;

/* One seeded search + fine-tune using the first grid axis values. */
qas_status qas_run_single(const qas_config* cfg, qas_run_result** out);

qas_status qas_run_result_final_cost(const qas_run_result* r, double* out);
qas_status qas_run_result_search_cost(const qas_run_result* r, double* out);
qas_status qas_run_result_validation_cost(const qas_run_result* r, double* out);
qas_status qas_run_result_eval_total(const qas_run_result* r, int64_t* out);
qas_status qas_run_result_circuit(const qas_run_result* r, qas_circuit** out);
qas_status qas_run_result_record_json(const qas_run_result* r, char** out_text);
void qas_run_result_free(qas_run_result* r);

#ifdef __cplusplus
}
#endif

#endif /* QAS_H */
