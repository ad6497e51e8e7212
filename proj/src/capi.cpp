#include "qas.h"

#include <cstring>
#include <new>
#include <string>

#include "qas/driver.hpp"
#include "qas/magic.hpp"

namespace {

thread_local std::string g_last_error;

qas_status status_of(const qas::Error& e) {
    using qas::ErrorCode;
    switch (e.code()) {
    case ErrorCode::Config: return QAS_ERR_CONFIG;
    case ErrorCode::CircuitValidity: return QAS_ERR_CIRCUIT;
    case ErrorCode::Observable: return QAS_ERR_OBSERVABLE;
    case ErrorCode::Resource: return QAS_ERR_RESOURCE;
    case ErrorCode::Parse: return QAS_ERR_PARSE;
    case ErrorCode::Sampling: return QAS_ERR_SAMPLING;
    case ErrorCode::ActionApplication: return QAS_ERR_ACTION;
    case ErrorCode::Problem: return QAS_ERR_PROBLEM;
    case ErrorCode::DegenerateInstance: return QAS_ERR_DEGENERATE;
    case ErrorCode::Optimizer: return QAS_ERR_OPTIMIZER;
    case ErrorCode::Internal: return QAS_ERR_INTERNAL;
    case ErrorCode::Io: return QAS_ERR_IO;
    }
    return QAS_ERR_INTERNAL;
}

template <typename F> qas_status guarded(F&& f) {
    try {
        f();
        return QAS_OK;
    } catch (const qas::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QAS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return QAS_ERR_INTERNAL;
    }
}

qas_status invalid_argument(const char* what) {
    g_last_error = std::string("invalid argument: ") + what;
    return QAS_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

struct qas_circuit {
    qas::Circuit value;
};
struct qas_pauli_sum {
    qas::PauliSum value;
};
struct qas_config {
    qas::DriverConfig value;
};
struct qas_run_result {
    qas::SingleRunResult value;
};

extern "C" {

const char* qas_last_error(void) { return g_last_error.c_str(); }

const char* qas_version(void) { return "0.1.0"; }

void qas_string_free(char* s) { delete[] s; }

/* circuits ----------------------------------------------------------- */

qas_status qas_circuit_load(const char* path, qas_circuit** out) {
    if (!path || !out)
        return invalid_argument("qas_circuit_load");
    return guarded([&] { *out = new qas_circuit{qas::load_circuit_file(path)}; });
}

qas_status qas_circuit_from_text(const char* text, qas_circuit** out) {
    if (!text || !out)
        return invalid_argument("qas_circuit_from_text");
    return guarded([&] { *out = new qas_circuit{qas::parse_circuit(text)}; });
}

qas_status qas_circuit_save(const qas_circuit* c, const char* path) {
    if (!c || !path)
        return invalid_argument("qas_circuit_save");
    return guarded([&] { qas::save_circuit_file(c->value, path); });
}

qas_status qas_circuit_to_text(const qas_circuit* c, char** out_text) {
    if (!c || !out_text)
        return invalid_argument("qas_circuit_to_text");
    return guarded([&] { *out_text = copy_string(qas::serialize(c->value)); });
}

void qas_circuit_free(qas_circuit* c) { delete c; }

qas_status qas_circuit_counts(const qas_circuit* c, int* qubits, int* gates, int* cnots,
                              int* params, int* depth_out) {
    if (!c)
        return invalid_argument("qas_circuit_counts");
    return guarded([&] {
        const qas::CircuitMetrics m = qas::metrics(c->value);
        if (qubits)
            *qubits = c->value.n;
        if (gates)
            *gates = m.gate_count;
        if (cnots)
            *cnots = m.cnot_count;
        if (params)
            *params = m.param_count;
        if (depth_out)
            *depth_out = qas::depth(c->value);
    });
}

qas_status qas_circuit_m2(const qas_circuit* c, double* out) {
    if (!c || !out)
        return invalid_argument("qas_circuit_m2");
    return guarded([&] { *out = qas::m2_entropy(qas::apply_circuit(c->value)); });
}

/* hamiltonians -------------------------------------------------------- */

qas_status qas_pauli_sum_load(const char* path, qas_pauli_sum** out) {
    if (!path || !out)
        return invalid_argument("qas_pauli_sum_load");
    return guarded([&] { *out = new qas_pauli_sum{qas::load_hamiltonian_file(path)}; });
}

qas_status qas_pauli_sum_from_text(const char* text, qas_pauli_sum** out) {
    if (!text || !out)
        return invalid_argument("qas_pauli_sum_from_text");
    return guarded([&] { *out = new qas_pauli_sum{qas::parse_hamiltonian(text)}; });
}

void qas_pauli_sum_free(qas_pauli_sum* h) { delete h; }

qas_status qas_pauli_sum_qubits(const qas_pauli_sum* h, int* out) {
    if (!h || !out)
        return invalid_argument("qas_pauli_sum_qubits");
    *out = h->value.qubit_count();
    return QAS_OK;
}

qas_status qas_ground_energy(const qas_pauli_sum* h, double* out) {
    if (!h || !out)
        return invalid_argument("qas_ground_energy");
    return guarded([&] { *out = qas::exact_ground_energy(h->value); });
}

/* configuration -------------------------------------------------------- */

qas_status qas_config_create(qas_config** out) {
    if (!out)
        return invalid_argument("qas_config_create");
    return guarded([&] { *out = new qas_config{}; });
}

qas_status qas_config_load(const char* path, qas_config** out) {
    if (!path || !out)
        return invalid_argument("qas_config_load");
    return guarded([&] { *out = new qas_config{qas::load_config_file(path)}; });
}

qas_status qas_config_set(qas_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value)
        return invalid_argument("qas_config_set");
    return guarded([&] { qas::apply_override(cfg->value, key, value); });
}

qas_status qas_config_to_text(const qas_config* cfg, char** out_text) {
    if (!cfg || !out_text)
        return invalid_argument("qas_config_to_text");
    return guarded([&] { *out_text = copy_string(qas::config_to_text(cfg->value)); });
}

void qas_config_free(qas_config* cfg) { delete cfg; }

/* drivers --------------------------------------------------------------- */

qas_status qas_run_experiment(const qas_config* cfg, const char* out_dir) {
    if (!cfg)
        return invalid_argument("qas_run_experiment");
    return guarded([&] {
        qas::DriverConfig local = cfg->value;
        if (out_dir)
            local.out = out_dir;
        qas::run_experiment(local);
    });
}

qas_status qas_generate_dataset(uint64_t seed, const char* out_dir) {
    if (!out_dir)
        return invalid_argument("qas_generate_dataset");
    return guarded([&] { qas::generate_dataset(seed, out_dir); });
}

qas_status qas_write_report(const char* results_dir, const char* out_dir) {
    if (!results_dir || !out_dir)
        return invalid_argument("qas_write_report");
    return guarded([&] { qas::write_report(results_dir, out_dir); });
}

/* single runs ------------------------------------------------------------ */

qas_status qas_run_single(const qas_config* cfg, qas_run_result** out) {
    if (!cfg || !out)
        return invalid_argument("qas_run_single");
    return guarded([&] {
        const qas::DriverConfig& c = cfg->value;
        if (c.iterations.empty() || c.branching.empty())
            qas::raise(qas::ErrorCode::Config, "experiment axes must be non-empty");
        *out = new qas_run_result{
            qas::run_single(c, c.iterations.front(), c.branching.front(), c.seed, 0)};
    });
}

qas_status qas_run_result_final_cost(const qas_run_result* r, double* out) {
    if (!r || !out)
        return invalid_argument("qas_run_result_final_cost");
    *out = r->value.summary.final_cost;
    return QAS_OK;
}

qas_status qas_run_result_search_cost(const qas_run_result* r, double* out) {
    if (!r || !out)
        return invalid_argument("qas_run_result_search_cost");
    *out = r->value.summary.search_cost;
    return QAS_OK;
}

qas_status qas_run_result_validation_cost(const qas_run_result* r, double* out) {
    if (!r || !out)
        return invalid_argument("qas_run_result_validation_cost");
    *out = r->value.summary.validation_cost;
    return QAS_OK;
}

qas_status qas_run_result_eval_total(const qas_run_result* r, int64_t* out) {
    if (!r || !out)
        return invalid_argument("qas_run_result_eval_total");
    *out = r->value.summary.n_eval_total;
    return QAS_OK;
}

qas_status qas_run_result_circuit(const qas_run_result* r, qas_circuit** out) {
    if (!r || !out)
        return invalid_argument("qas_run_result_circuit");
    return guarded([&] { *out = new qas_circuit{r->value.final_circuit}; });
}

qas_status qas_run_result_record_json(const qas_run_result* r, char** out_text) {
    if (!r || !out_text)
        return invalid_argument("qas_run_result_record_json");
    return guarded([&] { *out_text = copy_string(r->value.record_json); });
}

void qas_run_result_free(qas_run_result* r) { delete r; }

} // extern "C"
