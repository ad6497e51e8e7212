#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "qas.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() /
               ("qas_capi_" + name + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

} // namespace

TEST_CASE("circuit handles: parse, inspect, serialize, errors") {
    qas_circuit* c = nullptr;
    REQUIRE(qas_circuit_from_text("qubits 2\nh 0\ncx 0 1\nrx 1 0.25\n", &c) == QAS_OK);

    int qubits = 0, gates = 0, cnots = 0, params = 0, d = 0;
    CHECK(qas_circuit_counts(c, &qubits, &gates, &cnots, &params, &d) == QAS_OK);
    CHECK(qubits == 2);
    CHECK(gates == 3);
    CHECK(cnots == 1);
    CHECK(params == 1);
    CHECK(d == 3);

    char* text = nullptr;
    REQUIRE(qas_circuit_to_text(c, &text) == QAS_OK);
    CHECK(std::strstr(text, "qubits 2") != nullptr);
    qas_string_free(text);
    qas_circuit_free(c);

    qas_circuit* bad = nullptr;
    CHECK(qas_circuit_from_text("qubits 1\nh 7\n", &bad) == QAS_ERR_PARSE);
    CHECK(std::strlen(qas_last_error()) > 0);
    CHECK(qas_circuit_load("/definitely/not/here.qc", &bad) == QAS_ERR_IO);
    CHECK(qas_circuit_from_text(nullptr, &bad) == QAS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("m2 and ground energy through the C surface") {
    qas_circuit* c = nullptr;
    REQUIRE(qas_circuit_from_text("qubits 1\nh 0\nt 0\n", &c) == QAS_OK);
    double m2 = -1.0;
    CHECK(qas_circuit_m2(c, &m2) == QAS_OK);
    CHECK(m2 == doctest::Approx(0.415037).epsilon(1e-5));
    qas_circuit_free(c);

    qas_pauli_sum* h = nullptr;
    REQUIRE(qas_pauli_sum_from_text("1.0 ZZ\n", &h) == QAS_OK);
    int n = 0;
    CHECK(qas_pauli_sum_qubits(h, &n) == QAS_OK);
    CHECK(n == 2);
    double energy = 0.0;
    CHECK(qas_ground_energy(h, &energy) == QAS_OK);
    CHECK(energy == doctest::Approx(-1.0));
    qas_pauli_sum_free(h);

    CHECK(qas_pauli_sum_from_text("1.0 ZZ\n2.0 XYZ\n", &h) == QAS_ERR_PARSE);
}

TEST_CASE("config handles accept file input and overrides") {
    TempDir dir("config");
    write_file(dir.path / "exp.cfg", "problem = vqls\niterations = 25\nruns = 1\n");

    qas_config* cfg = nullptr;
    REQUIRE(qas_config_load((dir.path / "exp.cfg").string().c_str(), &cfg) == QAS_OK);
    CHECK(qas_config_set(cfg, "seed", "11") == QAS_OK);
    CHECK(qas_config_set(cfg, "not_a_key", "1") == QAS_ERR_CONFIG);

    char* text = nullptr;
    REQUIRE(qas_config_to_text(cfg, &text) == QAS_OK);
    CHECK(std::strstr(text, "problem = vqls") != nullptr);
    CHECK(std::strstr(text, "seed = 11") != nullptr);
    qas_string_free(text);
    qas_config_free(cfg);
}

TEST_CASE("single runs and experiments run end to end over the C API") {
    TempDir dir("run");
    qas_config* cfg = nullptr;
    REQUIRE(qas_config_create(&cfg) == QAS_OK);
    REQUIRE(qas_config_set(cfg, "problem", "vqls") == QAS_OK);
    REQUIRE(qas_config_set(cfg, "iterations", "40") == QAS_OK);
    REQUIRE(qas_config_set(cfg, "runs", "1") == QAS_OK);
    REQUIRE(qas_config_set(cfg, "max_adam_steps", "5") == QAS_OK);
    REQUIRE(qas_config_set(cfg, "seed", "2") == QAS_OK);

    qas_run_result* result = nullptr;
    REQUIRE(qas_run_single(cfg, &result) == QAS_OK);
    double final_cost = -1.0, search_cost = -1.0, validation = -1.0;
    int64_t evals = 0;
    CHECK(qas_run_result_final_cost(result, &final_cost) == QAS_OK);
    CHECK(qas_run_result_search_cost(result, &search_cost) == QAS_OK);
    CHECK(qas_run_result_validation_cost(result, &validation) == QAS_OK);
    CHECK(qas_run_result_eval_total(result, &evals) == QAS_OK);
    CHECK(final_cost >= 0.0);
    CHECK(final_cost <= search_cost + 1e-12);
    CHECK(evals > 40);

    qas_circuit* designed = nullptr;
    REQUIRE(qas_run_result_circuit(result, &designed) == QAS_OK);
    int qubits = 0;
    CHECK(qas_circuit_counts(designed, &qubits, nullptr, nullptr, nullptr, nullptr) == QAS_OK);
    CHECK(qubits == 4);
    qas_circuit_free(designed);

    char* record = nullptr;
    REQUIRE(qas_run_result_record_json(result, &record) == QAS_OK);
    CHECK(std::strstr(record, "qas-run-v1") != nullptr);
    qas_string_free(record);
    qas_run_result_free(result);

    // full experiment through the driver entry point
    const std::string out_dir = (dir.path / "out").string();
    REQUIRE(qas_run_experiment(cfg, out_dir.c_str()) == QAS_OK);
    CHECK(fs::exists(dir.path / "out" / "summary.tsv"));

    const std::string report_dir = (dir.path / "rep").string();
    REQUIRE(qas_write_report(out_dir.c_str(), report_dir.c_str()) == QAS_OK);
    CHECK(fs::exists(dir.path / "rep" / "summary_table.tsv"));
    qas_config_free(cfg);
}

TEST_CASE("dataset generation over the C API") {
    TempDir dir("ds");
    const std::string out = (dir.path / "d").string();
    REQUIRE(qas_generate_dataset(5, out.c_str()) == QAS_OK);
    CHECK(fs::exists(dir.path / "d" / "manifest.tsv"));
    CHECK(qas_generate_dataset(5, nullptr) == QAS_ERR_INVALID_ARGUMENT);
}
