#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qas/dataset.hpp"
#include "qas/finetune.hpp"
#include "qas/mcts.hpp"

namespace qas {

// Everything a batch of runs needs: problem selection, the Table-1 knobs,
// grid axes, and output location. One key-value text file mirrors this
// struct one-to-one; every key can be overridden from the command line.
struct DriverConfig {
    // problem selection
    std::string problem;            // "vqe" | "vqls" | "oracle"
    std::string hamiltonian;        // vqe: Hamiltonian file
    std::string target;             // oracle: single target circuit file
    std::string dataset;            // oracle: manifest of targets (grid mode)
    std::optional<double> epsilon;  // oracle: override the per-size default
    std::optional<int> filter_n;    // oracle dataset filters
    std::optional<int> filter_g;
    std::string filter_label;
    double alpha0 = 0.1, alpha1 = 1.0, alpha2 = 1.0, alpha3 = 0.2; // vqls instance

    // grid axes
    std::vector<long long> iterations{1000};
    std::vector<std::optional<int>> branching{std::nullopt}; // nullopt = progressive widening
    int runs = 10;
    std::uint64_t seed = 1;

    // search + fine-tune hyperparameters
    int rollout_steps = 0;
    double commit_fraction = 0.05;
    double exploration = 0.4;
    double pw_coefficient = 1.0;
    double pw_exponent = 0.3;
    double p_add = 0.5, p_swap = 0.2, p_delete = 0.1, p_change = 0.2;
    double angle_deviation = 0.2;
    int max_depth = 20;
    std::optional<int> max_cnots;
    int max_adam_steps = 500;
    double noise_bitflip = 0.0;
    double noise_depolarizing = 0.0;
    bool normalize_rewards = false;

    // execution
    int threads = 0; // 0 = hardware concurrency
    std::string out = "results";

    SearchConfig to_search_config(long long iters, std::uint64_t run_seed,
                                  std::optional<int> fixed_branching) const;
};

DriverConfig parse_config_text(std::string_view text);
DriverConfig load_config_file(const std::string& path);

// Applies `key = value` with the same names the config file uses.
void apply_override(DriverConfig& cfg, const std::string& key, const std::string& value);

std::string config_to_text(const DriverConfig& cfg);

// One (problem instance, I, branching) grid cell.
struct CellSpec {
    std::string tag;                 // filename-safe identifier
    long long iterations = 1000;
    std::optional<int> fixed_branching;
    std::optional<DatasetEntry> entry; // oracle grid mode
};

struct RunSummary {
    std::string cell_tag;
    long long iterations = 0;
    std::optional<int> fixed_branching;
    int run_index = 0;
    double search_cost = 0.0;   // best over the path, pre fine-tuning
    double final_cost = 0.0;    // post fine-tuning (noisy cost under noise)
    double validation_cost = 0.0; // noiseless cost of the final circuit
    bool success = false;       // oracle only: epsilon-approximation
    bool has_success = false;
    long long n_eval_total = 0;
    CircuitMetrics final_metrics;
    int final_depth = 0;
    int steps_used = 0;
    long long ideal_eq16_steps_used = 0;
};

// Executes the whole grid (runs * cells), one record file per run plus
// summary.tsv under cfg.out. Returns the per-run summaries. Individual run
// failures are recorded and do not abort the grid.
std::vector<RunSummary> run_experiment(const DriverConfig& cfg);

// Single run, in-process: used by the C API and tests. Writes nothing.
struct SingleRunResult {
    std::string record_json;
    RunSummary summary;
    Circuit final_circuit;
};
SingleRunResult run_single(const DriverConfig& cfg, long long iterations,
                           std::optional<int> fixed_branching, std::uint64_t run_seed,
                           int run_index);

// Dataset generation driver: 30 circuits + manifest under out_dir.
std::string generate_dataset(std::uint64_t seed, const std::string& out_dir);

// Plot-ready delimited exports from a directory of run records.
void write_report(const std::string& results_dir, const std::string& out_dir);

} // namespace qas
