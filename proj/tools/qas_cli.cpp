// Command-line front end for the qas shared library. All functionality is
// reached through the C API in qas.h; this file only parses arguments,
// forwards them as config overrides, and reports errors.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "qas.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

int fail_runtime(const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, qas_last_error());
    return kExitRuntime;
}

struct ConfigHandle {
    qas_config* ptr = nullptr;
    ~ConfigHandle() { qas_config_free(ptr); }
};

// Every config-file key is also a command-line flag of the same name.
const std::vector<std::string> kConfigKeys = {
    "problem",        "hamiltonian",     "target",          "dataset",
    "epsilon",        "filter_n",        "filter_g",        "filter_label",
    "alpha0",         "alpha1",          "alpha2",          "alpha3",
    "iterations",     "fixed_branching", "runs",            "seed",
    "rollout_steps",  "commit_fraction", "exploration",     "pw_coefficient",
    "pw_exponent",    "p_add",           "p_swap",          "p_delete",
    "p_change",       "angle_deviation", "max_depth",       "max_cnots",
    "max_adam_steps", "noise_bitflip",   "noise_depolarizing",
    "normalize_rewards", "threads",      "out",
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Progressive-widening MCTS search over parameterized quantum circuits"};
    app.require_subcommand(1);

    // run ------------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Execute a seeded experiment grid");
    std::string run_config;
    run->add_option("--config", run_config, "Key-value config file");
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const std::string& key : kConfigKeys) {
        run->add_option_function<std::string>(
            "--" + key,
            [&overrides, key](const std::string& value) { overrides.emplace_back(key, value); },
            "Override config key `" + key + "`");
    }
    // spec'd aliases for the noise flags
    run->add_option_function<std::string>(
        "--noise-bitflip",
        [&overrides](const std::string& v) { overrides.emplace_back("noise_bitflip", v); },
        "Alias of --noise_bitflip");
    run->add_option_function<std::string>(
        "--noise-depolarizing",
        [&overrides](const std::string& v) { overrides.emplace_back("noise_depolarizing", v); },
        "Alias of --noise_depolarizing");
    run->add_option_function<std::string>(
        "--fixed-branching",
        [&overrides](const std::string& v) { overrides.emplace_back("fixed_branching", v); },
        "Alias of --fixed_branching");

    // gen-dataset ------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-dataset", "Generate the 30-circuit Clifford+T benchmark");
    std::uint64_t gen_seed = 1;
    std::string gen_out = "dataset";
    gen->add_option("--seed", gen_seed, "Generation seed");
    gen->add_option("--out", gen_out, "Output directory");

    // report -----------------------------------------------------------------
    auto* report = app.add_subcommand("report", "Emit plot-ready TSV exports from run records");
    std::string report_results, report_out = "report";
    report->add_option("results", report_results, "Results directory")->required();
    report->add_option("--out", report_out, "Report output directory");

    // magic ------------------------------------------------------------------
    auto* magic = app.add_subcommand("magic", "Print the M2 entropy of a circuit file");
    std::string magic_path;
    magic->add_option("circuit", magic_path, "Circuit file")->required();

    // exact ------------------------------------------------------------------
    auto* exact = app.add_subcommand("exact", "Print the exact ground energy of a Hamiltonian");
    std::string exact_path;
    exact->add_option("hamiltonian", exact_path, "Hamiltonian file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (run->parsed()) {
        ConfigHandle cfg;
        qas_status st = run_config.empty() ? qas_config_create(&cfg.ptr)
                                           : qas_config_load(run_config.c_str(), &cfg.ptr);
        if (st != QAS_OK)
            return fail_runtime("loading config");
        for (const auto& [key, value] : overrides) {
            st = qas_config_set(cfg.ptr, key.c_str(), value.c_str());
            if (st != QAS_OK) {
                std::fprintf(stderr, "error: --%s: %s\n", key.c_str(), qas_last_error());
                return kExitUsage;
            }
        }
        st = qas_run_experiment(cfg.ptr, nullptr);
        if (st != QAS_OK)
            return fail_runtime("running experiment");
        char* text = nullptr;
        if (qas_config_to_text(cfg.ptr, &text) == QAS_OK) {
            std::printf("done; records and summary.tsv written (config below)\n%s", text);
            qas_string_free(text);
        }
        return 0;
    }

    if (gen->parsed()) {
        if (qas_generate_dataset(gen_seed, gen_out.c_str()) != QAS_OK)
            return fail_runtime("generating dataset");
        std::printf("dataset written under %s\n", gen_out.c_str());
        return 0;
    }

    if (report->parsed()) {
        if (qas_write_report(report_results.c_str(), report_out.c_str()) != QAS_OK)
            return fail_runtime("writing report");
        std::printf("report written under %s\n", report_out.c_str());
        return 0;
    }

    if (magic->parsed()) {
        qas_circuit* c = nullptr;
        if (qas_circuit_load(magic_path.c_str(), &c) != QAS_OK)
            return fail_runtime("loading circuit");
        double m2 = 0.0;
        const qas_status st = qas_circuit_m2(c, &m2);
        qas_circuit_free(c);
        if (st != QAS_OK)
            return fail_runtime("computing M2");
        std::printf("%.12g\n", m2);
        return 0;
    }

    if (exact->parsed()) {
        qas_pauli_sum* h = nullptr;
        if (qas_pauli_sum_load(exact_path.c_str(), &h) != QAS_OK)
            return fail_runtime("loading Hamiltonian");
        double energy = 0.0;
        const qas_status st = qas_ground_energy(h, &energy);
        qas_pauli_sum_free(h);
        if (st != QAS_OK)
            return fail_runtime("diagonalizing");
        std::printf("%.12g\n", energy);
        return 0;
    }

    return kExitUsage;
}
