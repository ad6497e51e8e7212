#include "qas/driver.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace qas {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

long long parse_ll(const std::string& key, const std::string& value) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        raise(ErrorCode::Config, "config key `" + key + "`: expected integer, got `" + value + "`");
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double out = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size() || value.empty())
        raise(ErrorCode::Config, "config key `" + key + "`: expected number, got `" + value + "`");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    raise(ErrorCode::Config, "config key `" + key + "`: expected boolean, got `" + value + "`");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string piece =
            trim(value.substr(start, comma == std::string::npos ? std::string::npos
                                                                : comma - start));
        if (!piece.empty())
            parts.push_back(piece);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return parts;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double default_epsilon(int n) {
    switch (n) {
    case 4: return 0.05;
    case 6: return 0.1;
    case 8: return 0.2;
    default:
        raise(ErrorCode::Config,
              "no default epsilon for " + std::to_string(n) + " qubits; set `epsilon`");
    }
}

// Immutable problem description shared by every run of a cell.
struct ProblemSpec {
    std::string family;
    PauliSum hamiltonian;   // vqe
    Circuit oracle_target;  // oracle
    double epsilon = 0.0;   // oracle
    double alphas[4] = {0, 0, 0, 0}; // vqls
    json instance_meta;
};

std::unique_ptr<Problem> make_problem(const ProblemSpec& spec, const DriverConfig& cfg,
                                      std::shared_ptr<EvalCounter> counter) {
    std::optional<NoiseModel> noise;
    if (cfg.noise_bitflip != 0.0 || cfg.noise_depolarizing != 0.0)
        noise = NoiseModel{cfg.noise_bitflip, cfg.noise_depolarizing};
    if (spec.family == "vqe")
        return std::make_unique<VqeProblem>(spec.hamiltonian, noise, std::move(counter));
    if (spec.family == "vqls")
        return std::make_unique<VqlsProblem>(VqlsProblem::demo_instance(
            spec.alphas[0], spec.alphas[1], spec.alphas[2], spec.alphas[3], noise,
            std::move(counter)));
    if (spec.family == "oracle")
        return std::make_unique<OracleProblem>(apply_circuit(spec.oracle_target), spec.epsilon,
                                               noise, std::move(counter));
    raise(ErrorCode::Config, "unknown problem family `" + spec.family + "`");
}

json circuit_point(const Circuit& c, double cost) {
    const CircuitMetrics m = metrics(c);
    return json{{"cost", cost},
                {"gates", m.gate_count},
                {"cnots", m.cnot_count},
                {"params", m.param_count},
                {"depth", depth(c)}};
}

json downsample_log(const std::vector<double>& log, std::size_t max_points) {
    json out = json::array();
    if (log.empty())
        return out;
    const std::size_t stride = std::max<std::size_t>(1, (log.size() + max_points - 1) / max_points);
    for (std::size_t i = stride - 1; i < log.size(); i += stride)
        out.push_back(json{{"iteration", i + 1}, {"best_cost", log[i]}});
    if ((log.size() - 1) % stride != stride - 1)
        out.push_back(json{{"iteration", log.size()}, {"best_cost", log.back()}});
    return out;
}

} // namespace

SearchConfig DriverConfig::to_search_config(long long iters, std::uint64_t run_seed,
                                            std::optional<int> fixed_branching) const {
    SearchConfig sc;
    sc.iterations = iters;
    sc.rollout_steps = rollout_steps;
    sc.commit_fraction = commit_fraction;
    sc.exploration = exploration;
    sc.pw_coefficient = pw_coefficient;
    sc.pw_exponent = pw_exponent;
    sc.action_probs = {p_add, p_swap, p_delete, p_change};
    sc.angle_deviation = angle_deviation;
    sc.max_depth = max_depth;
    sc.max_cnots = max_cnots;
    sc.max_adam_steps = max_adam_steps;
    sc.seed = run_seed;
    if (noise_bitflip != 0.0 || noise_depolarizing != 0.0)
        sc.noise = NoiseModel{noise_bitflip, noise_depolarizing};
    sc.fixed_branching = fixed_branching;
    sc.normalize_rewards = normalize_rewards;
    return sc;
}

void apply_override(DriverConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "problem") cfg.problem = value;
    else if (key == "hamiltonian") cfg.hamiltonian = value;
    else if (key == "target") cfg.target = value;
    else if (key == "dataset") cfg.dataset = value;
    else if (key == "epsilon") {
        if (value == "auto") cfg.epsilon.reset();
        else cfg.epsilon = parse_double(key, value);
    }
    else if (key == "filter_n") cfg.filter_n = static_cast<int>(parse_ll(key, value));
    else if (key == "filter_g") cfg.filter_g = static_cast<int>(parse_ll(key, value));
    else if (key == "filter_label") cfg.filter_label = value;
    else if (key == "alpha0") cfg.alpha0 = parse_double(key, value);
    else if (key == "alpha1") cfg.alpha1 = parse_double(key, value);
    else if (key == "alpha2") cfg.alpha2 = parse_double(key, value);
    else if (key == "alpha3") cfg.alpha3 = parse_double(key, value);
    else if (key == "iterations") {
        cfg.iterations.clear();
        for (const std::string& piece : split_list(value))
            cfg.iterations.push_back(parse_ll(key, piece));
        if (cfg.iterations.empty())
            raise(ErrorCode::Config, "iterations list is empty");
    }
    else if (key == "fixed_branching") {
        cfg.branching.clear();
        for (const std::string& piece : split_list(value)) {
            if (piece == "pw")
                cfg.branching.push_back(std::nullopt);
            else
                cfg.branching.push_back(static_cast<int>(parse_ll(key, piece)));
        }
        if (cfg.branching.empty())
            raise(ErrorCode::Config, "fixed_branching list is empty");
    }
    else if (key == "runs") cfg.runs = static_cast<int>(parse_ll(key, value));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_ll(key, value));
    else if (key == "rollout_steps") cfg.rollout_steps = static_cast<int>(parse_ll(key, value));
    else if (key == "commit_fraction") cfg.commit_fraction = parse_double(key, value);
    else if (key == "exploration") cfg.exploration = parse_double(key, value);
    else if (key == "pw_coefficient") cfg.pw_coefficient = parse_double(key, value);
    else if (key == "pw_exponent") cfg.pw_exponent = parse_double(key, value);
    else if (key == "p_add") cfg.p_add = parse_double(key, value);
    else if (key == "p_swap") cfg.p_swap = parse_double(key, value);
    else if (key == "p_delete") cfg.p_delete = parse_double(key, value);
    else if (key == "p_change") cfg.p_change = parse_double(key, value);
    else if (key == "angle_deviation") cfg.angle_deviation = parse_double(key, value);
    else if (key == "max_depth") cfg.max_depth = static_cast<int>(parse_ll(key, value));
    else if (key == "max_cnots") {
        if (value == "none") cfg.max_cnots.reset();
        else cfg.max_cnots = static_cast<int>(parse_ll(key, value));
    }
    else if (key == "max_adam_steps") cfg.max_adam_steps = static_cast<int>(parse_ll(key, value));
    else if (key == "noise_bitflip") cfg.noise_bitflip = parse_double(key, value);
    else if (key == "noise_depolarizing") cfg.noise_depolarizing = parse_double(key, value);
    else if (key == "normalize_rewards") cfg.normalize_rewards = parse_bool(key, value);
    else if (key == "threads") cfg.threads = static_cast<int>(parse_ll(key, value));
    else if (key == "out") cfg.out = value;
    else raise(ErrorCode::Config, "unknown config key `" + key + "`");
}

DriverConfig parse_config_text(std::string_view text) {
    DriverConfig cfg;
    int line_no = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        const std::size_t eol = text.find('\n', offset);
        std::string line(text.substr(offset, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - offset));
        offset = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::Config,
                  "config line " + std::to_string(line_no) + ": expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            apply_override(cfg, key, value);
        } catch (const Error& e) {
            raise(ErrorCode::Config, "config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

DriverConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorCode::Io, "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_text(const DriverConfig& cfg) {
    std::ostringstream out;
    out << "problem = " << cfg.problem << '\n';
    if (!cfg.hamiltonian.empty()) out << "hamiltonian = " << cfg.hamiltonian << '\n';
    if (!cfg.target.empty()) out << "target = " << cfg.target << '\n';
    if (!cfg.dataset.empty()) out << "dataset = " << cfg.dataset << '\n';
    if (cfg.epsilon) out << "epsilon = " << format_double(*cfg.epsilon) << '\n';
    if (cfg.filter_n) out << "filter_n = " << *cfg.filter_n << '\n';
    if (cfg.filter_g) out << "filter_g = " << *cfg.filter_g << '\n';
    if (!cfg.filter_label.empty()) out << "filter_label = " << cfg.filter_label << '\n';
    if (cfg.problem == "vqls") {
        out << "alpha0 = " << format_double(cfg.alpha0) << '\n';
        out << "alpha1 = " << format_double(cfg.alpha1) << '\n';
        out << "alpha2 = " << format_double(cfg.alpha2) << '\n';
        out << "alpha3 = " << format_double(cfg.alpha3) << '\n';
    }
    out << "iterations = ";
    for (std::size_t i = 0; i < cfg.iterations.size(); ++i)
        out << (i ? "," : "") << cfg.iterations[i];
    out << '\n';
    out << "fixed_branching = ";
    for (std::size_t i = 0; i < cfg.branching.size(); ++i)
        out << (i ? "," : "")
            << (cfg.branching[i] ? std::to_string(*cfg.branching[i]) : std::string("pw"));
    out << '\n';
    out << "runs = " << cfg.runs << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "rollout_steps = " << cfg.rollout_steps << '\n';
    out << "commit_fraction = " << format_double(cfg.commit_fraction) << '\n';
    out << "exploration = " << format_double(cfg.exploration) << '\n';
    out << "pw_coefficient = " << format_double(cfg.pw_coefficient) << '\n';
    out << "pw_exponent = " << format_double(cfg.pw_exponent) << '\n';
    out << "p_add = " << format_double(cfg.p_add) << '\n';
    out << "p_swap = " << format_double(cfg.p_swap) << '\n';
    out << "p_delete = " << format_double(cfg.p_delete) << '\n';
    out << "p_change = " << format_double(cfg.p_change) << '\n';
    out << "angle_deviation = " << format_double(cfg.angle_deviation) << '\n';
    out << "max_depth = " << cfg.max_depth << '\n';
    if (cfg.max_cnots) out << "max_cnots = " << *cfg.max_cnots << '\n';
    out << "max_adam_steps = " << cfg.max_adam_steps << '\n';
    out << "noise_bitflip = " << format_double(cfg.noise_bitflip) << '\n';
    out << "noise_depolarizing = " << format_double(cfg.noise_depolarizing) << '\n';
    out << "normalize_rewards = " << (cfg.normalize_rewards ? "true" : "false") << '\n';
    out << "threads = " << cfg.threads << '\n';
    out << "out = " << cfg.out << '\n';
    return out.str();
}

namespace {

ProblemSpec build_problem_spec(const DriverConfig& cfg, const std::optional<DatasetEntry>& entry) {
    ProblemSpec spec;
    spec.family = cfg.problem;
    if (cfg.problem == "vqe") {
        if (cfg.hamiltonian.empty())
            raise(ErrorCode::Config, "vqe requires `hamiltonian = <file>`");
        spec.hamiltonian = load_hamiltonian_file(cfg.hamiltonian);
        spec.instance_meta = json{{"hamiltonian", cfg.hamiltonian}};
    } else if (cfg.problem == "vqls") {
        spec.alphas[0] = cfg.alpha0;
        spec.alphas[1] = cfg.alpha1;
        spec.alphas[2] = cfg.alpha2;
        spec.alphas[3] = cfg.alpha3;
        spec.instance_meta = json{{"alpha0", cfg.alpha0},
                                  {"alpha1", cfg.alpha1},
                                  {"alpha2", cfg.alpha2},
                                  {"alpha3", cfg.alpha3}};
    } else if (cfg.problem == "oracle") {
        if (entry) {
            spec.oracle_target = entry->circuit;
            spec.instance_meta = json{{"n", entry->n},
                                      {"g", entry->g},
                                      {"label", entry->label},
                                      {"m2", entry->m2}};
        } else if (!cfg.target.empty()) {
            spec.oracle_target = load_circuit_file(cfg.target);
            spec.instance_meta = json{{"target", cfg.target}};
        } else {
            raise(ErrorCode::Config, "oracle requires `target = <file>` or `dataset = <manifest>`");
        }
        spec.epsilon = cfg.epsilon ? *cfg.epsilon : default_epsilon(spec.oracle_target.n);
        spec.instance_meta["epsilon"] = spec.epsilon;
    } else if (cfg.problem.empty()) {
        raise(ErrorCode::Config, "missing `problem = vqe|vqls|oracle`");
    } else {
        raise(ErrorCode::Config, "unknown problem `" + cfg.problem + "`");
    }
    return spec;
}

std::string cell_tag(const DriverConfig& cfg, const std::optional<DatasetEntry>& entry,
                     long long iters, std::optional<int> branching) {
    std::string tag = cfg.problem;
    if (entry)
        tag += "_n" + std::to_string(entry->n) + "_g" + std::to_string(entry->g) + "_" +
               entry->label;
    tag += "_I" + std::to_string(iters);
    tag += "_b" + (branching ? std::to_string(*branching) : std::string("pw"));
    if (cfg.noise_bitflip != 0.0 || cfg.noise_depolarizing != 0.0)
        tag += "_noisy";
    return tag;
}

SingleRunResult execute_run(const ProblemSpec& spec, const DriverConfig& cfg,
                            const std::string& tag, long long iters,
                            std::optional<int> fixed_branching, std::uint64_t run_seed,
                            int run_index) {
    const auto t0 = std::chrono::steady_clock::now();
    auto counter = std::make_shared<EvalCounter>();
    std::unique_ptr<Problem> problem = make_problem(spec, cfg, counter);
    const SearchConfig sc = cfg.to_search_config(iters, run_seed, fixed_branching);

    SearchResult sr = search(*problem, sc);
    FineTuneTrace ft = finetune(sr.best_circuit, *problem, FineTuneOptions{
                                                               cfg.max_adam_steps,
                                                               0.01,
                                                               0.9,
                                                               0.999,
                                                               1e-8,
                                                               1e-9,
                                                               10,
                                                           });
    const long long before_validation = counter->total();
    const double validation_cost = problem->noiseless_cost(ft.final_circuit);
    const long long validation_evals = counter->total() - before_validation;

    const CircuitMetrics fm = metrics(ft.final_circuit);
    const int final_depth = depth(ft.final_circuit);
    const long long l = fm.param_count;
    const long long ideal_used = iters + 2 * l * ft.steps_used;
    const long long ideal_cap = iters + 2 * l * cfg.max_adam_steps;

    const long long total = counter->total();
    const long long finetune_total = ft.gradient_evals + ft.step_cost_evals + ft.overhead_evals;
    if (total != sr.eval_count + finetune_total + validation_evals)
        raise(ErrorCode::Internal, "evaluation breakdown does not sum to the counter total");

    json search_json{
        {"best_cost", sr.best_cost},
        {"iterations", iters},
        {"aborted_iterations", sr.aborted_iterations},
        {"commits", sr.commits.size()},
        {"evals",
         {{"root", sr.root_eval_count},
          {"iterations", sr.iteration_eval_count},
          {"path", sr.path_eval_count}}},
        {"best_circuit", serialize(sr.best_circuit)},
    };
    json path_json = json::array();
    for (const auto& [circuit, cost] : sr.best_path)
        path_json.push_back(circuit_point(circuit, cost));
    search_json["best_path"] = path_json;
    search_json["best_so_far"] = downsample_log(sr.iteration_log, 256);

    json record{
        {"schema", "qas-run-v1"},
        {"problem", {{"family", spec.family}, {"tag", tag}, {"instance", spec.instance_meta}}},
        {"seed", run_seed},
        {"run_index", run_index},
        {"config",
         {{"iterations", iters},
          {"rollout_steps", cfg.rollout_steps},
          {"commit_fraction", cfg.commit_fraction},
          {"exploration", cfg.exploration},
          {"pw_coefficient", cfg.pw_coefficient},
          {"pw_exponent", cfg.pw_exponent},
          {"p_add", cfg.p_add},
          {"p_swap", cfg.p_swap},
          {"p_delete", cfg.p_delete},
          {"p_change", cfg.p_change},
          {"angle_deviation", cfg.angle_deviation},
          {"max_depth", cfg.max_depth},
          {"max_cnots", cfg.max_cnots ? json(*cfg.max_cnots) : json()},
          {"max_adam_steps", cfg.max_adam_steps},
          {"noise_bitflip", cfg.noise_bitflip},
          {"noise_depolarizing", cfg.noise_depolarizing},
          {"fixed_branching", fixed_branching ? json(*fixed_branching) : json()},
          {"normalize_rewards", cfg.normalize_rewards}}},
        {"search", search_json},
        {"finetune",
         {{"initial_cost", ft.initial_cost},
          {"final_cost", ft.final_cost},
          {"steps_used", ft.steps_used},
          {"param_count", l},
          {"cost_trace", ft.cost_trace},
          {"circuit", serialize(ft.final_circuit)},
          {"evals",
           {{"gradient", ft.gradient_evals},
            {"step_cost", ft.step_cost_evals},
            {"overhead", ft.overhead_evals}}}}},
        {"validation", {{"noiseless_cost", validation_cost}, {"evals", validation_evals}}},
        {"metrics",
         {{"cnots", fm.cnot_count},
          {"params", fm.param_count},
          {"gates", fm.gate_count},
          {"depth", final_depth}}},
        {"n_eval",
         {{"total", total},
          {"search", sr.eval_count},
          {"finetune", finetune_total},
          {"validation", validation_evals},
          {"ideal_eq16_steps_used", ideal_used},
          {"ideal_eq16_step_cap", ideal_cap}}},
    };

    RunSummary summary;
    summary.cell_tag = tag;
    summary.iterations = iters;
    summary.fixed_branching = fixed_branching;
    summary.run_index = run_index;
    summary.search_cost = sr.best_cost;
    summary.final_cost = ft.final_cost;
    summary.validation_cost = validation_cost;
    summary.n_eval_total = total;
    summary.final_metrics = fm;
    summary.final_depth = final_depth;
    summary.steps_used = ft.steps_used;
    summary.ideal_eq16_steps_used = ideal_used;
    if (spec.family == "oracle") {
        summary.has_success = true;
        summary.success = validation_cost <= spec.epsilon;
        record["validation"]["success"] = summary.success;
    }

    const auto t1 = std::chrono::steady_clock::now();
    record["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

    SingleRunResult out;
    out.record_json = record.dump(2);
    out.summary = summary;
    out.final_circuit = ft.final_circuit;
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2)
        return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace

SingleRunResult run_single(const DriverConfig& cfg, long long iterations,
                           std::optional<int> fixed_branching, std::uint64_t run_seed,
                           int run_index) {
    std::optional<DatasetEntry> entry;
    if (cfg.problem == "oracle" && !cfg.dataset.empty()) {
        std::vector<DatasetEntry> entries = load_dataset_manifest(cfg.dataset);
        if (cfg.filter_n || cfg.filter_g || !cfg.filter_label.empty()) {
            std::erase_if(entries, [&](const DatasetEntry& e) {
                return (cfg.filter_n && e.n != *cfg.filter_n) ||
                       (cfg.filter_g && e.g != *cfg.filter_g) ||
                       (!cfg.filter_label.empty() && e.label != cfg.filter_label);
            });
        }
        if (entries.empty())
            raise(ErrorCode::Config, "dataset filter matched no entries");
        entry = entries.front();
    }
    const ProblemSpec spec = build_problem_spec(cfg, entry);
    const std::string tag = cell_tag(cfg, entry, iterations, fixed_branching);
    return execute_run(spec, cfg, tag, iterations, fixed_branching, run_seed, run_index);
}

std::vector<RunSummary> run_experiment(const DriverConfig& cfg) {
    if (cfg.runs < 1)
        raise(ErrorCode::Config, "runs must be >= 1");
    if (cfg.iterations.empty() || cfg.branching.empty())
        raise(ErrorCode::Config, "experiment axes must be non-empty");

    // instance list: one spec per dataset entry in grid mode, else a single spec
    std::vector<std::optional<DatasetEntry>> instances;
    if (cfg.problem == "oracle" && !cfg.dataset.empty()) {
        std::vector<DatasetEntry> entries = load_dataset_manifest(cfg.dataset);
        std::erase_if(entries, [&](const DatasetEntry& e) {
            return (cfg.filter_n && e.n != *cfg.filter_n) ||
                   (cfg.filter_g && e.g != *cfg.filter_g) ||
                   (!cfg.filter_label.empty() && e.label != cfg.filter_label);
        });
        if (entries.empty())
            raise(ErrorCode::Config, "dataset filter matched no entries");
        for (DatasetEntry& e : entries)
            instances.emplace_back(std::move(e));
    } else {
        instances.emplace_back(std::nullopt);
    }

    struct Task {
        ProblemSpec spec;
        std::string tag;
        long long iterations;
        std::optional<int> branching;
        std::uint64_t seed;
        int run_index;
    };
    std::vector<Task> tasks;
    for (const auto& entry : instances) {
        const ProblemSpec spec = build_problem_spec(cfg, entry);
        for (long long iters : cfg.iterations)
            for (const auto& branching : cfg.branching) {
                const std::string tag = cell_tag(cfg, entry, iters, branching);
                for (int r = 0; r < cfg.runs; ++r)
                    tasks.push_back(
                        {spec, tag, iters, branching, cfg.seed + static_cast<std::uint64_t>(r), r});
            }
    }

    const fs::path out_dir(cfg.out);
    const fs::path records_dir = out_dir / "records";
    std::error_code ec;
    fs::create_directories(records_dir, ec);
    if (ec)
        raise(ErrorCode::Io, "cannot create output directory: " + records_dir.string());

    {
        std::ofstream snapshot(out_dir / "config_used.cfg", std::ios::binary | std::ios::trunc);
        snapshot << config_to_text(cfg);
    }

    struct Outcome {
        bool ok = false;
        std::string error;
        RunSummary summary;
    };
    std::vector<Outcome> outcomes(tasks.size());

    const unsigned pool = cfg.threads > 0
                              ? static_cast<unsigned>(cfg.threads)
                              : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
                return;
            const Task& task = tasks[i];
            Outcome& outcome = outcomes[i];
            const fs::path record_path =
                records_dir / (task.tag + "_r" + std::to_string(task.run_index) + ".json");
            try {
                SingleRunResult result = execute_run(task.spec, cfg, task.tag, task.iterations,
                                                     task.branching, task.seed, task.run_index);
                std::ofstream out(record_path, std::ios::binary | std::ios::trunc);
                if (!out)
                    raise(ErrorCode::Io, "cannot write record: " + record_path.string());
                out << result.record_json << '\n';
                outcome.ok = true;
                outcome.summary = result.summary;
            } catch (const std::exception& e) {
                outcome.error = e.what();
                std::ofstream out(record_path, std::ios::binary | std::ios::trunc);
                out << json{{"schema", "qas-run-v1"},
                            {"problem", {{"tag", task.tag}}},
                            {"run_index", task.run_index},
                            {"seed", task.seed},
                            {"error", outcome.error}}
                           .dump(2)
                    << '\n';
            }
        }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 1; t < pool; ++t)
        threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads)
        t.join();

    // per-cell aggregation, in task order
    std::vector<std::string> cell_order;
    std::vector<std::vector<const RunSummary*>> by_cell;
    std::vector<int> failures_by_cell;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const std::string& tag = tasks[i].tag;
        std::size_t idx = 0;
        for (; idx < cell_order.size(); ++idx)
            if (cell_order[idx] == tag)
                break;
        if (idx == cell_order.size()) {
            cell_order.push_back(tag);
            by_cell.emplace_back();
            failures_by_cell.push_back(0);
        }
        if (outcomes[i].ok)
            by_cell[idx].push_back(&outcomes[i].summary);
        else
            ++failures_by_cell[idx];
    }

    std::ofstream summary(out_dir / "summary.tsv", std::ios::binary | std::ios::trunc);
    summary << "cell\titerations\tbranching\truns\tfailed\tbest_final_cost\tmean_final_cost\t"
               "std_final_cost\tbest_validation_cost\tsuccess_count\tmean_n_eval\t"
               "best_run\tbest_cnots\tbest_params\tbest_depth\tbest_steps_used\t"
               "ideal_eq16_steps_used\tideal_eq16_step_cap\n";
    for (std::size_t idx = 0; idx < cell_order.size(); ++idx) {
        const auto& runs = by_cell[idx];
        if (runs.empty()) {
            summary << cell_order[idx] << "\t-\t-\t0\t" << failures_by_cell[idx]
                    << "\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\n";
            continue;
        }
        std::vector<double> final_costs, validation_costs, nevals;
        int success_count = 0;
        const RunSummary* best = runs.front();
        for (const RunSummary* r : runs) {
            final_costs.push_back(r->final_cost);
            validation_costs.push_back(r->validation_cost);
            nevals.push_back(static_cast<double>(r->n_eval_total));
            if (r->has_success && r->success)
                ++success_count;
            if (r->final_cost < best->final_cost)
                best = r;
        }
        const long long cap_ideal =
            best->iterations + 2LL * best->final_metrics.param_count * cfg.max_adam_steps;
        summary << cell_order[idx] << '\t' << best->iterations << '\t'
                << (best->fixed_branching ? std::to_string(*best->fixed_branching)
                                          : std::string("pw"))
                << '\t' << runs.size() << '\t' << failures_by_cell[idx] << '\t'
                << format_double(*std::min_element(final_costs.begin(), final_costs.end()))
                << '\t' << format_double(mean_of(final_costs)) << '\t'
                << format_double(std_of(final_costs)) << '\t'
                << format_double(
                       *std::min_element(validation_costs.begin(), validation_costs.end()))
                << '\t'
                << (runs.front()->has_success ? std::to_string(success_count) : std::string("-"))
                << '\t' << format_double(mean_of(nevals)) << '\t' << best->run_index << '\t'
                << best->final_metrics.cnot_count << '\t' << best->final_metrics.param_count
                << '\t' << best->final_depth << '\t' << best->steps_used << '\t'
                << best->ideal_eq16_steps_used << '\t' << cap_ideal << '\n';
    }

    std::vector<RunSummary> all;
    for (const Outcome& o : outcomes)
        if (o.ok)
            all.push_back(o.summary);
    return all;
}

std::string generate_dataset(std::uint64_t seed, const std::string& out_dir) {
    Rng rng(seed);
    const std::vector<DatasetEntry> entries = build_dataset(rng);
    return write_dataset(entries, out_dir);
}

} // namespace qas
