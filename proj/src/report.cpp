#include "qas/driver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace qas {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct LoadedRecord {
    json body;
    std::string tag;
    long long iterations = 0;
    std::string branching;
    int run_index = 0;
    double final_cost = 0.0;
    bool failed = false;
};

std::vector<LoadedRecord> load_records(const std::string& results_dir) {
    fs::path dir(results_dir);
    if (fs::is_directory(dir / "records"))
        dir /= "records";
    if (!fs::is_directory(dir))
        raise(ErrorCode::Io, "not a results directory: " + results_dir);

    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        raise(ErrorCode::Io, "no run records found under " + results_dir);

    std::vector<LoadedRecord> records;
    for (const fs::path& f : files) {
        std::ifstream in(f, std::ios::binary);
        LoadedRecord r;
        try {
            r.body = json::parse(in);
        } catch (const json::exception& e) {
            raise(ErrorCode::Parse, f.string() + ": " + e.what());
        }
        r.tag = r.body.value("/problem/tag"_json_pointer, std::string("unknown"));
        r.run_index = r.body.value("run_index", 0);
        if (r.body.contains("error")) {
            r.failed = true;
            records.push_back(std::move(r));
            continue;
        }
        r.iterations = r.body.value("/config/iterations"_json_pointer, 0LL);
        const json& fb = r.body["config"]["fixed_branching"];
        r.branching = fb.is_null() ? "pw" : std::to_string(fb.get<int>());
        r.final_cost = r.body.value("/finetune/final_cost"_json_pointer, 0.0);
        records.push_back(std::move(r));
    }
    return records;
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

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(ErrorCode::Io, "cannot write " + path.string());
    return out;
}

} // namespace

void write_report(const std::string& results_dir, const std::string& out_dir) {
    const std::vector<LoadedRecord> records = load_records(results_dir);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        raise(ErrorCode::Io, "cannot create report directory: " + out_dir);

    // group per cell, keep task order stable via std::map on the tag
    std::map<std::string, std::vector<const LoadedRecord*>> cells;
    for (const LoadedRecord& r : records)
        if (!r.failed)
            cells[r.tag].push_back(&r);

    if (cells.empty())
        raise(ErrorCode::Io, "all records under " + results_dir + " are failure records");

    auto best_of = [](const std::vector<const LoadedRecord*>& rs) {
        const LoadedRecord* best = rs.front();
        for (const LoadedRecord* r : rs)
            if (r->final_cost < best->final_cost)
                best = r;
        return best;
    };

    // (a) cost along the best path, best run per cell
    {
        std::ofstream out = open_out(fs::path(out_dir) / "best_path_costs.tsv");
        out << "cell\titerations\tbranching\trun\tposition\tcost\tgates\tcnots\tparams\tdepth\n";
        for (const auto& [tag, rs] : cells) {
            const LoadedRecord* r = best_of(rs);
            const json& path = r->body["search"]["best_path"];
            for (std::size_t i = 0; i < path.size(); ++i)
                out << tag << '\t' << r->iterations << '\t' << r->branching << '\t'
                    << r->run_index << '\t' << i << '\t'
                    << fmt(path[i].value("cost", 0.0)) << '\t' << path[i].value("gates", 0)
                    << '\t' << path[i].value("cnots", 0) << '\t' << path[i].value("params", 0)
                    << '\t' << path[i].value("depth", 0) << '\n';
        }
    }

    // (b) fine-tuning traces, best run per cell
    {
        std::ofstream out = open_out(fs::path(out_dir) / "finetune_traces.tsv");
        out << "cell\titerations\tbranching\trun\tstep\tcost\n";
        for (const auto& [tag, rs] : cells) {
            const LoadedRecord* r = best_of(rs);
            const json& trace = r->body["finetune"]["cost_trace"];
            for (std::size_t i = 0; i < trace.size(); ++i)
                out << tag << '\t' << r->iterations << '\t' << r->branching << '\t'
                    << r->run_index << '\t' << i << '\t' << fmt(trace[i].get<double>()) << '\n';
        }
    }

    // (c) success counts per dataset cell (oracle grids)
    {
        std::ofstream out = open_out(fs::path(out_dir) / "success_matrix.tsv");
        out << "iterations\tbranching\tn\tg\tlabel\tsuccesses\truns\n";
        for (const auto& [tag, rs] : cells) {
            const json& instance = rs.front()->body["problem"]["instance"];
            if (!instance.contains("g"))
                continue;
            int successes = 0;
            for (const LoadedRecord* r : rs)
                if (r->body.value("/validation/success"_json_pointer, false))
                    ++successes;
            out << rs.front()->iterations << '\t' << rs.front()->branching << '\t'
                << instance.value("n", 0) << '\t' << instance.value("g", 0) << '\t'
                << instance.value("label", std::string()) << '\t' << successes << '\t'
                << rs.size() << '\n';
        }
    }

    // (d) summary table (result, N_eval actual and idealized, circuit metrics)
    {
        std::ofstream out = open_out(fs::path(out_dir) / "summary_table.tsv");
        out << "cell\titerations\tbranching\truns\tresult\tvalidation\tmean\tstd\t"
               "n_eval\tideal_eq16_steps_used\tideal_eq16_step_cap\tcnots\tparams\tgates\t"
               "depth\tsteps_used\tsuccesses\n";
        for (const auto& [tag, rs] : cells) {
            std::vector<double> costs;
            int successes = 0;
            bool any_success_field = false;
            for (const LoadedRecord* r : rs) {
                costs.push_back(r->final_cost);
                if (r->body["validation"].contains("success")) {
                    any_success_field = true;
                    if (r->body["validation"]["success"].get<bool>())
                        ++successes;
                }
            }
            const LoadedRecord* b = best_of(rs);
            const json& m = b->body["metrics"];
            out << tag << '\t' << b->iterations << '\t' << b->branching << '\t' << rs.size()
                << '\t' << fmt(b->final_cost) << '\t'
                << fmt(b->body.value("/validation/noiseless_cost"_json_pointer, 0.0)) << '\t'
                << fmt(mean_of(costs)) << '\t' << fmt(std_of(costs)) << '\t'
                << b->body.value("/n_eval/total"_json_pointer, 0LL) << '\t'
                << b->body.value("/n_eval/ideal_eq16_steps_used"_json_pointer, 0LL) << '\t'
                << b->body.value("/n_eval/ideal_eq16_step_cap"_json_pointer, 0LL) << '\t'
                << m.value("cnots", 0) << '\t' << m.value("params", 0) << '\t'
                << m.value("gates", 0) << '\t' << m.value("depth", 0) << '\t'
                << b->body.value("/finetune/steps_used"_json_pointer, 0) << '\t'
                << (any_success_field ? std::to_string(successes) : std::string("-")) << '\n';
        }
    }

    // (e) branching-factor sweep: mean and std per (instance, I, branching)
    {
        std::ofstream out = open_out(fs::path(out_dir) / "branching_sweep.tsv");
        out << "cell\titerations\tbranching\truns\tmean_final_cost\tstd_final_cost\t"
               "best_final_cost\n";
        for (const auto& [tag, rs] : cells) {
            std::vector<double> costs;
            for (const LoadedRecord* r : rs)
                costs.push_back(r->final_cost);
            out << tag << '\t' << rs.front()->iterations << '\t' << rs.front()->branching
                << '\t' << rs.size() << '\t' << fmt(mean_of(costs)) << '\t'
                << fmt(std_of(costs)) << '\t'
                << fmt(*std::min_element(costs.begin(), costs.end())) << '\n';
        }
    }
}

} // namespace qas
