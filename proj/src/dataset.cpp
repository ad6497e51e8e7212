#include "qas/dataset.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qas {

Circuit gen_random_clifford_t(int n, int g, Rng& rng) {
    if (n < 2)
        raise(ErrorCode::Config, "dataset circuits need at least 2 qubits");
    if (g < 1)
        raise(ErrorCode::Config, "dataset circuits need at least 1 gate");
    Circuit c;
    c.n = n;
    c.gates.reserve(static_cast<std::size_t>(g));
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    for (int i = 0; i < g; ++i) {
        switch (kind(rng)) {
        case 0:
            c.gates.push_back(Gate::h(qubit(rng)));
            break;
        case 1:
            c.gates.push_back(Gate::s(qubit(rng)));
            break;
        case 2: {
            const int control = qubit(rng);
            std::uniform_int_distribution<int> other(0, n - 2);
            int target = other(rng);
            if (target >= control)
                ++target;
            c.gates.push_back(Gate::cnot(control, target));
            break;
        }
        default:
            c.gates.push_back(Gate::t(qubit(rng)));
            break;
        }
    }
    return c;
}

std::vector<DatasetEntry> build_dataset(Rng& rng) {
    return build_dataset(rng, DatasetAxes{});
}

std::vector<DatasetEntry> build_dataset(Rng& rng, const DatasetAxes& axes) {
    std::vector<DatasetEntry> entries;
    for (int n : axes.qubit_counts) {
        for (int g : axes.gate_counts) {
            int best_min = 0, best_max = 0;
            std::vector<Circuit> batch;
            std::vector<double> m2s;
            batch.reserve(static_cast<std::size_t>(axes.circuits_per_cell));
            for (int k = 0; k < axes.circuits_per_cell; ++k) {
                batch.push_back(gen_random_clifford_t(n, g, rng));
                m2s.push_back(m2_entropy(apply_circuit(batch.back())));
                if (m2s[static_cast<std::size_t>(k)] < m2s[static_cast<std::size_t>(best_min)])
                    best_min = k;
                if (m2s[static_cast<std::size_t>(k)] > m2s[static_cast<std::size_t>(best_max)])
                    best_max = k;
            }
            entries.push_back({n, g, "easy", batch[static_cast<std::size_t>(best_min)],
                               m2s[static_cast<std::size_t>(best_min)]});
            entries.push_back({n, g, "hard", batch[static_cast<std::size_t>(best_max)],
                               m2s[static_cast<std::size_t>(best_max)]});
        }
    }
    return entries;
}

std::string write_dataset(const std::vector<DatasetEntry>& entries, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(dir) / "circuits", ec);
    if (ec)
        raise(ErrorCode::Io, "cannot create dataset directory: " + dir);

    const std::string manifest_path = (fs::path(dir) / "manifest.tsv").string();
    std::ofstream manifest(manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest)
        raise(ErrorCode::Io, "cannot write manifest: " + manifest_path);
    manifest << "n\tg\tlabel\tm2\tcircuit\n";
    for (const DatasetEntry& e : entries) {
        const std::string rel = "circuits/n" + std::to_string(e.n) + "_g" + std::to_string(e.g) +
                                "_" + e.label + ".qc";
        save_circuit_file(e.circuit, (fs::path(dir) / rel).string());
        char m2_buf[64];
        std::snprintf(m2_buf, sizeof(m2_buf), "%.17g", e.m2);
        manifest << e.n << '\t' << e.g << '\t' << e.label << '\t' << m2_buf << '\t' << rel
                 << '\n';
    }
    if (!manifest)
        raise(ErrorCode::Io, "write failed: " + manifest_path);
    return manifest_path;
}

std::vector<DatasetEntry> load_dataset_manifest(const std::string& manifest_path) {
    namespace fs = std::filesystem;
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in)
        raise(ErrorCode::Io, "cannot open manifest: " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    std::vector<DatasetEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("n\t", 0) == 0)
            continue; // header
        if (line.empty())
            continue;
        std::istringstream row(line);
        DatasetEntry e;
        std::string path;
        if (!(row >> e.n >> e.g >> e.label >> e.m2 >> path))
            raise(ErrorCode::Parse,
                  "manifest line " + std::to_string(line_no) + ": expected n g label m2 path");
        e.circuit = load_circuit_file((base / path).string());
        entries.push_back(std::move(e));
    }
    if (entries.empty())
        raise(ErrorCode::Parse, "manifest contains no entries: " + manifest_path);
    return entries;
}

} // namespace qas
