#pragma once

#include <string>
#include <vector>

#include "qas/actions.hpp"
#include "qas/magic.hpp"

namespace qas {

// One benchmark target: a random Clifford+T circuit tagged with its
// stabilizer Renyi entropy. `easy`/`hard` mark the extreme M2 values of a
// generation batch.
struct DatasetEntry {
    int n = 0;
    int g = 0;
    std::string label; // "easy" | "hard"
    Circuit circuit;
    double m2 = 0.0;
};

// `g` gates drawn uniformly from {H, S, CNOT, T} on uniform qubits
// (CNOT: ordered distinct pair).
Circuit gen_random_clifford_t(int n, int g, Rng& rng);

// The 30-entry benchmark: for each (n, g) in {4,6,8} x {5,10,15,20,30},
// 10 random circuits; the minimum-M2 one is labeled easy and the
// maximum-M2 one hard (ties broken by generation index).
std::vector<DatasetEntry> build_dataset(Rng& rng);

struct DatasetAxes {
    std::vector<int> qubit_counts{4, 6, 8};
    std::vector<int> gate_counts{5, 10, 15, 20, 30};
    int circuits_per_cell = 10;
};

std::vector<DatasetEntry> build_dataset(Rng& rng, const DatasetAxes& axes);

// Writes one circuit file per entry plus a tab-separated manifest
// (n, g, label, m2, path) into `dir`; returns the manifest path.
std::string write_dataset(const std::vector<DatasetEntry>& entries, const std::string& dir);

// Loads entries back from a manifest written by write_dataset.
std::vector<DatasetEntry> load_dataset_manifest(const std::string& manifest_path);

} // namespace qas
