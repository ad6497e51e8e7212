#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qas/error.hpp"

namespace qas {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class GateKind : std::uint8_t { Cnot, Rx, Ry, Rz, H, S, T };

bool gate_kind_has_angle(GateKind kind);
std::string_view gate_kind_mnemonic(GateKind kind);

// One gate of a circuit. `control` is used by CNOT only (-1 otherwise);
// `angle` is meaningful for the rotation kinds only and lives in [0, 2*pi).
struct Gate {
    GateKind kind;
    int target = 0;
    int control = -1;
    double angle = 0.0;

    bool has_angle() const { return gate_kind_has_angle(kind); }

    static Gate cnot(int control, int target) { return {GateKind::Cnot, target, control, 0.0}; }
    static Gate rx(int target, double angle) { return {GateKind::Rx, target, -1, angle}; }
    static Gate ry(int target, double angle) { return {GateKind::Ry, target, -1, angle}; }
    static Gate rz(int target, double angle) { return {GateKind::Rz, target, -1, angle}; }
    static Gate h(int target) { return {GateKind::H, target, -1, 0.0}; }
    static Gate s(int target) { return {GateKind::S, target, -1, 0.0}; }
    static Gate t(int target) { return {GateKind::T, target, -1, 0.0}; }

    friend bool operator==(const Gate& a, const Gate& b) = default;
};

// An ordered gate sequence on `n` qubits. Immutable by convention: edits
// return new circuits.
struct Circuit {
    int n = 0;
    std::vector<Gate> gates;

    friend bool operator==(const Circuit& a, const Circuit& b) = default;
};

struct CircuitMetrics {
    int cnot_count = 0;
    int param_count = 0;
    int gate_count = 0;
};

// Throws ErrorCode::CircuitValidity if the gate does not fit an n-qubit
// circuit (bad indices, control==target, angle on a non-rotation kind).
void validate_gate(const Gate& gate, int n);
void validate_circuit(const Circuit& circuit);

// The default search start: H applied to each qubit in qubit order.
Circuit root_circuit(int n);

// Standard layered depth: gates sharing a qubit are sequenced, disjoint
// gates parallelize.
int depth(const Circuit& circuit);

CircuitMetrics metrics(const Circuit& circuit);

// Indices of gates that carry an angle, in circuit order.
std::vector<int> parameterized_positions(const Circuit& circuit);

// Angle vector theta (ordered sub-list of angles over parameterized gates).
std::vector<double> angles(const Circuit& circuit);

// Replaces the angles of the parameterized gates in order; sizes must match.
Circuit with_angles(const Circuit& circuit, const std::vector<double>& theta);

double wrap_angle(double angle);

// Text format, one gate per line after a `qubits <n>` header:
//   h <q> | s <q> | t <q> | cx <control> <target> |
//   rx <q> <angle> | ry <q> <angle> | rz <q> <angle>
// `#` starts a comment. Angles are written with 17 significant digits so
// that parse(serialize(c)) == c bit-exactly.
std::string serialize(const Circuit& circuit);
Circuit parse_circuit(std::string_view text);
Circuit load_circuit_file(const std::string& path);
void save_circuit_file(const Circuit& circuit, const std::string& path);

} // namespace qas
