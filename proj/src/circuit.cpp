#include "qas/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qas {

bool gate_kind_has_angle(GateKind kind) {
    switch (kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
        return true;
    default:
        return false;
    }
}

std::string_view gate_kind_mnemonic(GateKind kind) {
    switch (kind) {
    case GateKind::Cnot: return "cx";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::T: return "t";
    }
    raise(ErrorCode::Internal, "unknown gate kind");
}

void validate_gate(const Gate& gate, int n) {
    if (gate.target < 0 || gate.target >= n)
        raise(ErrorCode::CircuitValidity,
              "gate target " + std::to_string(gate.target) + " out of range for " +
                  std::to_string(n) + " qubits");
    if (gate.kind == GateKind::Cnot) {
        if (gate.control < 0 || gate.control >= n)
            raise(ErrorCode::CircuitValidity,
                  "cnot control " + std::to_string(gate.control) + " out of range");
        if (gate.control == gate.target)
            raise(ErrorCode::CircuitValidity, "cnot control equals target");
    } else if (gate.control != -1) {
        raise(ErrorCode::CircuitValidity, "control set on a single-qubit gate");
    }
    if (gate.has_angle()) {
        if (!std::isfinite(gate.angle))
            raise(ErrorCode::CircuitValidity, "non-finite rotation angle");
    } else if (gate.angle != 0.0) {
        raise(ErrorCode::CircuitValidity, "angle set on a non-parameterized gate");
    }
}

void validate_circuit(const Circuit& circuit) {
    if (circuit.n < 1)
        raise(ErrorCode::Config, "circuit qubit count must be >= 1");
    for (const Gate& g : circuit.gates)
        validate_gate(g, circuit.n);
}

Circuit root_circuit(int n) {
    if (n < 1)
        raise(ErrorCode::Config, "qubit count must be >= 1");
    Circuit c;
    c.n = n;
    c.gates.reserve(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q)
        c.gates.push_back(Gate::h(q));
    return c;
}

int depth(const Circuit& circuit) {
    std::vector<int> qubit_depth(static_cast<std::size_t>(circuit.n), 0);
    int result = 0;
    for (const Gate& g : circuit.gates) {
        int d = qubit_depth[static_cast<std::size_t>(g.target)];
        if (g.kind == GateKind::Cnot)
            d = std::max(d, qubit_depth[static_cast<std::size_t>(g.control)]);
        ++d;
        qubit_depth[static_cast<std::size_t>(g.target)] = d;
        if (g.kind == GateKind::Cnot)
            qubit_depth[static_cast<std::size_t>(g.control)] = d;
        result = std::max(result, d);
    }
    return result;
}

CircuitMetrics metrics(const Circuit& circuit) {
    CircuitMetrics m;
    m.gate_count = static_cast<int>(circuit.gates.size());
    for (const Gate& g : circuit.gates) {
        if (g.kind == GateKind::Cnot)
            ++m.cnot_count;
        if (g.has_angle())
            ++m.param_count;
    }
    return m;
}

std::vector<int> parameterized_positions(const Circuit& circuit) {
    std::vector<int> positions;
    for (int i = 0; i < static_cast<int>(circuit.gates.size()); ++i)
        if (circuit.gates[static_cast<std::size_t>(i)].has_angle())
            positions.push_back(i);
    return positions;
}

std::vector<double> angles(const Circuit& circuit) {
    std::vector<double> theta;
    for (const Gate& g : circuit.gates)
        if (g.has_angle())
            theta.push_back(g.angle);
    return theta;
}

Circuit with_angles(const Circuit& circuit, const std::vector<double>& theta) {
    Circuit out = circuit;
    std::size_t k = 0;
    for (Gate& g : out.gates)
        if (g.has_angle()) {
            if (k >= theta.size())
                raise(ErrorCode::Optimizer, "angle vector shorter than parameter count");
            g.angle = theta[k++];
        }
    if (k != theta.size())
        raise(ErrorCode::Optimizer, "angle vector longer than parameter count");
    return out;
}

double wrap_angle(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0)
        a += kTwoPi;
    // fmod can land exactly on 2*pi after the correction above
    if (a >= kTwoPi)
        a -= kTwoPi;
    return a;
}

namespace {

void append_angle(std::string& out, double angle) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", angle);
    out += buf;
}

[[noreturn]] void parse_fail(int line, int column, const std::string& message) {
    raise(ErrorCode::Parse,
          "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message);
}

struct LineLexer {
    std::string_view text;
    int line_no;
    std::size_t pos = 0;

    void skip_spaces() {
        while (pos < text.size() &&
               (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r'))
            ++pos;
    }

    int column() const { return static_cast<int>(pos) + 1; }

    bool at_end() {
        skip_spaces();
        return pos >= text.size() || text[pos] == '#';
    }

    std::string_view token(const char* what) {
        skip_spaces();
        if (pos >= text.size() || text[pos] == '#')
            parse_fail(line_no, column(), std::string("expected ") + what);
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        return text.substr(start, pos - start);
    }

    int integer(const char* what) {
        int col = (skip_spaces(), column());
        std::string_view tok = token(what);
        int value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            parse_fail(line_no, col, std::string("expected integer ") + what);
        return value;
    }

    double real(const char* what) {
        int col = (skip_spaces(), column());
        std::string_view tok = token(what);
        // from_chars for double is unreliable pre-gcc11 for all formats; strtod is fine here
        std::string owned(tok);
        char* end = nullptr;
        double value = std::strtod(owned.c_str(), &end);
        if (end != owned.c_str() + owned.size() || !std::isfinite(value))
            parse_fail(line_no, col, std::string("expected real number ") + what);
        return value;
    }

    void expect_end() {
        skip_spaces();
        if (pos < text.size() && text[pos] != '#')
            parse_fail(line_no, column(), "unexpected trailing text");
    }
};

} // namespace

std::string serialize(const Circuit& circuit) {
    std::string out = "qubits " + std::to_string(circuit.n) + "\n";
    for (const Gate& g : circuit.gates) {
        out += gate_kind_mnemonic(g.kind);
        out += ' ';
        if (g.kind == GateKind::Cnot) {
            out += std::to_string(g.control);
            out += ' ';
            out += std::to_string(g.target);
        } else {
            out += std::to_string(g.target);
            if (g.has_angle()) {
                out += ' ';
                append_angle(out, g.angle);
            }
        }
        out += '\n';
    }
    return out;
}

Circuit parse_circuit(std::string_view text) {
    Circuit circuit;
    bool seen_header = false;
    int line_no = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        std::size_t eol = text.find('\n', offset);
        std::string_view line = text.substr(offset, eol == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : eol - offset);
        offset = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        LineLexer lex{line, line_no};
        if (lex.at_end())
            continue;
        std::string_view head = lex.token("directive or gate mnemonic");
        if (!seen_header) {
            if (head != "qubits")
                parse_fail(line_no, 1, "expected `qubits <n>` header");
            circuit.n = lex.integer("qubit count");
            if (circuit.n < 1)
                parse_fail(line_no, 1, "qubit count must be >= 1");
            lex.expect_end();
            seen_header = true;
            continue;
        }

        Gate g{};
        if (head == "h" || head == "s" || head == "t") {
            g.kind = head == "h" ? GateKind::H : head == "s" ? GateKind::S : GateKind::T;
            g.target = lex.integer("qubit index");
        } else if (head == "cx") {
            g.kind = GateKind::Cnot;
            g.control = lex.integer("control index");
            g.target = lex.integer("target index");
        } else if (head == "rx" || head == "ry" || head == "rz") {
            g.kind = head == "rx" ? GateKind::Rx : head == "ry" ? GateKind::Ry : GateKind::Rz;
            g.target = lex.integer("qubit index");
            g.angle = lex.real("angle");
        } else {
            parse_fail(line_no, 1, "unknown gate mnemonic `" + std::string(head) + "`");
        }
        lex.expect_end();
        try {
            validate_gate(g, circuit.n);
        } catch (const Error& e) {
            parse_fail(line_no, 1, e.what());
        }
        circuit.gates.push_back(g);
    }
    if (!seen_header)
        raise(ErrorCode::Parse, "line 1, column 1: missing `qubits <n>` header");
    return circuit;
}

Circuit load_circuit_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorCode::Io, "cannot open circuit file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_circuit(buf.str());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse)
            raise(ErrorCode::Parse, path + ": " + e.what());
        throw;
    }
}

void save_circuit_file(const Circuit& circuit, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(ErrorCode::Io, "cannot write circuit file: " + path);
    out << serialize(circuit);
    if (!out)
        raise(ErrorCode::Io, "write failed: " + path);
}

} // namespace qas
