#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qstack/detail/text.hpp"
#include "qstack/error.hpp"
#include "qstack/gates.hpp"

namespace qstack {

/// Allowed parameter values for one basis gate.
struct FreeParams {
    friend bool operator==(const FreeParams &, const FreeParams &) = default;
};
/// Single angle restricted to integer multiples of pi/2.
struct QuarterPiParams {
    friend bool operator==(const QuarterPiParams &,
                           const QuarterPiParams &) = default;
};
/// Parameters must equal one of the listed values (for single-angle gates)
/// or the list exactly (for multi-angle gates).
struct FixedParams {
    std::vector<double> values;
    friend bool operator==(const FixedParams &, const FixedParams &) = default;
};

using ParamConstraint = std::variant<FreeParams, QuarterPiParams, FixedParams>;

struct BasisGate {
    GateName gate = GateName::I;
    ParamConstraint params = FreeParams{};
    friend bool operator==(const BasisGate &, const BasisGate &) = default;
};

inline constexpr double kAngleTolerance = 1e-9;

/// Angle reduced into (-pi, pi].
inline double wrap_angle(double a) {
    constexpr double two_pi = 2 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) {
        a += two_pi;
    } else if (a > std::numbers::pi) {
        a -= two_pi;
    }
    return a;
}

inline bool is_quarter_pi_multiple(double a, double tol = kAngleTolerance) {
    const double k = a / (std::numbers::pi / 2);
    return std::abs(k - std::round(k)) * (std::numbers::pi / 2) < tol;
}

inline bool satisfies(const ParamConstraint &c, const Gate &g,
                      double tol = kAngleTolerance) {
    const auto p = g.params();
    if (std::holds_alternative<FreeParams>(c)) {
        return true;
    }
    if (std::holds_alternative<QuarterPiParams>(c)) {
        return std::ranges::all_of(
            p, [&](double a) { return is_quarter_pi_multiple(a, tol); });
    }
    const auto &fixed = std::get<FixedParams>(c).values;
    if (p.size() == 1) {
        return std::ranges::any_of(fixed, [&](double v) {
            return std::abs(wrap_angle(p[0] - v)) < tol;
        });
    }
    if (p.size() != fixed.size()) {
        return false;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::abs(wrap_angle(p[i] - fixed[i])) >= tol) {
            return false;
        }
    }
    return true;
}

/// Target instruction-set architecture: basis gates plus coupling graph.
struct Isa {
    std::string name;
    std::size_t num_qubits = 0;
    bool directed = false;
    /// Directed: (control, target) pairs as allowed. Undirected: low index
    /// first, sorted, no duplicates.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<BasisGate> basis;

    [[nodiscard]] const BasisGate *find_basis(GateName g) const {
        const auto it = std::ranges::find(basis, g, &BasisGate::gate);
        return it == basis.end() ? nullptr : &*it;
    }

    [[nodiscard]] bool has_basis(GateName g) const {
        return find_basis(g) != nullptr;
    }

    /// Whether a two-qubit basis gate may act on (a, b) in that order.
    [[nodiscard]] bool allows(std::size_t a, std::size_t b) const {
        if (directed) {
            return std::ranges::find(edges, std::pair{a, b}) != edges.end();
        }
        const auto key = std::minmax(a, b);
        return std::ranges::binary_search(
            edges, std::pair<std::size_t, std::size_t>{key.first, key.second});
    }

    /// Coupled in either direction.
    [[nodiscard]] bool adjacent(std::size_t a, std::size_t b) const {
        return allows(a, b) || allows(b, a);
    }

    /// Sorted neighbour lists of the undirected coupling graph.
    [[nodiscard]] std::vector<std::vector<std::size_t>> neighbours() const {
        std::vector<std::set<std::size_t>> sets(num_qubits);
        for (const auto &[a, b] : edges) {
            sets[a].insert(b);
            sets[b].insert(a);
        }
        std::vector<std::vector<std::size_t>> out(num_qubits);
        for (std::size_t q = 0; q < num_qubits; ++q) {
            out[q].assign(sets[q].begin(), sets[q].end());
        }
        return out;
    }

    friend bool operator==(const Isa &, const Isa &) = default;
};

namespace isa_detail {

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(), text.begin() + offset, '\n'));
}

[[noreturn]] inline void bad(const std::string &where, const std::string &what) {
    throw CompileError("ISA descriptor: " + where + ": " + what);
}

inline std::size_t as_count(const nlohmann::json &j, const std::string &where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        bad(where, "expected a nonnegative integer");
    }
    return j.get<std::size_t>();
}

} // namespace isa_detail

/// Parses a JSON descriptor. Syntax errors report the line; semantic errors
/// report the offending field.
inline Isa parse_isa_json(std::string_view text) {
    using nlohmann::json;
    using isa_detail::bad;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw CompileError(
            "ISA descriptor: line " +
            std::to_string(isa_detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) +
            ": malformed JSON");
    }
    if (!doc.is_object()) {
        bad("<root>", "expected an object");
    }
    for (const char *field : {"name", "num_qubits", "directed", "edges", "basis"}) {
        if (!doc.contains(field)) {
            bad(field, "missing field");
        }
    }
    Isa isa;
    if (!doc["name"].is_string()) {
        bad("name", "expected a string");
    }
    isa.name = doc["name"].get<std::string>();
    isa.num_qubits = isa_detail::as_count(doc["num_qubits"], "num_qubits");
    if (!doc["directed"].is_boolean()) {
        bad("directed", "expected a boolean");
    }
    isa.directed = doc["directed"].get<bool>();

    const json &edges = doc["edges"];
    if (!edges.is_array()) {
        bad("edges", "expected an array");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        const json &e = edges[i];
        if (!e.is_array() || e.size() != 2) {
            bad(where, "expected a two-element array");
        }
        const std::size_t a = isa_detail::as_count(e[0], where);
        const std::size_t b = isa_detail::as_count(e[1], where);
        if (a >= isa.num_qubits || b >= isa.num_qubits) {
            bad(where, "endpoint out of range for " +
                           std::to_string(isa.num_qubits) + " qubits");
        }
        if (a == b) {
            bad(where, "self-loop");
        }
        if (isa.directed) {
            if (std::ranges::find(isa.edges, std::pair{a, b}) == isa.edges.end()) {
                isa.edges.emplace_back(a, b);
            }
        } else {
            isa.edges.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    if (!isa.directed) {
        std::ranges::sort(isa.edges);
        const auto dup = std::ranges::unique(isa.edges);
        isa.edges.erase(dup.begin(), dup.end());
    }

    const json &basis = doc["basis"];
    if (!basis.is_array() || basis.empty()) {
        bad("basis", "expected a nonempty array");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const std::string where = "basis[" + std::to_string(i) + "]";
        const json &b = basis[i];
        if (!b.is_object() || !b.contains("gate") || !b["gate"].is_string()) {
            bad(where, "expected {\"gate\": name, \"params\": ...}");
        }
        const auto g = gate_name_from_string(b["gate"].get<std::string>());
        if (!g) {
            bad(where, "unknown gate '" + b["gate"].get<std::string>() + "'");
        }
        BasisGate entry{*g, FreeParams{}};
        if (b.contains("params")) {
            const json &p = b["params"];
            if (p.is_string() && p.get<std::string>() == "free") {
                entry.params = FreeParams{};
            } else if (p.is_string() && p.get<std::string>() == "quarter-pi") {
                entry.params = QuarterPiParams{};
            } else if (p.is_array() &&
                       std::ranges::all_of(p, [](const json &v) {
                           return v.is_number();
                       })) {
                entry.params = FixedParams{p.get<std::vector<double>>()};
            } else {
                bad(where + ".params",
                    "expected \"free\", \"quarter-pi\" or an array of numbers");
            }
        }
        if (isa.has_basis(*g)) {
            bad(where, "duplicate basis gate");
        }
        isa.basis.push_back(std::move(entry));
    }
    return isa;
}

inline std::string to_json(const Isa &isa) {
    nlohmann::ordered_json doc;
    doc["name"] = isa.name;
    doc["num_qubits"] = isa.num_qubits;
    doc["directed"] = isa.directed;
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto &[a, b] : isa.edges) {
        doc["edges"].push_back({a, b});
    }
    doc["basis"] = nlohmann::ordered_json::array();
    for (const auto &b : isa.basis) {
        nlohmann::ordered_json entry;
        entry["gate"] = std::string(to_string(b.gate));
        if (std::holds_alternative<FreeParams>(b.params)) {
            entry["params"] = "free";
        } else if (std::holds_alternative<QuarterPiParams>(b.params)) {
            entry["params"] = "quarter-pi";
        } else {
            entry["params"] = std::get<FixedParams>(b.params).values;
        }
        doc["basis"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

/// Descriptor text of the builtin ISAs, identical to data/isa/*.json.
///
/// agave: 8-qubit nearest-neighbour ring, {Rx(k*pi/2), Rz, CZ}.
/// ibmqx5: 16 qubits, directed CNOT coupling map, {U1, U2, U3, CNOT}.
inline std::string_view builtin_isa_text(std::string_view name) {
    static constexpr std::string_view agave = R"({
  "name": "agave",
  "num_qubits": 8,
  "directed": false,
  "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 6], [6, 7], [7, 0]],
  "basis": [
    {"gate": "Rx", "params": "quarter-pi"},
    {"gate": "Rz", "params": "free"},
    {"gate": "CZ", "params": "free"}
  ]
}
)";
    static constexpr std::string_view ibmqx5 = R"({
  "name": "ibmqx5",
  "num_qubits": 16,
  "directed": true,
  "edges": [
    [1, 0], [1, 2], [2, 3], [3, 4], [3, 14], [5, 4], [6, 5], [6, 7],
    [6, 11], [7, 10], [8, 7], [9, 8], [9, 10], [11, 10], [12, 5], [12, 11],
    [12, 13], [13, 4], [13, 14], [15, 0], [15, 2], [15, 14]
  ],
  "basis": [
    {"gate": "U1", "params": "free"},
    {"gate": "U2", "params": "free"},
    {"gate": "U3", "params": "free"},
    {"gate": "CNOT", "params": "free"}
  ]
}
)";
    const std::string lower = [&] {
        std::string s(name);
        for (char &c : s) {
            if (c >= 'A' && c <= 'Z') {
                c = static_cast<char>(c - 'A' + 'a');
            }
        }
        return s;
    }();
    if (lower == "agave") {
        return agave;
    }
    if (lower == "ibmqx5") {
        return ibmqx5;
    }
    return {};
}

/// Directories listed in QSTACK_ISA_PATH (colon-separated).
inline std::vector<std::filesystem::path> isa_search_path_from_env() {
    std::vector<std::filesystem::path> dirs;
    const char *env = std::getenv("QSTACK_ISA_PATH");
    if (env == nullptr) {
        return dirs;
    }
    std::string_view rest(env);
    while (!rest.empty()) {
        const auto colon = rest.find(':');
        const auto part = rest.substr(0, colon);
        if (!part.empty()) {
            dirs.emplace_back(std::string(part));
        }
        if (colon == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(colon + 1);
    }
    return dirs;
}

/// Resolves a builtin name ("agave", "ibmqx5"), a descriptor file path, or a
/// name found as <dir>/<name> or <dir>/<name>.json in `search_path`.
inline Isa load_isa(std::string_view descriptor,
                    const std::vector<std::filesystem::path> &search_path = {}) {
    if (const auto text = builtin_isa_text(descriptor); !text.empty()) {
        return parse_isa_json(text);
    }
    const auto read = [](const std::filesystem::path &p) {
        std::ifstream in(p);
        if (!in) {
            throw CompileError("cannot read ISA descriptor " + p.string());
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        try {
            return parse_isa_json(ss.str());
        } catch (const CompileError &e) {
            throw CompileError(p.string() + ": " + e.what());
        }
    };
    const std::filesystem::path direct{std::string(descriptor)};
    std::error_code ec;
    if (std::filesystem::is_regular_file(direct, ec)) {
        return read(direct);
    }
    for (const auto &dir : search_path) {
        for (const auto &candidate :
             {dir / direct, dir / (std::string(descriptor) + ".json")}) {
            if (std::filesystem::is_regular_file(candidate, ec)) {
                return read(candidate);
            }
        }
    }
    throw CompileError("unknown ISA '" + std::string(descriptor) + "'");
}

} // namespace qstack
