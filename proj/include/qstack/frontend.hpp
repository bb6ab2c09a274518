#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qstack/circuit.hpp"
#include "qstack/qasm.hpp"
#include "qstack/quil.hpp"

namespace qstack {

enum class Dialect { Quil, OpenQASM };

inline std::string_view to_string(Dialect d) noexcept {
    return d == Dialect::Quil ? "quil" : "qasm";
}

struct SourceText {
    std::string text;
    Dialect dialect = Dialect::Quil;
};

/// Accepts "quil" or "qasm"/"openqasm", case-insensitively.
inline std::optional<Dialect> dialect_from_name(std::string_view name) {
    const std::string upper = detail::to_upper(name);
    if (upper == "QUIL") {
        return Dialect::Quil;
    }
    if (upper == "QASM" || upper == "OPENQASM") {
        return Dialect::OpenQASM;
    }
    return std::nullopt;
}

/// Dialect implied by a .quil or .qasm extension; nullopt otherwise.
inline std::optional<Dialect> dialect_from_path(const std::filesystem::path &p) {
    const std::string ext = detail::to_upper(p.extension().string());
    if (ext == ".QUIL") {
        return Dialect::Quil;
    }
    if (ext == ".QASM") {
        return Dialect::OpenQASM;
    }
    return std::nullopt;
}

inline Circuit parse(const SourceText &src) {
    return src.dialect == Dialect::Quil ? parse_quil(src.text)
                                        : parse_qasm(src.text);
}

inline SourceText emit(const Circuit &circuit, Dialect dialect) {
    return {dialect == Dialect::Quil ? emit_quil(circuit) : emit_qasm(circuit),
            dialect};
}

} // namespace qstack
