#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "qstack/circuit.hpp"
#include "qstack/detail/text.hpp"

namespace qstack {

namespace draw_detail {

// Display width in code points (input is UTF-8).
inline std::size_t width_of(const std::string &s) {
    return static_cast<std::size_t>(std::ranges::count_if(
        s, [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

inline std::string angle_text(double a) {
    std::string s = detail::format_fixed(a, 3);
    while (s.back() == '0') {
        s.pop_back();
    }
    if (s.back() == '.') {
        s.pop_back();
    }
    return s == "-0" ? "0" : s;
}

inline std::string gate_label(const Gate &g) {
    std::string s(to_string(g.name()));
    if (!g.params().empty()) {
        s += '(';
        for (std::size_t i = 0; i < g.params().size(); ++i) {
            if (i > 0) {
                s += ',';
            }
            s += angle_text(g.params()[i]);
        }
        s += ')';
    }
    return s;
}

// Cells for one gate; `suffix` marks a classical condition.
inline void gate_cells(const GateOp &op, const std::string &suffix,
                       std::vector<std::string> &cells) {
    const auto span = op.targets();
    if (span.size() == 1) {
        cells[span[0]] = "[" + gate_label(op.gate) + suffix + "]";
        return;
    }
    const Qubit a = span[0];
    const Qubit b = span[1];
    for (Qubit q = std::min(a, b) + 1; q < std::max(a, b); ++q) {
        cells[q] = "|";
    }
    switch (op.gate.name()) {
    case GateName::CNOT:
        cells[a] = "*" + suffix;
        cells[b] = "[X]";
        break;
    case GateName::CZ:
        cells[a] = "*" + suffix;
        cells[b] = "*";
        break;
    case GateName::SWAP:
        cells[a] = "x" + suffix;
        cells[b] = "x";
        break;
    default:
        cells[a] = "[" + gate_label(op.gate) + suffix + "]";
        cells[b] = "[" + gate_label(op.gate) + "]";
        break;
    }
}

} // namespace draw_detail

/// Text diagram: one row per qubit, one column per layer. Two-qubit gates
/// occupy every row between their operands so the connector stays visible.
/// Measurements read "M→cK"; conditioned gates carry "?cK".
inline std::string draw_ascii(const Circuit &circuit) {
    const std::size_t nq = circuit.num_qubits();
    std::vector<std::size_t> qubit_free(nq, 0);
    std::vector<std::size_t> clbit_free(circuit.num_clbits(), 0);
    std::vector<std::vector<std::string>> columns;

    for (const auto &instr : circuit.instructions()) {
        const auto qs = qubits_of(instr);
        const Qubit lo = *std::ranges::min_element(qs);
        const Qubit hi = *std::ranges::max_element(qs);
        std::size_t col = 0;
        for (Qubit q = lo; q <= hi; ++q) {
            col = std::max(col, qubit_free[q]);
        }
        if (const auto c = clbit_of(instr)) {
            col = std::max(col, clbit_free[*c]);
        }
        for (Qubit q = lo; q <= hi; ++q) {
            qubit_free[q] = col + 1;
        }
        if (const auto c = clbit_of(instr)) {
            clbit_free[*c] = col + 1;
        }
        if (col == columns.size()) {
            columns.emplace_back(nq);
        }
        auto &cells = columns[col];
        if (const auto *g = std::get_if<GateOp>(&instr)) {
            draw_detail::gate_cells(*g, "", cells);
        } else if (const auto *m = std::get_if<Measure>(&instr)) {
            cells[m->qubit] = "[M→c" + std::to_string(m->clbit) + "]";
        } else if (const auto *r = std::get_if<Reset>(&instr)) {
            cells[r->qubit] = "[|0>]";
        } else {
            const auto &c = std::get<Conditional>(instr);
            std::string suffix = "?c" + std::to_string(c.clbit);
            if (!c.expected) {
                suffix += "=0";
            }
            draw_detail::gate_cells(c.op, suffix, cells);
        }
    }

    std::vector<std::string> labels(nq);
    std::size_t label_width = 0;
    for (Qubit q = 0; q < nq; ++q) {
        labels[q] = "q" + std::to_string(q) + ":";
        label_width = std::max(label_width, labels[q].size());
    }
    std::vector<std::size_t> widths;
    for (const auto &col : columns) {
        std::size_t w = 1;
        for (const auto &cell : col) {
            w = std::max(w, draw_detail::width_of(cell));
        }
        widths.push_back(w);
    }

    std::string out;
    for (Qubit q = 0; q < nq; ++q) {
        out += labels[q];
        if (!columns.empty()) {
            out += std::string(label_width - labels[q].size() + 1, ' ');
        }
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const std::string &cell = columns[c][q];
            const std::size_t pad = widths[c] - draw_detail::width_of(cell);
            out += "--";
            out += std::string(pad / 2, '-');
            out += cell;
            out += std::string(pad - pad / 2, '-');
        }
        if (!columns.empty()) {
            out += "--";
        }
        out += '\n';
    }
    return out;
}

} // namespace qstack
