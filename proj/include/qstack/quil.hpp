#pragma once

// Quil subset:
//
//   NAME[(angle, ...)] q [q]      gate; NAME in I X Y Z H S T RX RY RZ PHASE
//                                 CNOT CZ SWAP (PHASE is U1)
//   MEASURE q [c]                 also accepts MEASURE q ro[c]
//   RESET q
//   IF [c] THEN <gate line>       nonstandard: apply gate iff bit c is 1
//   # comment
//
// Register sizes are not declared; they are 1 + the largest index used.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qstack/circuit.hpp"
#include "qstack/detail/text.hpp"
#include "qstack/error.hpp"

namespace qstack {

namespace quil_detail {

inline std::optional<GateName> gate_from_quil(std::string_view upper) {
    if (upper == "PHASE") {
        return GateName::U1;
    }
    if (upper == "SQRTX" || upper == "U1" || upper == "U2" || upper == "U3") {
        return std::nullopt;
    }
    return gate_name_from_string(upper);
}

inline std::optional<std::string_view> gate_to_quil(GateName name) {
    switch (name) {
    case GateName::SqrtX:
    case GateName::U2:
    case GateName::U3: return std::nullopt;
    case GateName::Rx: return "RX";
    case GateName::Ry: return "RY";
    case GateName::Rz: return "RZ";
    case GateName::U1: return "PHASE";
    default: return to_string(name);
    }
}

class LineParser {
  public:
    LineParser(std::string_view line, std::size_t line_no)
        : line_(line), line_no_(line_no) {}

    /// Parses one non-blank line into an instruction plus the largest qubit
    /// and classical index it mentions.
    Instruction parse(std::optional<std::size_t> &max_qubit,
                      std::optional<std::size_t> &max_clbit) {
        skip_ws();
        const std::size_t kw_col = pos_;
        const std::string word = detail::to_upper(identifier("instruction"));
        if (word == "MEASURE") {
            const Qubit q = index(max_qubit);
            const Clbit c = bracketed_clbit(max_clbit);
            end();
            return Measure{q, c};
        }
        if (word == "RESET") {
            skip_ws();
            if (pos_ >= line_.size()) {
                fail(pos_, "RESET without a qubit is not supported");
            }
            const Qubit q = index(max_qubit);
            end();
            return Reset{q};
        }
        if (word == "IF") {
            const Clbit c = bracketed_clbit(max_clbit);
            skip_ws();
            const std::size_t then_col = pos_;
            if (detail::to_upper(identifier("THEN")) != "THEN") {
                fail(then_col, "expected THEN");
            }
            skip_ws();
            const std::size_t gate_col = pos_;
            const std::string name = detail::to_upper(identifier("gate name"));
            return Conditional{c, true, gate(name, gate_col, max_qubit)};
        }
        return gate(word, kw_col, max_qubit);
    }

    [[noreturn]] void fail(std::size_t offset, const std::string &msg) const {
        throw ParseError(line_no_, offset + 1, msg);
    }

  private:
    void skip_ws() {
        while (pos_ < line_.size() && detail::is_space(line_[pos_])) {
            ++pos_;
        }
    }

    std::string_view identifier(const char *what) {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ >= line_.size() || !detail::is_ident_start(line_[pos_])) {
            fail(pos_, std::string("expected ") + what);
        }
        while (pos_ < line_.size() &&
               detail::is_ident_char(line_[pos_])) {
            ++pos_;
        }
        return line_.substr(start, pos_ - start);
    }

    std::size_t index(std::optional<std::size_t> &max_seen) {
        skip_ws();
        const std::size_t start = pos_;
        const auto v = detail::parse_index(line_, pos_);
        if (!v) {
            fail(start, start < line_.size() && detail::is_digit(line_[start])
                            ? "index too large"
                            : "expected a nonnegative integer index");
        }
        if (pos_ < line_.size() && !detail::is_space(line_[pos_]) &&
            line_[pos_] != ']') {
            fail(pos_, "malformed index");
        }
        max_seen = max_seen ? std::max(*max_seen, *v) : *v;
        return *v;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != c) {
            fail(pos_, std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    Clbit bracketed_clbit(std::optional<std::size_t> &max_clbit) {
        skip_ws();
        // optional register name, e.g. ro[0]; indices are flat either way
        if (pos_ < line_.size() && detail::is_ident_start(line_[pos_])) {
            identifier("register name");
        }
        expect('[');
        const Clbit c = index(max_clbit);
        expect(']');
        return c;
    }

    void end() {
        skip_ws();
        if (pos_ != line_.size()) {
            fail(pos_, "unexpected trailing text");
        }
    }

    GateOp gate(const std::string &name, std::size_t name_col,
                std::optional<std::size_t> &max_qubit) {
        const auto kind = gate_from_quil(name);
        if (!kind) {
            fail(name_col, "unknown gate '" + name + "'");
        }
        std::vector<double> params;
        if (pos_ < line_.size() && line_[pos_] == '(') {
            ++pos_;
            std::size_t start = pos_;
            int nesting = 0;
            while (true) {
                if (pos_ >= line_.size()) {
                    fail(line_.size(), "unterminated parameter list");
                }
                const char c = line_[pos_];
                if (c == '(') {
                    ++nesting;
                } else if ((c == ',' || c == ')') && nesting == 0) {
                    detail::AngleParser angle(
                        line_.substr(start, pos_ - start));
                    const auto v = angle.parse_all();
                    if (!v) {
                        fail(start + angle.error_pos(), "malformed angle");
                    }
                    params.push_back(*v);
                    start = ++pos_;
                    if (c == ')') {
                        break;
                    }
                    continue;
                } else if (c == ')') {
                    --nesting;
                }
                ++pos_;
            }
        }
        if (params.size() != param_arity(*kind)) {
            fail(name_col, name + " takes " +
                               std::to_string(param_arity(*kind)) +
                               " parameter(s), got " +
                               std::to_string(params.size()));
        }
        const Gate g(*kind, params);
        std::vector<Qubit> qubits;
        skip_ws();
        while (pos_ < line_.size()) {
            qubits.push_back(index(max_qubit));
            skip_ws();
        }
        if (qubits.size() != g.num_qubits()) {
            fail(name_col, name + " acts on " +
                               std::to_string(g.num_qubits()) +
                               " qubit(s), got " +
                               std::to_string(qubits.size()));
        }
        return qubits.size() == 1 ? GateOp(g, qubits[0])
                                  : GateOp(g, qubits[0], qubits[1]);
    }

    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

} // namespace quil_detail

/// Parses Quil text into a circuit. Throws ParseError with a 1-based
/// line/column on any malformed input.
inline Circuit parse_quil(std::string_view text) {
    struct Parsed {
        Instruction instr;
        std::size_t line;
        std::size_t column;
    };
    std::vector<Parsed> parsed;
    std::optional<std::size_t> max_qubit;
    std::optional<std::size_t> max_clbit;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t stop = text.find('\n', start);
        if (stop == std::string_view::npos) {
            stop = text.size();
        }
        ++line_no;
        std::string_view line = text.substr(start, stop - start);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::size_t first = 0;
        while (first < line.size() && detail::is_space(line[first])) {
            ++first;
        }
        if (first < line.size()) {
            quil_detail::LineParser parser(line, line_no);
            parsed.push_back(
                {parser.parse(max_qubit, max_clbit), line_no, first + 1});
        }
        start = stop + 1;
    }

    Circuit circuit(max_qubit ? *max_qubit + 1 : 0,
                    max_clbit ? *max_clbit + 1 : 0);
    for (auto &p : parsed) {
        try {
            circuit.append(std::move(p.instr));
        } catch (const CircuitError &e) {
            throw ParseError(p.line, p.column, e.what());
        }
    }
    return circuit;
}

namespace quil_detail {

inline std::string gate_text(const GateOp &op, std::size_t index) {
    const auto name = gate_to_quil(op.gate.name());
    if (!name) {
        throw EmitError(index, "gate " +
                                   std::string(to_string(op.gate.name())) +
                                   " has no Quil spelling");
    }
    std::string out(*name);
    const auto params = op.gate.params();
    if (!params.empty()) {
        out += '(';
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (i) {
                out += ", ";
            }
            out += detail::format_double(params[i]);
        }
        out += ')';
    }
    for (Qubit q : op.targets()) {
        out += ' ';
        out += std::to_string(q);
    }
    return out;
}

} // namespace quil_detail

/// One instruction per line, newline-terminated. Throws EmitError naming the
/// instruction index for constructs outside the Quil subset.
inline std::string emit_quil(const Circuit &circuit) {
    std::string out;
    const auto &instrs = circuit.instructions();
    for (std::size_t i = 0; i < instrs.size(); ++i) {
        const auto &instr = instrs[i];
        if (const auto *g = std::get_if<GateOp>(&instr)) {
            out += quil_detail::gate_text(*g, i);
        } else if (const auto *m = std::get_if<Measure>(&instr)) {
            out += "MEASURE " + std::to_string(m->qubit) + " [" +
                   std::to_string(m->clbit) + "]";
        } else if (const auto *r = std::get_if<Reset>(&instr)) {
            out += "RESET " + std::to_string(r->qubit);
        } else {
            const auto &c = std::get<Conditional>(instr);
            if (!c.expected) {
                throw EmitError(i, "Quil conditionals can only test for 1");
            }
            out += "IF [" + std::to_string(c.clbit) + "] THEN " +
                   quil_detail::gate_text(c.op, i);
        }
        out += '\n';
    }
    return out;
}

} // namespace qstack
