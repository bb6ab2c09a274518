#pragma once

// OpenQASM 2.0 subset.
//
// Accepted: the OPENQASM 2.0 header, include lines (ignored), any number of
// qreg/creg declarations (flattened in declaration order), the gates
// id x y z h s t sx rx ry rz u1 u2 u3 U cx CX cz swap, measure, reset,
// barrier (ignored), register broadcast, and single-bit conditionals
// `if(c==v)` on a one-bit register or `if(c[k]==v)`.
// Rejected: gate/opaque definitions and multi-bit register conditions.
//
// Emission writes `qreg q0[n]; creg c0[m];`. When the circuit contains
// conditionals the classical register is split into one-bit registers
// c0..c{m-1} so that `if(cK==1)` keeps its standard register semantics.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qstack/circuit.hpp"
#include "qstack/detail/text.hpp"
#include "qstack/error.hpp"

namespace qstack {

namespace qasm_detail {

inline std::optional<GateName> gate_from_qasm(std::string_view name) {
    static const std::unordered_map<std::string_view, GateName> table{
        {"id", GateName::I},   {"x", GateName::X},     {"y", GateName::Y},
        {"z", GateName::Z},    {"h", GateName::H},     {"s", GateName::S},
        {"t", GateName::T},    {"sx", GateName::SqrtX}, {"rx", GateName::Rx},
        {"ry", GateName::Ry},  {"rz", GateName::Rz},   {"u1", GateName::U1},
        {"u2", GateName::U2},  {"u3", GateName::U3},   {"U", GateName::U3},
        {"cx", GateName::CNOT}, {"CX", GateName::CNOT}, {"cz", GateName::CZ},
        {"swap", GateName::SWAP}};
    const auto it = table.find(name);
    if (it == table.end()) {
        return std::nullopt;
    }
    return it->second;
}

inline std::string_view gate_to_qasm(GateName name) {
    switch (name) {
    case GateName::I: return "id";
    case GateName::X: return "x";
    case GateName::Y: return "y";
    case GateName::Z: return "z";
    case GateName::H: return "h";
    case GateName::S: return "s";
    case GateName::T: return "t";
    case GateName::SqrtX: return "sx";
    case GateName::Rx: return "rx";
    case GateName::Ry: return "ry";
    case GateName::Rz: return "rz";
    case GateName::U1: return "u1";
    case GateName::U2: return "u2";
    case GateName::U3: return "u3";
    case GateName::CNOT: return "cx";
    case GateName::CZ: return "cz";
    case GateName::SWAP: return "swap";
    }
    return "?";
}

enum class Tok { Ident, Int, Real, String, Symbol, End };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    std::size_t offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token t;
        t.offset = pos_;
        t.line = line_;
        t.column = pos_ - line_start_ + 1;
        if (pos_ >= src_.size()) {
            t.kind = Tok::End;
            return t;
        }
        const char c = src_[pos_];
        const std::size_t start = pos_;
        if (detail::is_ident_start(c)) {
            while (pos_ < src_.size() && detail::is_ident_char(src_[pos_])) {
                ++pos_;
            }
            t.kind = Tok::Ident;
        } else if (detail::is_digit(c) || c == '.') {
            bool real = false;
            while (pos_ < src_.size() &&
                   (detail::is_digit(src_[pos_]) || src_[pos_] == '.')) {
                real = real || src_[pos_] == '.';
                ++pos_;
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                real = true;
                ++pos_;
                if (pos_ < src_.size() &&
                    (src_[pos_] == '+' || src_[pos_] == '-')) {
                    ++pos_;
                }
                while (pos_ < src_.size() && detail::is_digit(src_[pos_])) {
                    ++pos_;
                }
            }
            t.kind = real ? Tok::Real : Tok::Int;
        } else if (c == '"') {
            ++pos_;
            while (pos_ < src_.size() && src_[pos_] != '"' &&
                   src_[pos_] != '\n') {
                ++pos_;
            }
            if (pos_ >= src_.size() || src_[pos_] != '"') {
                throw ParseError(t.line, t.column, "unterminated string");
            }
            ++pos_;
            t.kind = Tok::String;
        } else if ((c == '-' && peek(1) == '>') || (c == '=' && peek(1) == '=')) {
            pos_ += 2;
            t.kind = Tok::Symbol;
        } else if (std::string_view(";,()[]{}+-*/^").find(c) !=
                   std::string_view::npos) {
            ++pos_;
            t.kind = Tok::Symbol;
        } else {
            throw ParseError(t.line, t.column,
                             "unexpected character '" + std::string(1, c) + "'");
        }
        t.text = src_.substr(start, pos_ - start);
        return t;
    }

  private:
    [[nodiscard]] char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') {
                ++pos_;
                ++line_;
                line_start_ = pos_;
            } else if (detail::is_space(c)) {
                ++pos_;
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t line_start_ = 0;
};

struct Register {
    std::size_t offset = 0;
    std::size_t size = 0;
};

/// A reference to a whole register or one element of it.
struct Operand {
    std::string name;
    std::optional<std::size_t> index;
    Token at;
};

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src), lexer_(src) {
        advance();
    }

    Circuit parse() {
        header();
        while (cur_.kind != Tok::End) {
            statement();
        }
        Circuit circuit(num_qubits_, num_clbits_);
        for (auto &[instr, tok] : body_) {
            try {
                circuit.append(std::move(instr));
            } catch (const CircuitError &e) {
                fail(tok, e.what());
            }
        }
        return circuit;
    }

  private:
    [[noreturn]] static void fail(const Token &t, const std::string &msg) {
        throw ParseError(t.line, t.column, msg);
    }

    void advance() { cur_ = lexer_.next(); }

    bool at_symbol(std::string_view s) const {
        return cur_.kind == Tok::Symbol && cur_.text == s;
    }

    Token expect_symbol(std::string_view s) {
        if (!at_symbol(s)) {
            fail(cur_, "expected '" + std::string(s) + "'");
        }
        Token t = cur_;
        advance();
        return t;
    }

    Token expect_ident(const char *what) {
        if (cur_.kind != Tok::Ident) {
            fail(cur_, std::string("expected ") + what);
        }
        Token t = cur_;
        advance();
        return t;
    }

    std::size_t expect_int() {
        if (cur_.kind != Tok::Int) {
            fail(cur_, "expected an integer");
        }
        std::size_t pos = 0;
        const auto v = detail::parse_index(cur_.text, pos);
        if (!v || pos != cur_.text.size()) {
            fail(cur_, "integer out of range");
        }
        advance();
        return *v;
    }

    void header() {
        if (cur_.kind != Tok::Ident || cur_.text != "OPENQASM") {
            fail(cur_, "missing 'OPENQASM 2.0;' header");
        }
        advance();
        if ((cur_.kind != Tok::Real && cur_.kind != Tok::Int) ||
            (cur_.text != "2.0" && cur_.text != "2")) {
            fail(cur_, "unsupported OpenQASM version (expected 2.0)");
        }
        advance();
        expect_symbol(";");
    }

    void statement() {
        const Token head = cur_;
        if (head.kind != Tok::Ident) {
            fail(head, "expected a statement");
        }
        const std::string_view word = head.text;
        if (word == "include") {
            advance();
            if (cur_.kind != Tok::String) {
                fail(cur_, "expected a file name string");
            }
            advance();
            expect_symbol(";");
        } else if (word == "qreg" || word == "creg") {
            advance();
            declaration(word == "qreg");
        } else if (word == "gate" || word == "opaque") {
            fail(head, "gate definitions are not supported");
        } else if (word == "barrier") {
            advance();
            operands(qregs_, "quantum register");
            expect_symbol(";");
        } else if (word == "measure") {
            advance();
            measure();
        } else if (word == "reset") {
            advance();
            const auto ops = operands(qregs_, "quantum register");
            if (ops.size() != 1) {
                fail(head, "reset takes one operand");
            }
            for (Qubit q : expand(ops[0], qregs_)) {
                body_.emplace_back(Reset{q}, head);
            }
            expect_symbol(";");
        } else if (word == "if") {
            advance();
            conditional();
        } else {
            gate_call(std::nullopt);
        }
    }

    void declaration(bool quantum) {
        const Token name = expect_ident("register name");
        expect_symbol("[");
        const Token size_tok = cur_;
        const std::size_t size = expect_int();
        expect_symbol("]");
        expect_symbol(";");
        if (size == 0) {
            fail(size_tok, "register size must be positive");
        }
        const std::string key(name.text);
        if (qregs_.contains(key) || cregs_.contains(key)) {
            fail(name, "register '" + key + "' already declared");
        }
        std::size_t &total = quantum ? num_qubits_ : num_clbits_;
        if (total + size > detail::kMaxIndex) {
            fail(size_tok, "register too large");
        }
        (quantum ? qregs_ : cregs_)[key] = Register{total, size};
        total += size;
    }

    Operand operand(const std::unordered_map<std::string, Register> &regs,
                    const char *what) {
        const Token name = expect_ident(what);
        Operand op{std::string(name.text), std::nullopt, name};
        const auto it = regs.find(op.name);
        if (it == regs.end()) {
            fail(name, "undeclared " + std::string(what) + " '" + op.name + "'");
        }
        if (at_symbol("[")) {
            advance();
            const Token idx_tok = cur_;
            op.index = expect_int();
            expect_symbol("]");
            if (*op.index >= it->second.size) {
                fail(idx_tok, "index " + std::to_string(*op.index) +
                                  " out of range for register '" + op.name +
                                  "'");
            }
        }
        return op;
    }

    std::vector<Operand>
    operands(const std::unordered_map<std::string, Register> &regs,
             const char *what) {
        std::vector<Operand> ops;
        ops.push_back(operand(regs, what));
        while (at_symbol(",")) {
            advance();
            ops.push_back(operand(regs, what));
        }
        return ops;
    }

    static std::vector<std::size_t>
    expand(const Operand &op,
           const std::unordered_map<std::string, Register> &regs) {
        const Register &r = regs.at(op.name);
        if (op.index) {
            return {r.offset + *op.index};
        }
        std::vector<std::size_t> out(r.size);
        for (std::size_t i = 0; i < r.size; ++i) {
            out[i] = r.offset + i;
        }
        return out;
    }

    /// Broadcast width of an operand list: 1 if all indexed, else the common
    /// size of the whole-register operands.
    static std::size_t
    broadcast_width(const std::vector<Operand> &ops,
                    const std::unordered_map<std::string, Register> &regs,
                    const Token &at) {
        std::size_t width = 1;
        bool seen_whole = false;
        for (const auto &op : ops) {
            if (op.index) {
                continue;
            }
            const std::size_t size = regs.at(op.name).size;
            if (seen_whole && size != width) {
                fail(at, "register size mismatch in broadcast");
            }
            width = size;
            seen_whole = true;
        }
        return width;
    }

    static std::size_t element(const Operand &op,
                               const std::unordered_map<std::string, Register> &regs,
                               std::size_t k) {
        const Register &r = regs.at(op.name);
        return r.offset + (op.index ? *op.index : k);
    }

    void measure() {
        const Token head = cur_;
        Operand q = operand(qregs_, "quantum register");
        expect_symbol("->");
        Operand c = operand(cregs_, "classical register");
        expect_symbol(";");
        const bool qwhole = !q.index;
        const bool cwhole = !c.index;
        if (qwhole != cwhole) {
            fail(head, "measure mixes a register and a single bit");
        }
        const std::size_t qn = qwhole ? qregs_.at(q.name).size : 1;
        const std::size_t cn = cwhole ? cregs_.at(c.name).size : 1;
        if (qn != cn) {
            fail(head, "measure register sizes differ");
        }
        for (std::size_t k = 0; k < qn; ++k) {
            body_.emplace_back(
                Measure{element(q, qregs_, k), element(c, cregs_, k)}, head);
        }
    }

    void conditional() {
        expect_symbol("(");
        const Token name = expect_ident("classical register");
        const auto it = cregs_.find(std::string(name.text));
        if (it == cregs_.end()) {
            fail(name, "undeclared classical register '" +
                           std::string(name.text) + "'");
        }
        Clbit bit = it->second.offset;
        if (at_symbol("[")) {
            advance();
            const Token idx_tok = cur_;
            const std::size_t idx = expect_int();
            expect_symbol("]");
            if (idx >= it->second.size) {
                fail(idx_tok, "index out of range");
            }
            bit += idx;
        } else if (it->second.size != 1) {
            fail(name, "multi-bit register conditions are not supported");
        }
        expect_symbol("==");
        const Token value_tok = cur_;
        const std::size_t value = expect_int();
        if (value > 1) {
            fail(value_tok, "single-bit condition must compare with 0 or 1");
        }
        expect_symbol(")");
        gate_call(Conditional{bit, value == 1, {}});
    }

    void gate_call(std::optional<Conditional> cond) {
        const Token name = expect_ident("gate name");
        const auto kind = gate_from_qasm(name.text);
        if (!kind) {
            fail(name, "unknown gate '" + std::string(name.text) + "'");
        }
        std::vector<double> params;
        if (at_symbol("(")) {
            advance();
            if (!at_symbol(")")) {
                params.push_back(angle());
                while (at_symbol(",")) {
                    advance();
                    params.push_back(angle());
                }
            }
            expect_symbol(")");
        }
        if (params.size() != param_arity(*kind)) {
            fail(name, std::string(name.text) + " takes " +
                           std::to_string(param_arity(*kind)) +
                           " parameter(s), got " +
                           std::to_string(params.size()));
        }
        const Gate g(*kind, params);
        const auto ops = operands(qregs_, "quantum register");
        expect_symbol(";");
        if (ops.size() != g.num_qubits()) {
            fail(name, std::string(name.text) + " acts on " +
                           std::to_string(g.num_qubits()) +
                           " qubit(s), got " + std::to_string(ops.size()));
        }
        const std::size_t width = broadcast_width(ops, qregs_, name);
        for (std::size_t k = 0; k < width; ++k) {
            GateOp op = ops.size() == 1
                            ? GateOp(g, element(ops[0], qregs_, k))
                            : GateOp(g, element(ops[0], qregs_, k),
                                     element(ops[1], qregs_, k));
            if (cond) {
                Conditional c = *cond;
                c.op = op;
                body_.emplace_back(c, name);
            } else {
                body_.emplace_back(op, name);
            }
        }
    }

    /// Collects the tokens of one parameter expression and evaluates them.
    double angle() {
        const Token first = cur_;
        std::size_t nesting = 0;
        std::size_t end_offset = first.offset;
        while (cur_.kind != Tok::End) {
            if (at_symbol("(")) {
                ++nesting;
            } else if (at_symbol(")")) {
                if (nesting == 0) {
                    break;
                }
                --nesting;
            } else if (at_symbol(",") && nesting == 0) {
                break;
            } else if (at_symbol(";")) {
                break;
            }
            end_offset = cur_.offset + cur_.text.size();
            advance();
        }
        const std::string_view text =
            src_.substr(first.offset, end_offset - first.offset);
        detail::AngleParser parser(text);
        const auto v = parser.parse_all();
        if (!v) {
            fail(first, "malformed angle");
        }
        return *v;
    }

    std::string_view src_;
    Lexer lexer_;
    Token cur_;
    std::unordered_map<std::string, Register> qregs_;
    std::unordered_map<std::string, Register> cregs_;
    std::size_t num_qubits_ = 0;
    std::size_t num_clbits_ = 0;
    std::vector<std::pair<Instruction, Token>> body_;
};

} // namespace qasm_detail

/// Parses OpenQASM 2.0 text. Throws ParseError on any malformed input.
inline Circuit parse_qasm(std::string_view text) {
    return qasm_detail::Parser(text).parse();
}

/// Emits the circuit as OpenQASM 2.0, newline-terminated.
inline std::string emit_qasm(const Circuit &circuit) {
    using namespace std::string_literals;
    const bool split_clbits = std::ranges::any_of(
        circuit.instructions(), [](const Instruction &in) {
            return std::holds_alternative<Conditional>(in);
        });
    const auto clbit_ref = [&](Clbit c) {
        return split_clbits ? "c"s + std::to_string(c) + "[0]"
                            : "c0["s + std::to_string(c) + "]";
    };
    const auto qubit_ref = [](Qubit q) {
        return "q0["s + std::to_string(q) + "]";
    };
    const auto gate_text = [&](const GateOp &op) {
        std::string out(qasm_detail::gate_to_qasm(op.gate.name()));
        const auto params = op.gate.params();
        if (!params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (i) {
                    out += ',';
                }
                out += detail::format_double(params[i]);
            }
            out += ')';
        }
        const auto targets = op.targets();
        for (std::size_t i = 0; i < targets.size(); ++i) {
            out += i ? "," : " ";
            out += qubit_ref(targets[i]);
        }
        return out;
    };

    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    if (circuit.num_qubits() > 0) {
        out += "qreg q0[" + std::to_string(circuit.num_qubits()) + "];\n";
    }
    if (split_clbits) {
        for (std::size_t c = 0; c < circuit.num_clbits(); ++c) {
            out += "creg c" + std::to_string(c) + "[1];\n";
        }
    } else if (circuit.num_clbits() > 0) {
        out += "creg c0[" + std::to_string(circuit.num_clbits()) + "];\n";
    }
    for (const auto &instr : circuit.instructions()) {
        if (const auto *g = std::get_if<GateOp>(&instr)) {
            out += gate_text(*g);
        } else if (const auto *m = std::get_if<Measure>(&instr)) {
            out += "measure " + qubit_ref(m->qubit) + " -> " +
                   clbit_ref(m->clbit);
        } else if (const auto *r = std::get_if<Reset>(&instr)) {
            out += "reset " + qubit_ref(r->qubit);
        } else {
            const auto &c = std::get<Conditional>(instr);
            out += "if(c" + std::to_string(c.clbit) +
                   "==" + (c.expected ? "1" : "0") + ") " + gate_text(c.op);
        }
        out += ";\n";
    }
    return out;
}

} // namespace qstack
