#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qstack/error.hpp"
#include "qstack/gates.hpp"

namespace qstack {

using Qubit = std::size_t;
using Clbit = std::size_t;

/// A gate applied to one or two qubits. Only the first gate.num_qubits()
/// entries of `qubits` are meaningful.
struct GateOp {
    Gate gate;
    std::array<Qubit, 2> qubits{};

    GateOp() = default;
    GateOp(Gate g, Qubit q) : gate(g), qubits{q, 0} {
        if (g.num_qubits() != 1) {
            throw CircuitError(std::string(to_string(g.name())) +
                               " acts on two qubits");
        }
    }
    GateOp(Gate g, Qubit a, Qubit b) : gate(g), qubits{a, b} {
        if (g.num_qubits() != 2) {
            throw CircuitError(std::string(to_string(g.name())) +
                               " acts on one qubit");
        }
    }

    [[nodiscard]] std::span<const Qubit> targets() const noexcept {
        return {qubits.data(), gate.num_qubits()};
    }

    friend bool operator==(const GateOp &a, const GateOp &b) {
        return a.gate == b.gate && std::ranges::equal(a.targets(), b.targets());
    }
};

struct Measure {
    Qubit qubit = 0;
    Clbit clbit = 0;
    friend bool operator==(const Measure &, const Measure &) = default;
};

struct Reset {
    Qubit qubit = 0;
    friend bool operator==(const Reset &, const Reset &) = default;
};

/// Applies `op` iff classical bit `clbit` currently equals `expected`.
struct Conditional {
    Clbit clbit = 0;
    bool expected = true;
    GateOp op;
    friend bool operator==(const Conditional &, const Conditional &) = default;
};

using Instruction = std::variant<GateOp, Measure, Reset, Conditional>;

/// Qubits an instruction acts on, in operand order.
inline std::vector<Qubit> qubits_of(const Instruction &instr) {
    return std::visit(
        [](const auto &v) -> std::vector<Qubit> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                return {v.targets().begin(), v.targets().end()};
            } else if constexpr (std::is_same_v<T, Conditional>) {
                return {v.op.targets().begin(), v.op.targets().end()};
            } else {
                return {v.qubit};
            }
        },
        instr);
}

inline std::optional<Clbit> clbit_of(const Instruction &instr) {
    if (const auto *m = std::get_if<Measure>(&instr)) {
        return m->clbit;
    }
    if (const auto *c = std::get_if<Conditional>(&instr)) {
        return c->clbit;
    }
    return std::nullopt;
}

/// The gate of a GateOp or the inner gate of a Conditional.
inline const GateOp *gate_op_of(const Instruction &instr) {
    if (const auto *g = std::get_if<GateOp>(&instr)) {
        return g;
    }
    if (const auto *c = std::get_if<Conditional>(&instr)) {
        return &c->op;
    }
    return nullptr;
}

/// Ordered instruction list over a qubit register and a classical register.
/// Instruction order is execution order; append validates indices so every
/// stored instruction satisfies the register bounds.
class Circuit {
  public:
    Circuit() = default;
    Circuit(std::size_t num_qubits, std::size_t num_clbits)
        : num_qubits_(num_qubits), num_clbits_(num_clbits) {}

    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return num_qubits_;
    }
    [[nodiscard]] std::size_t num_clbits() const noexcept {
        return num_clbits_;
    }
    [[nodiscard]] const std::vector<Instruction> &instructions() const noexcept {
        return instructions_;
    }
    [[nodiscard]] std::size_t size() const noexcept {
        return instructions_.size();
    }
    [[nodiscard]] bool empty() const noexcept { return instructions_.empty(); }

    /// Throws CircuitError naming the offending index when `instr` does not
    /// fit this circuit's registers.
    void validate(const Instruction &instr) const {
        const auto qs = qubits_of(instr);
        for (std::size_t i = 0; i < qs.size(); ++i) {
            if (qs[i] >= num_qubits_) {
                throw CircuitError("qubit index " + std::to_string(qs[i]) +
                                   " out of range for " +
                                   std::to_string(num_qubits_) +
                                   "-qubit circuit");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (qs[i] == qs[j]) {
                    throw CircuitError("duplicate qubit index " +
                                       std::to_string(qs[i]));
                }
            }
        }
        if (const auto c = clbit_of(instr); c && *c >= num_clbits_) {
            throw CircuitError("classical index " + std::to_string(*c) +
                               " out of range for " +
                               std::to_string(num_clbits_) + "-bit register");
        }
    }

    Circuit &append(Instruction instr) {
        validate(instr);
        instructions_.push_back(std::move(instr));
        return *this;
    }

    Circuit &gate(const Gate &g, Qubit q) { return append(GateOp(g, q)); }
    Circuit &gate(const Gate &g, Qubit a, Qubit b) {
        return append(GateOp(g, a, b));
    }

    Circuit &i(Qubit q) { return gate(Gate(GateName::I), q); }
    Circuit &x(Qubit q) { return gate(Gate(GateName::X), q); }
    Circuit &y(Qubit q) { return gate(Gate(GateName::Y), q); }
    Circuit &z(Qubit q) { return gate(Gate(GateName::Z), q); }
    Circuit &h(Qubit q) { return gate(Gate(GateName::H), q); }
    Circuit &s(Qubit q) { return gate(Gate(GateName::S), q); }
    Circuit &t(Qubit q) { return gate(Gate(GateName::T), q); }
    Circuit &sqrt_x(Qubit q) { return gate(Gate(GateName::SqrtX), q); }
    Circuit &rx(double theta, Qubit q) { return gate(qstack::rx(theta), q); }
    Circuit &ry(double theta, Qubit q) { return gate(qstack::ry(theta), q); }
    Circuit &rz(double theta, Qubit q) { return gate(qstack::rz(theta), q); }
    Circuit &u1(double lambda, Qubit q) { return gate(qstack::u1(lambda), q); }
    Circuit &cnot(Qubit control, Qubit target) {
        return gate(Gate(GateName::CNOT), control, target);
    }
    Circuit &cz(Qubit a, Qubit b) { return gate(Gate(GateName::CZ), a, b); }
    Circuit &swap(Qubit a, Qubit b) { return gate(Gate(GateName::SWAP), a, b); }
    Circuit &measure(Qubit q, Clbit c) { return append(Measure{q, c}); }
    Circuit &reset(Qubit q) { return append(Reset{q}); }
    Circuit &c_if(Clbit c, bool expected, GateOp op) {
        return append(Conditional{c, expected, op});
    }

    /// True when the circuit holds no Measure, Reset or Conditional.
    [[nodiscard]] bool is_unitary() const noexcept {
        return std::ranges::all_of(instructions_, [](const Instruction &in) {
            return std::holds_alternative<GateOp>(in);
        });
    }

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    std::size_t num_qubits_ = 0;
    std::size_t num_clbits_ = 0;
    std::vector<Instruction> instructions_;
};

inline Circuit new_circuit(std::size_t num_qubits, std::size_t num_clbits) {
    return Circuit(num_qubits, num_clbits);
}

/// As-soon-as-possible layer index (1-based) of every instruction. Two
/// instructions conflict when they share a qubit; a Conditional also
/// conflicts with anything else touching its classical bit.
inline std::vector<std::size_t> asap_layers(const Circuit &circuit) {
    std::vector<std::size_t> qubit_front(circuit.num_qubits(), 0);
    std::vector<std::size_t> clbit_any(circuit.num_clbits(), 0);
    std::vector<std::size_t> clbit_cond(circuit.num_clbits(), 0);
    std::vector<std::size_t> layers;
    layers.reserve(circuit.size());
    for (const auto &instr : circuit.instructions()) {
        std::size_t level = 0;
        const auto qs = qubits_of(instr);
        for (Qubit q : qs) {
            level = std::max(level, qubit_front[q]);
        }
        const bool conditional = std::holds_alternative<Conditional>(instr);
        const auto c = clbit_of(instr);
        if (c) {
            level = std::max(level, conditional ? clbit_any[*c] : clbit_cond[*c]);
        }
        ++level;
        for (Qubit q : qs) {
            qubit_front[q] = level;
        }
        if (c) {
            clbit_any[*c] = std::max(clbit_any[*c], level);
            if (conditional) {
                clbit_cond[*c] = level;
            }
        }
        layers.push_back(level);
    }
    return layers;
}

inline std::size_t depth(const Circuit &circuit) {
    const auto layers = asap_layers(circuit);
    return layers.empty() ? 0 : *std::ranges::max_element(layers);
}

struct ResourceReport {
    /// Keyed by canonical gate name; conditionals count under their inner gate.
    std::map<std::string, std::size_t> gate_counts;
    std::size_t conditional_count = 0;
    std::size_t measurement_count = 0;
    std::size_t reset_count = 0;
    std::size_t depth = 0;

    [[nodiscard]] std::size_t total_gates() const {
        std::size_t total = 0;
        for (const auto &[name, count] : gate_counts) {
            total += count;
        }
        return total;
    }

    friend bool operator==(const ResourceReport &,
                           const ResourceReport &) = default;
};

inline ResourceReport estimate_resources(const Circuit &circuit) {
    ResourceReport report;
    for (const auto &instr : circuit.instructions()) {
        if (const GateOp *op = gate_op_of(instr)) {
            ++report.gate_counts[std::string(to_string(op->gate.name()))];
            if (std::holds_alternative<Conditional>(instr)) {
                ++report.conditional_count;
            }
        } else if (std::holds_alternative<Measure>(instr)) {
            ++report.measurement_count;
        } else {
            ++report.reset_count;
        }
    }
    report.depth = depth(circuit);
    return report;
}

} // namespace qstack
