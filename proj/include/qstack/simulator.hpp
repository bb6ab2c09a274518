#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qstack/circuit.hpp"
#include "qstack/error.hpp"
#include "qstack/statevector.hpp"
#include "qstack/unitary.hpp"

namespace qstack {

enum class Backend { StateVector, Unitary };

inline std::string_view to_string(Backend b) noexcept {
    return b == Backend::StateVector ? "statevector" : "unitary";
}

inline std::optional<Backend> backend_from_name(std::string_view name) {
    if (name == "statevector") {
        return Backend::StateVector;
    }
    if (name == "unitary") {
        return Backend::Unitary;
    }
    return std::nullopt;
}

struct RunConfig {
    std::uint64_t shots = 1024;
    std::uint64_t seed = 0;
    Backend backend = Backend::StateVector;
    /// Fuse runs of single-qubit gates on one qubit into one 2x2 matrix.
    bool fusion = false;
};

/// Histogram of classical register values. Keys have one character per
/// classical bit, bit 0 rightmost.
struct Counts {
    std::map<std::string, std::uint64_t> histogram;
    std::uint64_t shots = 0;

    [[nodiscard]] std::uint64_t operator[](const std::string &key) const {
        const auto it = histogram.find(key);
        return it == histogram.end() ? 0 : it->second;
    }

    friend bool operator==(const Counts &, const Counts &) = default;
};

/// Classical register value as a Counts key (bit 0 rightmost).
inline std::string bitstring(std::span<const std::uint8_t> bits) {
    std::string key(bits.size(), '0');
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k]) {
            key[bits.size() - 1 - k] = '1';
        }
    }
    return key;
}

/// splitmix64 finaliser.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-shot random stream: mt19937_64 seeded with mix64(seed) xor shot, so
/// shots are independent of execution order.
class ShotRng {
  public:
    ShotRng(std::uint64_t seed, std::uint64_t shot)
        : engine_(mix64(seed) ^ shot) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 engine_;
};

/// A circuit lowered for execution. With fusion enabled, consecutive
/// single-qubit gates on a qubit are pre-multiplied into one matrix.
class Program {
  public:
    struct Fused {
        Mat2 matrix;
        Qubit qubit;
    };
    using Step = std::variant<GateOp, Fused, Measure, Reset, Conditional>;

    Program(const Circuit &circuit, bool fusion)
        : num_qubits_(circuit.num_qubits()), num_clbits_(circuit.num_clbits()) {
        if (!fusion) {
            for (const auto &instr : circuit.instructions()) {
                std::visit([&](const auto &v) { steps_.emplace_back(v); }, instr);
            }
        } else {
            std::vector<std::optional<Mat2>> pending(num_qubits_);
            const auto flush = [&](Qubit q) {
                if (pending[q]) {
                    steps_.emplace_back(Fused{*pending[q], q});
                    pending[q].reset();
                }
            };
            for (const auto &instr : circuit.instructions()) {
                const auto *op = std::get_if<GateOp>(&instr);
                if (op != nullptr && op->gate.num_qubits() == 1) {
                    const Qubit q = op->qubits[0];
                    const Mat2 m = to_mat2(gate_matrix(op->gate));
                    pending[q] = pending[q] ? mul(m, *pending[q]) : m;
                    continue;
                }
                for (Qubit q : qubits_of(instr)) {
                    flush(q);
                }
                std::visit([&](const auto &v) { steps_.emplace_back(v); }, instr);
            }
            for (Qubit q = 0; q < num_qubits_; ++q) {
                flush(q);
            }
        }
        while (unitary_prefix_ < steps_.size() &&
               (std::holds_alternative<GateOp>(steps_[unitary_prefix_]) ||
                std::holds_alternative<Fused>(steps_[unitary_prefix_]))) {
            ++unitary_prefix_;
        }
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t num_clbits() const noexcept { return num_clbits_; }
    [[nodiscard]] const std::vector<Step> &steps() const noexcept {
        return steps_;
    }
    /// Number of leading steps that are pure gates.
    [[nodiscard]] std::size_t unitary_prefix() const noexcept {
        return unitary_prefix_;
    }

    /// Executes steps [first, last) on `state`, reading and writing `clbits`.
    void execute(StateVector &state, std::vector<std::uint8_t> &clbits,
                 ShotRng &rng, std::size_t first, std::size_t last) const {
        for (std::size_t i = first; i < last; ++i) {
            const Step &step = steps_[i];
            if (const auto *g = std::get_if<GateOp>(&step)) {
                state.apply_gate(g->gate, g->targets());
            } else if (const auto *f = std::get_if<Fused>(&step)) {
                state.apply_matrix(f->matrix, f->qubit);
            } else if (const auto *m = std::get_if<Measure>(&step)) {
                clbits[m->clbit] =
                    static_cast<std::uint8_t>(state.measure(m->qubit, rng.uniform()));
            } else if (const auto *r = std::get_if<Reset>(&step)) {
                state.reset(r->qubit, rng.uniform());
            } else {
                const auto &c = std::get<Conditional>(step);
                if ((clbits[c.clbit] != 0) == c.expected) {
                    state.apply_gate(c.op.gate, c.op.targets());
                }
            }
        }
    }

    /// One complete shot from |0...0> with a fresh classical register.
    std::vector<std::uint8_t> run_shot(StateVector &state, ShotRng &rng) const {
        std::vector<std::uint8_t> clbits(num_clbits_, 0);
        execute(state, clbits, rng, 0, steps_.size());
        return clbits;
    }

  private:
    std::size_t num_qubits_;
    std::size_t num_clbits_;
    std::vector<Step> steps_;
    std::size_t unitary_prefix_ = 0;
};

/// Runs every shot and hands each final classical register to `sink` in shot
/// order. The gate-only prefix is simulated once and reused per shot; this is
/// observationally identical to re-simulating it.
inline void run_shots(
    const Circuit &circuit, const RunConfig &cfg,
    const std::function<void(std::uint64_t, std::span<const std::uint8_t>)> &sink) {
    if (cfg.shots == 0) {
        throw SimulationError("shots must be at least 1");
    }
    // the unitary backend consumes the raw gate prefix, so its steps must map
    // one-to-one onto instructions
    const Program program(circuit,
                          cfg.fusion && cfg.backend == Backend::StateVector);
    const std::size_t prefix = program.unitary_prefix();

    std::optional<StateVector> start;
    if (cfg.backend == Backend::Unitary) {
        Circuit head(circuit.num_qubits(), circuit.num_clbits());
        for (const auto &instr : circuit.instructions()) {
            if (!std::holds_alternative<GateOp>(instr)) {
                break;
            }
            head.append(instr);
        }
        const UnitaryMatrix u = circuit_unitary(head);
        std::vector<Complex> column(u.dim());
        for (std::size_t i = 0; i < u.dim(); ++i) {
            column[i] = u(i, 0);
        }
        start.emplace(circuit.num_qubits(), std::move(column));
    } else {
        start.emplace(circuit.num_qubits());
        ShotRng unused(cfg.seed, 0);
        std::vector<std::uint8_t> none;
        program.execute(*start, none, unused, 0, prefix);
    }
    const std::size_t resume = prefix;

    for (std::uint64_t shot = 0; shot < cfg.shots; ++shot) {
        ShotRng rng(cfg.seed, shot);
        std::vector<std::uint8_t> clbits(circuit.num_clbits(), 0);
        if (resume == program.steps().size()) {
            sink(shot, clbits);
            continue;
        }
        StateVector state = *start;
        program.execute(state, clbits, rng, resume, program.steps().size());
        sink(shot, clbits);
    }
}

inline Counts run(const Circuit &circuit, const RunConfig &cfg) {
    Counts counts;
    counts.shots = cfg.shots;
    run_shots(circuit, cfg,
              [&](std::uint64_t, std::span<const std::uint8_t> bits) {
                  ++counts.histogram[bitstring(bits)];
              });
    return counts;
}

/// State-vector backend entry point.
inline Counts run_statevector(const Circuit &circuit, RunConfig cfg) {
    if (cfg.backend != Backend::StateVector) {
        throw SimulationError("run_statevector requires the statevector backend");
    }
    return run(circuit, cfg);
}

/// Final state from |0...0> for a circuit with only gates.
inline StateVector get_statevector(const Circuit &circuit, bool fusion = false) {
    const auto &instrs = circuit.instructions();
    for (std::size_t i = 0; i < instrs.size(); ++i) {
        if (!std::holds_alternative<GateOp>(instrs[i])) {
            throw SimulationError("instruction " + std::to_string(i) +
                                  " is not a unitary gate");
        }
    }
    const Program program(circuit, fusion);
    StateVector state(circuit.num_qubits());
    ShotRng rng(0, 0);
    std::vector<std::uint8_t> none;
    program.execute(state, none, rng, 0, program.steps().size());
    return state;
}

} // namespace qstack
