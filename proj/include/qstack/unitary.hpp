#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "qstack/circuit.hpp"
#include "qstack/error.hpp"
#include "qstack/gates.hpp"
#include "qstack/matrix.hpp"

namespace qstack {

/// Hard cap for the full-unitary backend: a 12-qubit unitary is already
/// 4096 x 4096 complex entries (256 MiB).
inline constexpr std::size_t kMaxUnitaryQubits = 12;

/// Left-multiplies `u` (2^n x 2^n) by `g` embedded on `targets`. The gate's
/// local index is built from target bits with targets[0] most significant.
inline void left_multiply_embedded(UnitaryMatrix &u, const UnitaryMatrix &g,
                                   std::span<const std::size_t> targets) {
    const std::size_t k = targets.size();
    const std::size_t local = std::size_t{1} << k;
    if (g.dim() != local) {
        throw SimulationError("gate dimension does not match operand count");
    }
    const std::size_t dim = u.dim();
    std::size_t target_mask = 0;
    for (std::size_t t : targets) {
        target_mask |= std::size_t{1} << t;
    }
    // row index for local basis state s on top of a base with target bits 0
    const auto row_of = [&](std::size_t base, std::size_t s) {
        std::size_t row = base;
        for (std::size_t j = 0; j < k; ++j) {
            if ((s >> (k - 1 - j)) & 1U) {
                row |= std::size_t{1} << targets[j];
            }
        }
        return row;
    };
    std::vector<std::size_t> rows(local);
    std::vector<Complex> gathered(local);
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & target_mask) {
            continue;
        }
        for (std::size_t s = 0; s < local; ++s) {
            rows[s] = row_of(base, s);
        }
        for (std::size_t col = 0; col < dim; ++col) {
            for (std::size_t s = 0; s < local; ++s) {
                gathered[s] = u(rows[s], col);
            }
            for (std::size_t r = 0; r < local; ++r) {
                Complex acc{};
                for (std::size_t s = 0; s < local; ++s) {
                    acc += g(r, s) * gathered[s];
                }
                u(rows[r], col) = acc;
            }
        }
    }
}

/// Product of the embedded gate matrices in execution order. Rejects
/// measurements, resets, conditionals and circuits above kMaxUnitaryQubits.
inline UnitaryMatrix circuit_unitary(const Circuit &circuit) {
    if (circuit.num_qubits() > kMaxUnitaryQubits) {
        throw SimulationError("unitary backend is limited to " +
                              std::to_string(kMaxUnitaryQubits) +
                              " qubits, circuit has " +
                              std::to_string(circuit.num_qubits()));
    }
    UnitaryMatrix u =
        UnitaryMatrix::identity(std::size_t{1} << circuit.num_qubits());
    const auto &instrs = circuit.instructions();
    for (std::size_t i = 0; i < instrs.size(); ++i) {
        const auto *op = std::get_if<GateOp>(&instrs[i]);
        if (op == nullptr) {
            throw SimulationError("instruction " + std::to_string(i) +
                                  " is not a unitary gate");
        }
        left_multiply_embedded(u, gate_matrix(op->gate), op->targets());
    }
    return u;
}

/// Phase-invariant distance between two unitaries of equal dimension.
inline double verify_equivalence(const UnitaryMatrix &a, const UnitaryMatrix &b) {
    return phase_distance(a, b);
}

} // namespace qstack
