#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qstack/error.hpp"
#include "qstack/gates.hpp"

namespace qstack {

/// 2x2 gate matrix, row-major.
using Mat2 = std::array<Complex, 4>;
/// 4x4 gate matrix, row-major, first operand as the high-order bit.
using Mat4 = std::array<Complex, 16>;

inline Mat2 to_mat2(const UnitaryMatrix &m) {
    return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

/// a * b for 2x2 matrices.
inline Mat2 mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

namespace sv_detail {

// Plain real arithmetic; std::complex operator* carries NaN recovery that
// keeps the hot loops from vectorising.
inline Complex cmul(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

inline std::size_t insert_zero_bit(std::size_t value, std::size_t bit) {
    const std::size_t low = value & ((std::size_t{1} << bit) - 1);
    return ((value >> bit) << (bit + 1)) | low;
}

} // namespace sv_detail

/// Pure state of n qubits as 2^n amplitudes. Basis index bit q holds qubit q
/// (qubit 0 is the least-significant bit).
class StateVector {
  public:
    /// |0...0>
    explicit StateVector(std::size_t num_qubits)
        : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
        if (num_qubits >= 8 * sizeof(std::size_t) - 1) {
            throw SimulationError("too many qubits");
        }
        amps_[0] = 1.0;
    }

    StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
        : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
        if (amps_.size() != (std::size_t{1} << num_qubits)) {
            throw SimulationError("amplitude count must be 2^num_qubits");
        }
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm_squared() const {
        double total = 0.0;
        for (const Complex &a : amps_) {
            total += std::norm(a);
        }
        return total;
    }

    /// Applies a gate to the given qubits (operand order as in GateOp).
    void apply_gate(const Gate &gate, std::span<const std::size_t> qubits) {
        check_targets(gate, qubits);
        switch (gate.name()) {
        case GateName::I: return;
        case GateName::X: apply_x(qubits[0]); return;
        case GateName::Z:
        case GateName::S:
        case GateName::T:
        case GateName::Rz:
        case GateName::U1: {
            const UnitaryMatrix m = gate_matrix(gate);
            apply_diagonal(m(0, 0), m(1, 1), qubits[0]);
            return;
        }
        case GateName::CNOT: apply_cnot(qubits[0], qubits[1]); return;
        case GateName::CZ: apply_cz(qubits[0], qubits[1]); return;
        case GateName::SWAP: apply_swap(qubits[0], qubits[1]); return;
        default: break;
        }
        if (gate.num_qubits() == 1) {
            apply_matrix(to_mat2(gate_matrix(gate)), qubits[0]);
        } else {
            const UnitaryMatrix m = gate_matrix(gate);
            Mat4 m4{};
            for (std::size_t i = 0; i < 16; ++i) {
                m4[i] = m.data()[i];
            }
            apply_matrix(m4, qubits[0], qubits[1]);
        }
    }

    void apply_matrix(const Mat2 &m, std::size_t q) {
        check_qubit(q);
        const std::size_t stride = std::size_t{1} << q;
        const std::size_t n = amps_.size();
        Complex *a = amps_.data();
        for (std::size_t block = 0; block < n; block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                const Complex v0 = a[i];
                const Complex v1 = a[i + stride];
                a[i] = sv_detail::cmul(m[0], v0) + sv_detail::cmul(m[1], v1);
                a[i + stride] =
                    sv_detail::cmul(m[2], v0) + sv_detail::cmul(m[3], v1);
            }
        }
    }

    /// Generic two-qubit kernel; local index is 2*bit(first) + bit(second).
    void apply_matrix(const Mat4 &m, std::size_t first, std::size_t second) {
        check_pair(first, second);
        const std::size_t bf = std::size_t{1} << first;
        const std::size_t bs = std::size_t{1} << second;
        const std::size_t lo = std::min(first, second);
        const std::size_t hi = std::max(first, second);
        const std::size_t groups = amps_.size() >> 2;
        Complex *a = amps_.data();
        for (std::size_t g = 0; g < groups; ++g) {
            const std::size_t base = sv_detail::insert_zero_bit(
                sv_detail::insert_zero_bit(g, lo), hi);
            const std::array<std::size_t, 4> idx{base, base | bs, base | bf,
                                                 base | bf | bs};
            const std::array<Complex, 4> v{a[idx[0]], a[idx[1]], a[idx[2]],
                                           a[idx[3]]};
            for (std::size_t r = 0; r < 4; ++r) {
                Complex acc{};
                for (std::size_t c = 0; c < 4; ++c) {
                    acc += sv_detail::cmul(m[4 * r + c], v[c]);
                }
                a[idx[r]] = acc;
            }
        }
    }

    /// Probability that measuring qubit q yields 1.
    [[nodiscard]] double probability_one(std::size_t q) const {
        check_qubit(q);
        const std::size_t stride = std::size_t{1} << q;
        double p = 0.0;
        for (std::size_t block = stride; block < amps_.size();
             block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                p += std::norm(amps_[i]);
            }
        }
        return p;
    }

    /// Projective measurement of qubit q driven by a uniform draw in [0, 1):
    /// outcome 1 iff draw < P(1). Collapses and renormalises.
    int measure(std::size_t q, double uniform_draw) {
        check_qubit(q);
        const std::size_t stride = std::size_t{1} << q;
        double p0 = 0.0;
        double p1 = 0.0;
        for (std::size_t block = 0; block < amps_.size(); block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                p0 += std::norm(amps_[i]);
                p1 += std::norm(amps_[i + stride]);
            }
        }
        int outcome = uniform_draw < p1 ? 1 : 0;
        if ((outcome == 1 && p1 <= 0.0) || (outcome == 0 && p0 <= 0.0)) {
            outcome = 1 - outcome;
        }
        collapse(q, outcome, outcome == 1 ? p1 : p0);
        return outcome;
    }

    /// Measures q and flips it back to |0> when the outcome was 1.
    void reset(std::size_t q, double uniform_draw) {
        if (measure(q, uniform_draw) == 1) {
            apply_x(q);
        }
    }

  private:
    void check_qubit(std::size_t q) const {
        if (q >= num_qubits_) {
            throw SimulationError("qubit index " + std::to_string(q) +
                                  " out of range for " +
                                  std::to_string(num_qubits_) + "-qubit state");
        }
    }

    void check_pair(std::size_t a, std::size_t b) const {
        check_qubit(a);
        check_qubit(b);
        if (a == b) {
            throw SimulationError("duplicate qubit index " + std::to_string(a));
        }
    }

    void check_targets(const Gate &gate, std::span<const std::size_t> qubits) const {
        if (qubits.size() != gate.num_qubits()) {
            throw SimulationError(std::string(to_string(gate.name())) +
                                  " needs " + std::to_string(gate.num_qubits()) +
                                  " qubit operand(s)");
        }
        if (qubits.size() == 1) {
            check_qubit(qubits[0]);
        } else {
            check_pair(qubits[0], qubits[1]);
        }
    }

    void apply_x(std::size_t q) {
        const std::size_t stride = std::size_t{1} << q;
        for (std::size_t block = 0; block < amps_.size(); block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                std::swap(amps_[i], amps_[i + stride]);
            }
        }
    }

    void apply_diagonal(Complex d0, Complex d1, std::size_t q) {
        const std::size_t stride = std::size_t{1} << q;
        const bool skip0 = d0 == Complex{1.0, 0.0};
        Complex *a = amps_.data();
        for (std::size_t block = 0; block < amps_.size(); block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                if (!skip0) {
                    a[i] = sv_detail::cmul(d0, a[i]);
                }
                a[i + stride] = sv_detail::cmul(d1, a[i + stride]);
            }
        }
    }

    void apply_cnot(std::size_t control, std::size_t target) {
        const std::size_t bc = std::size_t{1} << control;
        const std::size_t bt = std::size_t{1} << target;
        const std::size_t lo = std::min(control, target);
        const std::size_t hi = std::max(control, target);
        const std::size_t groups = amps_.size() >> 2;
        for (std::size_t g = 0; g < groups; ++g) {
            const std::size_t base = sv_detail::insert_zero_bit(
                sv_detail::insert_zero_bit(g, lo), hi);
            std::swap(amps_[base | bc], amps_[base | bc | bt]);
        }
    }

    void apply_cz(std::size_t a, std::size_t b) {
        const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
        const std::size_t lo = std::min(a, b);
        const std::size_t hi = std::max(a, b);
        const std::size_t groups = amps_.size() >> 2;
        for (std::size_t g = 0; g < groups; ++g) {
            const std::size_t i = sv_detail::insert_zero_bit(
                                      sv_detail::insert_zero_bit(g, lo), hi) |
                                  mask;
            amps_[i] = -amps_[i];
        }
    }

    void apply_swap(std::size_t a, std::size_t b) {
        const std::size_t ba = std::size_t{1} << a;
        const std::size_t bb = std::size_t{1} << b;
        const std::size_t lo = std::min(a, b);
        const std::size_t hi = std::max(a, b);
        const std::size_t groups = amps_.size() >> 2;
        for (std::size_t g = 0; g < groups; ++g) {
            const std::size_t base = sv_detail::insert_zero_bit(
                sv_detail::insert_zero_bit(g, lo), hi);
            std::swap(amps_[base | ba], amps_[base | bb]);
        }
    }

    void collapse(std::size_t q, int outcome, double probability) {
        const double scale = 1.0 / std::sqrt(probability);
        const std::size_t stride = std::size_t{1} << q;
        for (std::size_t block = 0; block < amps_.size(); block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                Complex &keep = outcome == 0 ? amps_[i] : amps_[i + stride];
                Complex &drop = outcome == 0 ? amps_[i + stride] : amps_[i];
                keep *= scale;
                drop = 0.0;
            }
        }
    }

    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

} // namespace qstack
