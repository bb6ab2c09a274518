#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qstack/circuit.hpp"
#include "qstack/error.hpp"
#include "qstack/gates.hpp"

namespace qstack {

/// H then measure: one uniformly random bit.
inline Circuit random_bit_circuit() {
    Circuit c(1, 1);
    c.h(0).measure(0, 0);
    return c;
}

/// Teleports the state prepared by `prep` on q0 to q2. Z is conditioned on
/// c0 and X on c1; c2 holds the teleported qubit measured in the Z basis.
inline Circuit teleportation_circuit(const std::vector<Gate> &prep = {}) {
    Circuit c(3, 3);
    for (const Gate &g : prep) {
        if (g.num_qubits() != 1) {
            throw CircuitError("teleportation prep gate " +
                               std::string(to_string(g.name())) +
                               " is not single-qubit");
        }
        c.gate(g, 0);
    }
    c.h(1).cnot(1, 2).cnot(0, 1).h(0);
    c.measure(0, 0).measure(1, 1);
    c.c_if(0, true, GateOp(Gate(GateName::Z), 2));
    c.c_if(1, true, GateOp(Gate(GateName::X), 2));
    c.measure(2, 2);
    return c;
}

/// Bitstrings here follow the Counts convention: the rightmost character is
/// bit 0.
inline std::vector<bool> bits_from_string(std::string_view s) {
    std::vector<bool> bits(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const char ch = s[s.size() - 1 - k];
        if (ch != '0' && ch != '1') {
            throw CircuitError("bitstring '" + std::string(s) +
                               "' may only contain 0 and 1");
        }
        bits[k] = ch == '1';
    }
    return bits;
}

struct Oracle {
    enum class Kind { Constant0, Constant1, BalancedMask, BvSecret };
    Kind kind = Kind::Constant0;
    std::size_t width = 0;
    /// Mask or secret, rightmost character for query qubit 0.
    std::string bits;

    static Oracle constant(bool value, std::size_t width) {
        return {value ? Kind::Constant1 : Kind::Constant0, width, {}};
    }
    /// f(x) = mask . x mod 2, balanced for any nonzero mask.
    static Oracle balanced(std::string mask) {
        const std::size_t w = mask.size();
        return {Kind::BalancedMask, w, std::move(mask)};
    }
    static Oracle secret(std::string s) {
        const std::size_t w = s.size();
        return {Kind::BvSecret, w, std::move(s)};
    }
};

namespace algo_detail {

// Queries on qubits 0..n-1, ancilla on qubit n prepared in |->.
inline Circuit phase_kickback_circuit(std::size_t n,
                                      const std::vector<bool> &mask,
                                      bool flip_ancilla) {
    Circuit c(n + 1, n);
    c.x(n);
    for (Qubit q = 0; q <= n; ++q) {
        c.h(q);
    }
    if (flip_ancilla) {
        c.x(n);
    }
    for (Qubit q = 0; q < n; ++q) {
        if (mask[q]) {
            c.cnot(q, n);
        }
    }
    for (Qubit q = 0; q < n; ++q) {
        c.h(q);
    }
    for (Qubit q = 0; q < n; ++q) {
        c.measure(q, q);
    }
    return c;
}

} // namespace algo_detail

/// Deutsch-Jozsa on `oracle.width` query qubits plus one ancilla. The query
/// register reads all zeros iff the oracle is constant.
inline Circuit deutsch_jozsa_circuit(const Oracle &oracle) {
    if (oracle.width == 0) {
        throw CircuitError("Deutsch-Jozsa needs at least one query qubit");
    }
    switch (oracle.kind) {
    case Oracle::Kind::Constant0:
    case Oracle::Kind::Constant1:
        return algo_detail::phase_kickback_circuit(
            oracle.width, std::vector<bool>(oracle.width, false),
            oracle.kind == Oracle::Kind::Constant1);
    case Oracle::Kind::BalancedMask: {
        const auto mask = bits_from_string(oracle.bits);
        if (mask.size() != oracle.width) {
            throw CircuitError("mask length does not match oracle width");
        }
        if (std::ranges::none_of(mask, [](bool b) { return b; })) {
            throw CircuitError("an all-zero mask gives a constant oracle");
        }
        return algo_detail::phase_kickback_circuit(oracle.width, mask, false);
    }
    case Oracle::Kind::BvSecret: break;
    }
    throw CircuitError("Deutsch-Jozsa takes a constant or balanced oracle");
}

/// Bernstein-Vazirani: one query reads out `secret` on the classical register.
inline Circuit bernstein_vazirani_circuit(std::string_view secret) {
    if (secret.empty()) {
        throw CircuitError("Bernstein-Vazirani needs a nonempty secret");
    }
    const auto bits = bits_from_string(secret);
    return algo_detail::phase_kickback_circuit(bits.size(), bits, false);
}

/// Controlled phase diag(1, 1, 1, e^{i theta}) from two CNOTs and three U1.
inline void append_controlled_phase(Circuit &c, double theta, Qubit control,
                                    Qubit target) {
    c.u1(theta / 2, control);
    c.cnot(control, target);
    c.u1(-theta / 2, target);
    c.cnot(control, target);
    c.u1(theta / 2, target);
}

namespace algo_detail {

inline void qft_body(Circuit &c, std::size_t n, double sign) {
    for (std::size_t i = n; i-- > 0;) {
        c.h(i);
        for (std::size_t j = i; j-- > 0;) {
            append_controlled_phase(
                c, sign * std::numbers::pi / static_cast<double>(1ULL << (i - j)),
                j, i);
        }
    }
    for (std::size_t i = 0; i < n / 2; ++i) {
        c.swap(i, n - 1 - i);
    }
}

} // namespace algo_detail

/// Quantum Fourier transform on basis-state indices with qubit 0 as the
/// least-significant bit: |x> -> 2^{-n/2} sum_y e^{2 pi i x y / 2^n} |y>.
inline Circuit qft_circuit(std::size_t n) {
    if (n == 0) {
        throw CircuitError("QFT needs at least one qubit");
    }
    Circuit c(n, 0);
    algo_detail::qft_body(c, n, 1.0);
    return c;
}

/// Adjoint of a measurement-free circuit: reversed order, each gate inverted.
inline Circuit inverse(const Circuit &circuit) {
    Circuit out(circuit.num_qubits(), circuit.num_clbits());
    const auto &instrs = circuit.instructions();
    for (auto it = instrs.rbegin(); it != instrs.rend(); ++it) {
        const auto *op = std::get_if<GateOp>(&*it);
        if (op == nullptr) {
            throw CircuitError("only gate circuits can be inverted");
        }
        const Gate &g = op->gate;
        Gate inv = g;
        constexpr double pi = std::numbers::pi;
        switch (g.name()) {
        case GateName::S: inv = u1(-pi / 2); break;
        case GateName::T: inv = u1(-pi / 4); break;
        case GateName::SqrtX: inv = rx(-pi / 2); break;
        case GateName::Rx: inv = rx(-g.param(0)); break;
        case GateName::Ry: inv = ry(-g.param(0)); break;
        case GateName::Rz: inv = rz(-g.param(0)); break;
        case GateName::U1: inv = u1(-g.param(0)); break;
        case GateName::U2: inv = u3(-pi / 2, -g.param(1), -g.param(0)); break;
        case GateName::U3:
            inv = u3(-g.param(0), -g.param(2), -g.param(1));
            break;
        default: break;
        }
        if (inv.num_qubits() == 1) {
            out.gate(inv, op->qubits[0]);
        } else {
            out.gate(inv, op->qubits[0], op->qubits[1]);
        }
    }
    return out;
}

/// Z on the all-ones state of `qubits`, no ancillas. For three or more
/// qubits the phase is spread over parity terms: each nonempty subset S
/// gets a U1 of angle (-1)^{|S|+1} pi / 2^{k-1} on its parity.
inline void append_multi_controlled_z(Circuit &c,
                                      const std::vector<Qubit> &qubits) {
    const std::size_t k = qubits.size();
    if (k == 0) {
        throw CircuitError("multi-controlled Z needs at least one qubit");
    }
    if (k == 1) {
        c.z(qubits[0]);
        return;
    }
    if (k == 2) {
        c.cz(qubits[0], qubits[1]);
        return;
    }
    if (k > 16) {
        throw CircuitError("multi-controlled Z is limited to 16 qubits");
    }
    const double base = std::numbers::pi / static_cast<double>(1ULL << (k - 1));
    for (std::size_t subset = 1; subset < (std::size_t{1} << k); ++subset) {
        std::vector<Qubit> members;
        for (std::size_t b = 0; b < k; ++b) {
            if ((subset >> b) & 1U) {
                members.push_back(qubits[b]);
            }
        }
        const double angle = members.size() % 2 == 1 ? base : -base;
        const Qubit last = members.back();
        for (std::size_t m = 0; m + 1 < members.size(); ++m) {
            c.cnot(members[m], last);
        }
        c.u1(angle, last);
        for (std::size_t m = members.size() - 1; m-- > 0;) {
            c.cnot(members[m], last);
        }
    }
}

/// Grover search for one marked basis state, measuring every qubit.
inline Circuit grover_circuit(std::string_view marked, std::size_t iterations) {
    if (marked.empty()) {
        throw CircuitError("Grover needs a nonempty marked bitstring");
    }
    if (iterations == 0) {
        throw CircuitError("Grover needs at least one iteration");
    }
    const auto bits = bits_from_string(marked);
    const std::size_t n = bits.size();
    std::vector<Qubit> all(n);
    for (Qubit q = 0; q < n; ++q) {
        all[q] = q;
    }
    Circuit c(n, n);
    for (Qubit q = 0; q < n; ++q) {
        c.h(q);
    }
    for (std::size_t it = 0; it < iterations; ++it) {
        for (Qubit q = 0; q < n; ++q) {
            if (!bits[q]) {
                c.x(q);
            }
        }
        append_multi_controlled_z(c, all);
        for (Qubit q = 0; q < n; ++q) {
            if (!bits[q]) {
                c.x(q);
            }
        }
        for (Qubit q = 0; q < n; ++q) {
            c.h(q);
            c.x(q);
        }
        append_multi_controlled_z(c, all);
        for (Qubit q = 0; q < n; ++q) {
            c.x(q);
            c.h(q);
        }
    }
    for (Qubit q = 0; q < n; ++q) {
        c.measure(q, q);
    }
    return c;
}

} // namespace qstack
