#pragma once

// Reference implementations used only by the tests. They are written
// directly from the definitions (Kronecker products, explicit sums) and do
// not call the library's embedding or simulation code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "qstack/qstack.hpp"

namespace qstack::test {

using CMat = std::vector<std::vector<Complex>>;

inline CMat eye(std::size_t d) {
    CMat m(d, std::vector<Complex>(d));
    for (std::size_t i = 0; i < d; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline CMat from_unitary(const UnitaryMatrix &u) {
    CMat m(u.dim(), std::vector<Complex>(u.dim()));
    for (std::size_t r = 0; r < u.dim(); ++r) {
        for (std::size_t c = 0; c < u.dim(); ++c) {
            m[r][c] = u(r, c);
        }
    }
    return m;
}

inline CMat matmul(const CMat &a, const CMat &b) {
    const std::size_t n = a.size();
    CMat out(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

inline CMat add(const CMat &a, const CMat &b) {
    CMat out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            out[i][j] += b[i][j];
        }
    }
    return out;
}

/// a (x) b with b on the low-order bits.
inline CMat kron(const CMat &a, const CMat &b) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    CMat out(na * nb, std::vector<Complex>(na * nb));
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    return out;
}

/// 2x2 operator `g` on qubit q of n as I (x) .. (x) g (x) .. (x) I.
inline CMat embed1(const CMat &g, std::size_t q, std::size_t n) {
    CMat out = eye(1);
    for (std::size_t k = n; k-- > 0;) {
        out = kron(out, k == q ? g : eye(2));
    }
    return out;
}

/// 4x4 operator (local index 2*bit(a) + bit(b)) as a sum of products of
/// single-qubit matrix units.
inline CMat embed2(const CMat &g, std::size_t a, std::size_t b, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    CMat out(dim, std::vector<Complex>(dim));
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            if (g[r][c] == Complex{}) {
                continue;
            }
            CMat ea(2, std::vector<Complex>(2));
            CMat eb(2, std::vector<Complex>(2));
            ea[r >> 1][c >> 1] = 1.0;
            eb[r & 1][c & 1] = g[r][c];
            out = add(out, matmul(embed1(ea, a, n), embed1(eb, b, n)));
        }
    }
    return out;
}

/// Dense unitary of a gate-only circuit.
inline CMat dense_unitary(const Circuit &c) {
    const std::size_t n = c.num_qubits();
    CMat u = eye(std::size_t{1} << n);
    for (const auto &instr : c.instructions()) {
        const auto &op = std::get<GateOp>(instr);
        const CMat g = from_unitary(gate_matrix(op.gate));
        const CMat e = op.gate.num_qubits() == 1
                           ? embed1(g, op.qubits[0], n)
                           : embed2(g, op.qubits[0], op.qubits[1], n);
        u = matmul(e, u);
    }
    return u;
}

inline double dense_max_diff(const CMat &a, const UnitaryMatrix &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            worst = std::max(worst, std::abs(a[i][j] - b(i, j)));
        }
    }
    return worst;
}

/// 1 - |tr(a^dagger b)| / dim computed from the definition.
inline double dense_phase_distance(const CMat &a, const CMat &b) {
    Complex tr{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            tr += std::conj(a[i][j]) * b[i][j];
        }
    }
    return 1.0 - std::abs(tr) / static_cast<double>(a.size());
}

/// DFT with omega = exp(2 pi i / N): F[y][x] = omega^{xy} / sqrt(N).
inline CMat dft(std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    CMat f(dim, std::vector<Complex>(dim));
    for (std::size_t y = 0; y < dim; ++y) {
        for (std::size_t x = 0; x < dim; ++x) {
            const double ang = 2.0 * std::numbers::pi *
                               static_cast<double>((x * y) % dim) /
                               static_cast<double>(dim);
            f[y][x] = std::polar(1.0 / std::sqrt(static_cast<double>(dim)), ang);
        }
    }
    return f;
}

inline Gate random_gate(std::mt19937_64 &rng, GateName name) {
    std::uniform_real_distribution<double> angle(-2 * std::numbers::pi,
                                                 2 * std::numbers::pi);
    std::vector<double> p(param_arity(name));
    for (double &x : p) {
        x = angle(rng);
    }
    return Gate(name, p);
}

/// Random gate-only circuit of exactly `layers` layers (when n >= 1): each
/// layer pairs up some qubits for two-qubit gates and gives the rest
/// single-qubit gates, drawn from every gate kind.
inline Circuit random_circuit(std::mt19937_64 &rng, std::size_t n,
                              std::size_t layers) {
    std::vector<GateName> one;
    std::vector<GateName> two;
    for (GateName g : kAllGateNames) {
        (qubit_arity(g) == 1 ? one : two).push_back(g);
    }
    Circuit c(n, 0);
    std::vector<Qubit> order(n);
    for (std::size_t l = 0; l < layers; ++l) {
        for (Qubit q = 0; q < n; ++q) {
            order[q] = q;
        }
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t i = 0;
        while (i < n) {
            if (i + 1 < n && rng() % 2 == 0) {
                c.gate(random_gate(rng, two[rng() % two.size()]), order[i],
                       order[i + 1]);
                i += 2;
            } else {
                c.gate(random_gate(rng, one[rng() % one.size()]), order[i]);
                i += 1;
            }
        }
    }
    return c;
}

/// Distance between `original` and a compiled circuit, checked by undoing
/// the final layout with explicit SWAPs appended to the compiled circuit and
/// comparing with the original placed by the initial layout. Only physical
/// qubits that are touched or hold a logical qubit are kept.
inline double swap_corrected_distance(const Circuit &original,
                                      const CompiledCircuit &compiled) {
    const std::size_t np = compiled.circuit.num_qubits();
    std::vector<bool> active(np, false);
    for (const auto &instr : compiled.circuit.instructions()) {
        for (Qubit q : qubits_of(instr)) {
            active[q] = true;
        }
    }
    for (Qubit l = 0; l < original.num_qubits(); ++l) {
        active[compiled.initial_layout[l]] = true;
    }
    std::vector<std::size_t> idx(np, 0);
    std::size_t k = 0;
    for (Qubit p = 0; p < np; ++p) {
        if (active[p]) {
            idx[p] = k++;
        }
    }
    Circuit want(k, 0);
    for (const auto &instr : original.instructions()) {
        const auto &op = std::get<GateOp>(instr);
        if (op.gate.num_qubits() == 1) {
            want.gate(op.gate, idx[compiled.initial_layout[op.qubits[0]]]);
        } else {
            want.gate(op.gate, idx[compiled.initial_layout[op.qubits[0]]],
                      idx[compiled.initial_layout[op.qubits[1]]]);
        }
    }
    Circuit got(k, 0);
    for (const auto &instr : compiled.circuit.instructions()) {
        const auto &op = std::get<GateOp>(instr);
        if (op.gate.num_qubits() == 1) {
            got.gate(op.gate, idx[op.qubits[0]]);
        } else {
            got.gate(op.gate, idx[op.qubits[0]], idx[op.qubits[1]]);
        }
    }
    // where[l]: compact position currently holding logical l
    std::vector<std::size_t> where;
    std::vector<std::size_t> home;
    for (Qubit l = 0; l < np; ++l) {
        if (active[compiled.initial_layout[l]]) {
            where.push_back(idx[compiled.final_layout[l]]);
            home.push_back(idx[compiled.initial_layout[l]]);
        }
    }
    for (std::size_t i = 0; i < where.size(); ++i) {
        if (where[i] == home[i]) {
            continue;
        }
        got.swap(where[i], home[i]);
        for (std::size_t j = 0; j < where.size(); ++j) {
            if (j != i && where[j] == home[i]) {
                where[j] = where[i];
            }
        }
        where[i] = home[i];
    }
    return phase_distance(circuit_unitary(want), circuit_unitary(got));
}

} // namespace qstack::test
