#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qstack/circuit.hpp"
#include "qstack/error.hpp"
#include "qstack/gates.hpp"
#include "qstack/isa.hpp"
#include "qstack/matrix.hpp"
#include "qstack/unitary.hpp"

namespace qstack {

/// U = e^{i alpha} U3(theta, phi, lambda).
struct EulerAngles {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
};

/// ZYZ Euler angles of a 2x2 unitary. When one of |m00|, |m10| vanishes the
/// split between phi and lambda is arbitrary; lambda is set to 0.
inline EulerAngles zyz_angles(const UnitaryMatrix &m) {
    if (m.dim() != 2) {
        throw CompileError("zyz_angles needs a 2x2 matrix");
    }
    constexpr double eps = 1e-12;
    const Complex m00 = m(0, 0);
    const Complex m01 = m(0, 1);
    const Complex m10 = m(1, 0);
    const Complex m11 = m(1, 1);
    EulerAngles e;
    e.theta = 2.0 * std::atan2(std::abs(m10), std::abs(m00));
    if (std::abs(m10) < eps) {
        e.alpha = std::arg(m00);
        e.phi = std::arg(m11) - e.alpha;
    } else if (std::abs(m00) < eps) {
        e.alpha = std::arg(-m01);
        e.phi = std::arg(m10) - e.alpha;
    } else {
        e.alpha = std::arg(m00);
        e.phi = std::arg(m10) - e.alpha;
        e.lambda = std::arg(-m01) - e.alpha;
    }
    e.phi = wrap_angle(e.phi);
    e.lambda = wrap_angle(e.lambda);
    return e;
}

namespace compiler_detail {

inline bool near(double a, double b) {
    return std::abs(wrap_angle(a - b)) < kAngleTolerance;
}

enum class Style { UBasis, Pulse };

inline Style basis_style(const Isa &isa) {
    if (isa.has_basis(GateName::U3)) {
        return Style::UBasis;
    }
    if (isa.has_basis(GateName::Rz) && isa.has_basis(GateName::Rx) &&
        satisfies(isa.find_basis(GateName::Rx)->params,
                  rx(std::numbers::pi / 2))) {
        return Style::Pulse;
    }
    throw CompileError("ISA '" + isa.name +
                       "' has no universal single-qubit basis (need U3, or "
                       "Rz with Rx(pi/2))");
}

inline bool in_basis(const Gate &g, const Isa &isa) {
    const BasisGate *b = isa.find_basis(g.name());
    return b != nullptr && satisfies(b->params, g);
}

// Rz is dropped when zero and otherwise wrapped.
inline void push_rz(std::vector<Gate> &out, double angle) {
    const double a = wrap_angle(angle);
    if (std::abs(a) >= 1e-12) {
        out.push_back(rz(a));
    }
}

} // namespace compiler_detail

/// Rewrites a single-qubit gate into the ISA's basis, equal up to global
/// phase. The u-basis yields at most one U1/U2/U3; the pulse basis yields at
/// most Rz Rx(pi/2) Rz Rx(pi/2) Rz.
inline std::vector<Gate> decompose_1q(const Gate &gate, const Isa &isa) {
    using compiler_detail::near;
    constexpr double pi = std::numbers::pi;
    if (gate.num_qubits() != 1) {
        throw CompileError(std::string(to_string(gate.name())) +
                           " is not a single-qubit gate");
    }
    const auto style = compiler_detail::basis_style(isa);
    if (compiler_detail::in_basis(gate, isa)) {
        return {gate};
    }
    const UnitaryMatrix m = gate_matrix(gate);
    const EulerAngles e = zyz_angles(m);
    const bool flat = e.theta < kAngleTolerance;
    const bool half = std::abs(e.theta - pi / 2) < kAngleTolerance;
    std::vector<Gate> out;

    if (style == compiler_detail::Style::UBasis) {
        if (flat) {
            const double a = wrap_angle(e.phi + e.lambda);
            if (std::abs(a) >= 1e-12) {
                out.push_back(isa.has_basis(GateName::U1)
                                  ? u1(a)
                                  : u3(0.0, 0.0, a));
            }
        } else if (half && isa.has_basis(GateName::U2)) {
            out.push_back(u2(e.phi, e.lambda));
        } else {
            out.push_back(u3(e.theta, e.phi, e.lambda));
        }
        return out;
    }

    if (flat) {
        compiler_detail::push_rz(out, e.phi + e.lambda);
        return out;
    }
    const BasisGate &rx_basis = *isa.find_basis(GateName::Rx);
    for (const double a : {pi / 2, pi, -pi / 2}) {
        if (satisfies(rx_basis.params, rx(a)) &&
            phase_distance(m, gate_matrix(rx(a))) < 1e-14) {
            return {rx(a)};
        }
    }
    if (half) {
        // u2(phi, lambda) = Rz(phi + pi/2) Rx(pi/2) Rz(lambda - pi/2)
        compiler_detail::push_rz(out, e.lambda - pi / 2);
        out.push_back(rx(pi / 2));
        compiler_detail::push_rz(out, e.phi + pi / 2);
        return out;
    }
    // u3 = Rz(phi + 3pi) Rx(pi/2) Rz(theta + pi) Rx(pi/2) Rz(lambda)
    compiler_detail::push_rz(out, e.lambda);
    out.push_back(rx(pi / 2));
    compiler_detail::push_rz(out, e.theta + pi);
    out.push_back(rx(pi / 2));
    compiler_detail::push_rz(out, e.phi + 3 * pi);
    return out;
}

/// Rewrites a two-qubit gate on coupled qubits into basis gates, equal up to
/// global phase. Single-qubit parts come out already decomposed.
inline std::vector<GateOp> translate_2q(const GateOp &op, const Isa &isa) {
    if (op.gate.num_qubits() != 2) {
        throw CompileError(std::string(to_string(op.gate.name())) +
                           " is not a two-qubit gate");
    }
    const Qubit a = op.qubits[0];
    const Qubit b = op.qubits[1];
    if (!isa.adjacent(a, b)) {
        throw CompileError("qubits " + std::to_string(a) + " and " +
                           std::to_string(b) + " are not coupled on " +
                           isa.name);
    }
    const bool has_cnot = isa.has_basis(GateName::CNOT);
    const bool has_cz = isa.has_basis(GateName::CZ);
    if (!has_cnot && !has_cz) {
        throw CompileError("ISA '" + isa.name + "' has no two-qubit basis gate");
    }

    std::vector<GateOp> out;
    const auto one = [&](const Gate &g, Qubit q) {
        for (const Gate &p : decompose_1q(g, isa)) {
            out.emplace_back(p, q);
        }
    };
    const Gate h(GateName::H);
    const Gate cnot_gate(GateName::CNOT);
    const Gate cz_gate(GateName::CZ);

    const auto cnot = [&](Qubit c, Qubit t) {
        if (has_cnot) {
            if (isa.allows(c, t)) {
                out.emplace_back(cnot_gate, c, t);
            } else {
                one(h, c);
                one(h, t);
                out.emplace_back(cnot_gate, t, c);
                one(h, c);
                one(h, t);
            }
            return;
        }
        one(h, t);
        if (isa.allows(c, t)) {
            out.emplace_back(cz_gate, c, t);
        } else {
            out.emplace_back(cz_gate, t, c);
        }
        one(h, t);
    };

    switch (op.gate.name()) {
    case GateName::CNOT: cnot(a, b); break;
    case GateName::CZ:
        if (has_cz) {
            if (isa.allows(a, b)) {
                out.emplace_back(cz_gate, a, b);
            } else {
                out.emplace_back(cz_gate, b, a);
            }
        } else if (isa.allows(a, b)) {
            one(h, b);
            out.emplace_back(cnot_gate, a, b);
            one(h, b);
        } else {
            one(h, a);
            out.emplace_back(cnot_gate, b, a);
            one(h, a);
        }
        break;
    case GateName::SWAP: {
        const bool forward = isa.allows(a, b);
        const Qubit x = forward ? a : b;
        const Qubit y = forward ? b : a;
        cnot(x, y);
        cnot(y, x);
        cnot(x, y);
        break;
    }
    default:
        throw CompileError("no translation for " +
                           std::string(to_string(op.gate.name())));
    }
    return out;
}

/// Shortest path from `from` to `to` in the undirected coupling graph; among
/// shortest paths the lexicographically smallest one.
inline std::vector<std::size_t> shortest_path(const Isa &isa, std::size_t from,
                                              std::size_t to) {
    const auto adj = isa.neighbours();
    constexpr std::size_t unreached = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist(isa.num_qubits, unreached);
    std::deque<std::size_t> queue{to};
    dist[to] = 0;
    while (!queue.empty()) {
        const std::size_t q = queue.front();
        queue.pop_front();
        for (std::size_t n : adj[q]) {
            if (dist[n] == unreached) {
                dist[n] = dist[q] + 1;
                queue.push_back(n);
            }
        }
    }
    if (dist[from] == unreached) {
        throw CompileError("no path between physical qubits " +
                           std::to_string(from) + " and " + std::to_string(to));
    }
    std::vector<std::size_t> path{from};
    while (path.back() != to) {
        const std::size_t cur = path.back();
        for (std::size_t n : adj[cur]) {
            if (dist[n] + 1 == dist[cur]) {
                path.push_back(n);
                break;
            }
        }
    }
    return path;
}

/// Layouts map logical qubit to physical qubit and cover every device qubit.
struct RoutedCircuit {
    Circuit circuit;
    std::vector<Qubit> initial_layout;
    std::vector<Qubit> final_layout;
};

/// Places logical qubit i on physical qubit i and inserts SWAPs so that every
/// two-qubit gate acts on coupled qubits. Each SWAP moves the first operand
/// one step along the shortest path toward the second.
inline RoutedCircuit route(const Circuit &circuit, const Isa &isa) {
    if (circuit.num_qubits() > isa.num_qubits) {
        throw CompileError("circuit needs " + std::to_string(circuit.num_qubits()) +
                           " qubits but " + isa.name + " has " +
                           std::to_string(isa.num_qubits));
    }
    RoutedCircuit r{Circuit(isa.num_qubits, circuit.num_clbits()), {}, {}};
    std::vector<Qubit> phys(isa.num_qubits);
    std::vector<Qubit> logical(isa.num_qubits);
    for (Qubit q = 0; q < isa.num_qubits; ++q) {
        phys[q] = q;
        logical[q] = q;
    }
    r.initial_layout = phys;

    const auto place = [&](const GateOp &op) {
        if (op.gate.num_qubits() == 1) {
            return GateOp(op.gate, phys[op.qubits[0]]);
        }
        const Qubit la = op.qubits[0];
        const Qubit lb = op.qubits[1];
        if (!isa.adjacent(phys[la], phys[lb])) {
            const auto path = shortest_path(isa, phys[la], phys[lb]);
            for (std::size_t i = 0; i + 2 < path.size(); ++i) {
                const Qubit p = path[i];
                const Qubit n = path[i + 1];
                r.circuit.swap(p, n);
                std::swap(logical[p], logical[n]);
                phys[logical[p]] = p;
                phys[logical[n]] = n;
            }
        }
        return GateOp(op.gate, phys[la], phys[lb]);
    };

    for (const auto &instr : circuit.instructions()) {
        if (const auto *g = std::get_if<GateOp>(&instr)) {
            r.circuit.append(place(*g));
        } else if (const auto *m = std::get_if<Measure>(&instr)) {
            r.circuit.measure(phys[m->qubit], m->clbit);
        } else if (const auto *rs = std::get_if<Reset>(&instr)) {
            r.circuit.reset(phys[rs->qubit]);
        } else {
            const auto &c = std::get<Conditional>(instr);
            const GateOp placed = place(c.op);
            r.circuit.c_if(c.clbit, c.expected, placed);
        }
    }
    r.final_layout = phys;
    return r;
}

/// Sums runs of unconditional Rz gates on the same qubit and drops those
/// that come to zero.
inline Circuit merge_rz(const Circuit &circuit) {
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<Instruction> out;
    std::vector<std::size_t> pending(circuit.num_qubits(), none);
    for (const auto &instr : circuit.instructions()) {
        const auto *g = std::get_if<GateOp>(&instr);
        if (g != nullptr && g->gate.name() == GateName::Rz) {
            const Qubit q = g->qubits[0];
            if (pending[q] != none) {
                auto &prev = std::get<GateOp>(out[pending[q]]);
                prev.gate = rz(wrap_angle(prev.gate.param(0) + g->gate.param(0)));
                continue;
            }
            pending[q] = out.size();
            out.push_back(instr);
            continue;
        }
        for (Qubit q : qubits_of(instr)) {
            pending[q] = none;
        }
        out.push_back(instr);
    }
    Circuit merged(circuit.num_qubits(), circuit.num_clbits());
    for (auto &instr : out) {
        const auto *g = std::get_if<GateOp>(&instr);
        if (g != nullptr && g->gate.name() == GateName::Rz &&
            std::abs(wrap_angle(g->gate.param(0))) < 1e-12) {
            continue;
        }
        merged.append(std::move(instr));
    }
    return merged;
}

struct CompiledCircuit {
    Circuit circuit;
    std::vector<Qubit> initial_layout;
    std::vector<Qubit> final_layout;
    /// Phase-invariant distance between the original and the compiled circuit
    /// after undoing the routing permutation; empty when not computed.
    std::optional<double> phase_distance;
};

/// Largest original width for which compile() verifies its output.
inline constexpr std::size_t kMaxVerifiedQubits = 8;
/// Cap on the number of physical qubits the verification may span.
inline constexpr std::size_t kMaxVerifiedSpan = 10;

/// Distance between `original` (logical qubits) and `compiled` (physical
/// qubits) once the compiled result is corrected by the layout permutation.
/// Only the physical qubits that are touched or hold a logical qubit take
/// part. Returns nullopt when that set exceeds `max_span` qubits.
inline std::optional<double>
layout_corrected_distance(const Circuit &original, const Circuit &compiled,
                          std::span<const Qubit> initial_layout,
                          std::span<const Qubit> final_layout,
                          std::size_t max_span = kMaxVerifiedSpan) {
    std::vector<bool> active(compiled.num_qubits(), false);
    for (const auto &instr : compiled.instructions()) {
        for (Qubit q : qubits_of(instr)) {
            active[q] = true;
        }
    }
    for (Qubit l = 0; l < original.num_qubits(); ++l) {
        active[initial_layout[l]] = true;
    }
    std::vector<std::size_t> compact(compiled.num_qubits(), 0);
    std::size_t k = 0;
    for (Qubit p = 0; p < compiled.num_qubits(); ++p) {
        if (active[p]) {
            compact[p] = k++;
        }
    }
    if (k > max_span) {
        return std::nullopt;
    }

    Circuit lhs(k, 0);
    for (const auto &instr : original.instructions()) {
        const auto &g = std::get<GateOp>(instr);
        if (g.gate.num_qubits() == 1) {
            lhs.gate(g.gate, compact[initial_layout[g.qubits[0]]]);
        } else {
            lhs.gate(g.gate, compact[initial_layout[g.qubits[0]]],
                     compact[initial_layout[g.qubits[1]]]);
        }
    }
    Circuit rhs(k, 0);
    for (const auto &instr : compiled.instructions()) {
        const auto &g = std::get<GateOp>(instr);
        if (g.gate.num_qubits() == 1) {
            rhs.gate(g.gate, compact[g.qubits[0]]);
        } else {
            rhs.gate(g.gate, compact[g.qubits[0]], compact[g.qubits[1]]);
        }
    }
    const UnitaryMatrix u = circuit_unitary(lhs);

    // bit compact(initial[l]) of the input lands on bit compact(final[l])
    std::vector<std::pair<std::size_t, std::size_t>> moves;
    for (Qubit l = 0; l < initial_layout.size(); ++l) {
        if (active[initial_layout[l]]) {
            moves.emplace_back(compact[initial_layout[l]],
                               compact[final_layout[l]]);
        }
    }
    const std::size_t dim = std::size_t{1} << k;
    UnitaryMatrix expected(dim);
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t y = 0;
        for (const auto &[from, to] : moves) {
            y |= ((x >> from) & 1U) << to;
        }
        for (std::size_t col = 0; col < dim; ++col) {
            expected(y, col) = u(x, col);
        }
    }
    return phase_distance(expected, circuit_unitary(rhs));
}

/// Full pipeline: route, translate two-qubit gates, decompose single-qubit
/// gates, merge adjacent Rz. Measurements, resets and condition bits pass
/// through with their qubits relabelled.
inline CompiledCircuit compile(const Circuit &circuit, const Isa &isa) {
    RoutedCircuit routed = route(circuit, isa);
    const auto lower = [&](const GateOp &op) {
        std::vector<GateOp> ops;
        if (op.gate.num_qubits() == 2) {
            ops = translate_2q(op, isa);
        } else {
            for (const Gate &g : decompose_1q(op.gate, isa)) {
                ops.emplace_back(g, op.qubits[0]);
            }
        }
        return ops;
    };

    Circuit lowered(routed.circuit.num_qubits(), routed.circuit.num_clbits());
    for (const auto &instr : routed.circuit.instructions()) {
        if (const auto *g = std::get_if<GateOp>(&instr)) {
            for (const GateOp &op : lower(*g)) {
                lowered.append(op);
            }
        } else if (const auto *c = std::get_if<Conditional>(&instr)) {
            for (const GateOp &op : lower(c->op)) {
                lowered.c_if(c->clbit, c->expected, op);
            }
        } else {
            lowered.append(instr);
        }
    }
    const BasisGate *rz_basis = isa.find_basis(GateName::Rz);
    if (rz_basis != nullptr &&
        std::holds_alternative<FreeParams>(rz_basis->params)) {
        lowered = merge_rz(lowered);
    }

    CompiledCircuit out{std::move(lowered), std::move(routed.initial_layout),
                        std::move(routed.final_layout), std::nullopt};
    if (circuit.is_unitary() && circuit.num_qubits() <= kMaxVerifiedQubits) {
        out.phase_distance = layout_corrected_distance(
            circuit, out.circuit, out.initial_layout, out.final_layout);
    }
    return out;
}

/// Basis and topology check with no simulation. Returns one message per
/// offending instruction; empty means the circuit conforms.
inline std::vector<std::string> validate_compiled(const Circuit &circuit,
                                                  const Isa &isa) {
    std::vector<std::string> problems;
    if (circuit.num_qubits() > isa.num_qubits) {
        problems.push_back("circuit has " + std::to_string(circuit.num_qubits()) +
                           " qubits, device has " +
                           std::to_string(isa.num_qubits));
        return problems;
    }
    const auto &instrs = circuit.instructions();
    for (std::size_t i = 0; i < instrs.size(); ++i) {
        const GateOp *op = gate_op_of(instrs[i]);
        if (op == nullptr) {
            continue;
        }
        const std::string where = "instruction " + std::to_string(i) + ": ";
        const BasisGate *b = isa.find_basis(op->gate.name());
        if (b == nullptr) {
            problems.push_back(where + std::string(to_string(op->gate.name())) +
                               " is not a basis gate");
            continue;
        }
        if (!satisfies(b->params, op->gate)) {
            problems.push_back(where + std::string(to_string(op->gate.name())) +
                               " parameters violate the basis constraint");
        }
        if (op->gate.num_qubits() == 2 &&
            !isa.allows(op->qubits[0], op->qubits[1])) {
            problems.push_back(where + "no coupling " +
                               std::to_string(op->qubits[0]) + "->" +
                               std::to_string(op->qubits[1]));
        }
    }
    return problems;
}

} // namespace qstack
