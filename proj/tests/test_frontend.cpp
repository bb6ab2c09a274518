#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <string>

#include "qstack/qstack.hpp"
#include "test_support.hpp"

using namespace qstack;
namespace t = qstack::test;

namespace {

constexpr double kPi = std::numbers::pi;

const std::string kRandomBitQuil = "H 0\nMEASURE 0 [0]\n";
const std::string kRandomBitQasm = "OPENQASM 2.0;\n"
                                   "include \"qelib1.inc\";\n"
                                   "qreg q0[1];\n"
                                   "creg c0[1];\n"
                                   "h q0[0];\n"
                                   "measure q0[0] -> c0[0];\n";

ParseError quil_error(std::string_view text) {
    try {
        parse_quil(text);
    } catch (const ParseError &e) {
        return e;
    }
    ADD_FAILURE() << "no ParseError for: " << text;
    return ParseError(0, 0, "");
}

ParseError qasm_error(std::string_view text) {
    try {
        parse_qasm(text);
    } catch (const ParseError &e) {
        return e;
    }
    ADD_FAILURE() << "no ParseError for: " << text;
    return ParseError(0, 0, "");
}

// ---- Quil ----

TEST(Quil, ParsesRandomBitListing) {
    const Circuit c = parse_quil("H 0\nMEASURE 0 [0]");
    EXPECT_EQ(c, random_bit_circuit());
}

TEST(Quil, EmptyTextIsEmptyCircuit) {
    const Circuit c = parse_quil("");
    EXPECT_EQ(c.num_qubits(), 0u);
    EXPECT_EQ(c.num_clbits(), 0u);
    EXPECT_TRUE(c.empty());
}

TEST(Quil, ParsedRegisterSizesFollowMaxIndex) {
    const Circuit c = parse_quil("RZ(1.5707963267948966) 2");
    EXPECT_EQ(c.num_qubits(), 3u);
    EXPECT_EQ(c.num_clbits(), 0u);
    ASSERT_EQ(c.size(), 1u);
    const auto &op = std::get<GateOp>(c.instructions()[0]);
    EXPECT_EQ(op.gate.name(), GateName::Rz);
    EXPECT_EQ(op.gate.param(0), kPi / 2);
    EXPECT_EQ(op.qubits[0], 2u);
    EXPECT_EQ(parse_quil(emit_quil(c)), c);
}

TEST(Quil, EmitsRandomBitListing) {
    EXPECT_EQ(emit_quil(random_bit_circuit()), kRandomBitQuil);
    EXPECT_EQ(emit_quil(Circuit(0, 0)), "");
}

TEST(Quil, ConditionalExtension) {
    Circuit c(3, 1);
    c.c_if(0, true, GateOp(Gate(GateName::Z), 2));
    EXPECT_EQ(emit_quil(c), "IF [0] THEN Z 2\n");
    EXPECT_EQ(parse_quil("IF [0] THEN Z 2\n"), c);
}

TEST(Quil, CommentsWhitespaceAndAngleExpressions) {
    const Circuit c = parse_quil("# prep\n  RX(pi/2) 0   # trailing\n\n"
                                 "CNOT 0 1\nRZ(-(pi + pi)/4) 1\nRESET 0\n");
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(std::get<GateOp>(c.instructions()[0]).gate, rx(kPi / 2));
    EXPECT_EQ(std::get<GateOp>(c.instructions()[2]).gate.param(0), -kPi / 2);
    EXPECT_TRUE(std::holds_alternative<Reset>(c.instructions()[3]));
}

TEST(Quil, ErrorsCarryLineAndColumn) {
    const auto unknown = quil_error("H 0\nFOO 1\n");
    EXPECT_EQ(unknown.line(), 2u);
    EXPECT_EQ(unknown.column(), 1u);
    const auto angle = quil_error("RX(1.0.0) 0");
    EXPECT_EQ(angle.line(), 1u);
    EXPECT_GE(angle.column(), 1u);
    EXPECT_EQ(quil_error("H -1").line(), 1u);
    EXPECT_EQ(quil_error("CNOT 0 0").line(), 1u);
    EXPECT_EQ(quil_error("RX 0").line(), 1u);
    EXPECT_EQ(quil_error("H 0 1").line(), 1u);
    EXPECT_EQ(quil_error("MEASURE 0 [x]").line(), 1u);
    EXPECT_EQ(quil_error("\n\nIF [0] THEN MEASURE 0 [0]").line(), 3u);
}

TEST(Quil, UnsupportedConstructsNameTheInstruction) {
    Circuit c(1, 0);
    c.h(0).sqrt_x(0);
    try {
        emit_quil(c);
        FAIL() << "expected EmitError";
    } catch (const EmitError &e) {
        EXPECT_EQ(e.instruction(), 1u);
    }
    Circuit u(1, 0);
    u.gate(u3(1, 2, 3), 0);
    EXPECT_THROW(emit_quil(u), EmitError);
}

// ---- OpenQASM ----

TEST(Qasm, ParsesRandomBitListing) {
    EXPECT_EQ(parse_qasm(kRandomBitQasm), random_bit_circuit());
}

TEST(Qasm, HeaderOnlyIsEmptyCircuit) {
    const Circuit c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    EXPECT_EQ(c.num_qubits(), 0u);
    EXPECT_TRUE(c.empty());
    EXPECT_EQ(emit_qasm(Circuit(0, 0)),
              "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
}

TEST(Qasm, EmitsRandomBitListing) {
    EXPECT_EQ(emit_qasm(random_bit_circuit()), kRandomBitQasm);
}

TEST(Qasm, BellBody) {
    Circuit c(2, 0);
    c.h(0).cnot(0, 1);
    const std::string text = emit_qasm(c);
    EXPECT_NE(text.find("h q0[0];\ncx q0[0],q0[1];\n"), std::string::npos);
    EXPECT_EQ(parse_qasm(text), c);
}

TEST(Qasm, SingleBitConditional) {
    const Circuit c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n"
                                 "qreg q[3];\ncreg c0[1];\ncreg c1[1];\n"
                                 "if(c0==1) z q[2];\n");
    ASSERT_EQ(c.size(), 1u);
    const auto &cond = std::get<Conditional>(c.instructions()[0]);
    EXPECT_EQ(cond.clbit, 0u);
    EXPECT_TRUE(cond.expected);
    EXPECT_EQ(cond.op.gate.name(), GateName::Z);
    EXPECT_EQ(cond.op.qubits[0], 2u);
}

TEST(Qasm, RegistersFlattenInDeclarationOrder) {
    const Circuit c = parse_qasm("OPENQASM 2.0;\nqreg a[2];\nqreg b[3];\n"
                                 "creg x[1];\ncreg y[2];\n"
                                 "cx a[1],b[0];\nmeasure b[2] -> y[1];\n");
    EXPECT_EQ(c.num_qubits(), 5u);
    EXPECT_EQ(c.num_clbits(), 3u);
    const auto &g = std::get<GateOp>(c.instructions()[0]);
    EXPECT_EQ(g.qubits[0], 1u);
    EXPECT_EQ(g.qubits[1], 2u);
    const auto &m = std::get<Measure>(c.instructions()[1]);
    EXPECT_EQ(m.qubit, 4u);
    EXPECT_EQ(m.clbit, 2u);
}

TEST(Qasm, BroadcastAndBarrier) {
    const Circuit c = parse_qasm("OPENQASM 2.0;\nqreg q[3];\ncreg c[3];\n"
                                 "h q;\nbarrier q;\nmeasure q -> c;\n");
    EXPECT_EQ(c.size(), 6u);
    EXPECT_EQ(estimate_resources(c).measurement_count, 3u);
}

TEST(Qasm, Errors) {
    EXPECT_EQ(qasm_error("qreg q[1];\n").line(), 1u);
    EXPECT_EQ(qasm_error("OPENQASM 2.0;\nh q[0];\n").line(), 2u);
    const auto arity = qasm_error("OPENQASM 2.0;\nqreg q[2];\ncx q[0];\n");
    EXPECT_EQ(arity.line(), 3u);
    EXPECT_EQ(qasm_error("OPENQASM 2.0;\nqreg q[2];\nh q[5];\n").line(), 3u);
    EXPECT_EQ(qasm_error("OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n").line(), 3u);
    EXPECT_EQ(qasm_error("OPENQASM 2.0;\nqreg q[1];\ncreg c[2];\n"
                         "if(c==1) x q[0];\n")
                  .line(),
              4u);
    EXPECT_EQ(qasm_error("OPENQASM 3.0;\n").line(), 1u);
}

TEST(Qasm, SplitRegistersWhenConditionalsPresent) {
    const Circuit tele = teleportation_circuit({Gate(GateName::H)});
    const std::string text = emit_qasm(tele);
    EXPECT_NE(text.find("creg c0[1];\ncreg c1[1];\ncreg c2[1];\n"),
              std::string::npos);
    EXPECT_NE(text.find("if(c0==1) z q0[2];"), std::string::npos);
    EXPECT_EQ(parse_qasm(text), tele);
}

// ---- round trips ----

Circuit random_program(std::mt19937_64 &rng, bool quil_only) {
    std::vector<GateName> names;
    for (GateName g : kAllGateNames) {
        if (quil_only && (g == GateName::SqrtX || g == GateName::U2 ||
                          g == GateName::U3)) {
            continue;
        }
        names.push_back(g);
    }
    const std::size_t n = 2 + rng() % 4;
    Circuit c(n, n);
    const std::size_t len = rng() % 30;
    for (std::size_t i = 0; i < len; ++i) {
        const int kind = static_cast<int>(rng() % 10);
        if (kind == 0) {
            c.measure(rng() % n, rng() % n);
        } else if (kind == 1) {
            c.reset(rng() % n);
        } else {
            const Gate g = t::random_gate(rng, names[rng() % names.size()]);
            const Qubit a = rng() % n;
            const Qubit b = (a + 1 + rng() % (n - 1)) % n;
            const GateOp op = g.num_qubits() == 1 ? GateOp(g, a) : GateOp(g, a, b);
            if (kind == 2) {
                c.c_if(rng() % n, true, op);
            } else {
                c.append(op);
            }
        }
    }
    // make the parsed register sizes match exactly
    c.measure(n - 1, n - 1);
    return c;
}

TEST(RoundTrip, QuilPreservesCircuits) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const Circuit c = random_program(rng, true);
        EXPECT_EQ(parse_quil(emit_quil(c)), c);
    }
}

TEST(RoundTrip, QasmPreservesCircuits) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 300; ++trial) {
        const Circuit c = random_program(rng, false);
        EXPECT_EQ(parse_qasm(emit_qasm(c)), c);
    }
}

TEST(RoundTrip, CrossDialect) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Circuit c = random_program(rng, true);
        EXPECT_EQ(parse_qasm(emit_qasm(parse_quil(emit_quil(c)))), c);
    }
}

TEST(Frontend, DialectSelection) {
    EXPECT_EQ(dialect_from_path("x/rb.quil"), Dialect::Quil);
    EXPECT_EQ(dialect_from_path("bell.qasm"), Dialect::OpenQASM);
    EXPECT_FALSE(dialect_from_path("bell.txt").has_value());
    EXPECT_EQ(dialect_from_name("qasm"), Dialect::OpenQASM);
    EXPECT_EQ(dialect_from_name("Quil"), Dialect::Quil);
    EXPECT_FALSE(dialect_from_name("cirq").has_value());
    const Circuit c = parse({kRandomBitQuil, Dialect::Quil});
    EXPECT_EQ(emit(c, Dialect::OpenQASM).text, kRandomBitQasm);
    EXPECT_EQ(emit(c, Dialect::OpenQASM).dialect, Dialect::OpenQASM);
}

} // namespace
