#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "qstack/qstack.hpp"
#include "test_support.hpp"

using namespace qstack;
namespace t = qstack::test;

namespace {

Counts shots(const Circuit &c, std::uint64_t n = 1000, std::uint64_t seed = 5) {
    RunConfig cfg;
    cfg.shots = n;
    cfg.seed = seed;
    return run(c, cfg);
}

// Gate-only prefix of a circuit (everything before the first non-gate).
Circuit unitary_prefix(const Circuit &c) {
    Circuit out(c.num_qubits(), 0);
    for (const auto &instr : c.instructions()) {
        if (!std::holds_alternative<GateOp>(instr)) {
            break;
        }
        out.append(instr);
    }
    return out;
}

std::string binary(std::size_t v, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t k = 0; k < width; ++k) {
        if ((v >> k) & 1U) {
            s[width - 1 - k] = '1';
        }
    }
    return s;
}

TEST(RandomBit, Shape) {
    const Circuit c = random_bit_circuit();
    EXPECT_EQ(emit_quil(c), "H 0\nMEASURE 0 [0]\n");
    EXPECT_EQ(depth(c), 2u);
    EXPECT_EQ(estimate_resources(c).gate_counts.at("H"), 1u);
}

TEST(Teleportation, Layout) {
    const Circuit c = teleportation_circuit();
    EXPECT_EQ(c.num_qubits(), 3u);
    EXPECT_EQ(c.num_clbits(), 3u);
    ASSERT_EQ(c.size(), 9u);
    EXPECT_EQ(std::get<Conditional>(c.instructions()[6]).clbit, 0u);
    EXPECT_EQ(std::get<Conditional>(c.instructions()[6]).op.gate.name(), GateName::Z);
    EXPECT_EQ(std::get<Conditional>(c.instructions()[7]).clbit, 1u);
    EXPECT_EQ(std::get<Conditional>(c.instructions()[7]).op.gate.name(), GateName::X);
    EXPECT_THROW(teleportation_circuit({Gate(GateName::CZ)}), CircuitError);
}

TEST(Teleportation, TransfersArbitraryStates) {
    // probability of reading 1 on the target equals sin^2(theta/2)
    for (double theta : {0.3, 1.0, 2.0, 2.8}) {
        const Counts c = shots(teleportation_circuit({ry(theta)}), 20000, 17);
        std::uint64_t ones = 0;
        for (const auto &[k, v] : c.histogram) {
            ones += k.front() == '1' ? v : 0;
        }
        const double want = std::pow(std::sin(theta / 2), 2);
        EXPECT_NEAR(static_cast<double>(ones) / 20000.0, want, 0.02) << theta;
    }
}

TEST(DeutschJozsa, ConstantAndBalanced) {
    EXPECT_EQ(shots(deutsch_jozsa_circuit(Oracle::constant(false, 3)))["000"], 1000u);
    EXPECT_EQ(shots(deutsch_jozsa_circuit(Oracle::constant(true, 3)))["000"], 1000u);
    EXPECT_EQ(shots(deutsch_jozsa_circuit(Oracle::balanced("101")))["000"], 0u);
    EXPECT_EQ(shots(deutsch_jozsa_circuit(Oracle::constant(true, 1)))["0"], 1000u);
}

TEST(DeutschJozsa, RejectsBadOracles) {
    EXPECT_THROW(deutsch_jozsa_circuit(Oracle::secret("101")), CircuitError);
    EXPECT_THROW(deutsch_jozsa_circuit(Oracle::balanced("000")), CircuitError);
    EXPECT_THROW(deutsch_jozsa_circuit(Oracle::constant(false, 0)), CircuitError);
}

TEST(BernsteinVazirani, RecoversSecret) {
    for (const char *s : {"101", "0", "1111", "0110"}) {
        EXPECT_EQ(shots(bernstein_vazirani_circuit(s))[s], 1000u) << s;
    }
    EXPECT_THROW(bernstein_vazirani_circuit(""), CircuitError);
    EXPECT_THROW(bernstein_vazirani_circuit("10a"), CircuitError);
}

TEST(Qft, SingleQubitIsHadamard) {
    const Circuit c = qft_circuit(1);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(std::get<GateOp>(c.instructions()[0]).gate.name(), GateName::H);
    EXPECT_THROW(qft_circuit(0), CircuitError);
}

TEST(Qft, MatchesDftMatrix) {
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto want = t::dft(n);
        EXPECT_LT(t::dense_max_diff(want, circuit_unitary(qft_circuit(n))), 1e-12)
            << n;
    }
}

TEST(Qft, InverseCancels) {
    for (std::size_t n = 1; n <= 6; ++n) {
        Circuit c = qft_circuit(n);
        const Circuit undo = inverse(qft_circuit(n));
        for (const auto &instr : undo.instructions()) {
            c.append(instr);
        }
        const std::size_t dim = std::size_t{1} << n;
        EXPECT_LT(phase_distance(circuit_unitary(c), UnitaryMatrix::identity(dim)),
                  1e-10);
    }
}

TEST(ControlledPhase, IsDiagonalPhase) {
    const double theta = 0.913;
    Circuit c(2, 0);
    append_controlled_phase(c, theta, 0, 1);
    const UnitaryMatrix u = circuit_unitary(c);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const Complex want =
                i != j ? 0.0 : (i == 3 ? std::polar(1.0, theta) : Complex(1.0));
            EXPECT_LT(std::abs(u(i, j) - want), 1e-14);
        }
    }
}

TEST(MultiControlledZ, FlipsOnlyAllOnes) {
    for (std::size_t k = 1; k <= 5; ++k) {
        Circuit c(k, 0);
        std::vector<Qubit> qs(k);
        for (Qubit q = 0; q < k; ++q) {
            qs[q] = q;
        }
        append_multi_controlled_z(c, qs);
        const UnitaryMatrix u = circuit_unitary(c);
        const std::size_t dim = std::size_t{1} << k;
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                const Complex want =
                    i != j ? 0.0 : (i == dim - 1 ? Complex(-1.0) : Complex(1.0));
                EXPECT_LT(std::abs(u(i, j) - want), 1e-12) << k;
            }
        }
    }
}

TEST(Grover, TwoQubitsIsExact) {
    for (std::size_t m = 0; m < 4; ++m) {
        const std::string key = binary(m, 2);
        EXPECT_EQ(shots(grover_circuit(key, 1))[key], 1000u) << key;
    }
}

TEST(Grover, ThreeQubitsTwoIterations) {
    // amplitude after k iterations is sin((2k+1) asin(1/sqrt N))
    const double want = std::pow(std::sin(5.0 * std::asin(1.0 / std::sqrt(8.0))), 2);
    const Counts c = shots(grover_circuit("101", 2), 10000, 23);
    EXPECT_NEAR(static_cast<double>(c["101"]) / 10000.0, want, 0.02);
    const StateVector s = get_statevector(unitary_prefix(grover_circuit("101", 2)));
    EXPECT_NEAR(std::norm(s[5]), want, 1e-12);
}

TEST(Grover, Preconditions) {
    EXPECT_THROW(grover_circuit("11", 0), CircuitError);
    EXPECT_THROW(grover_circuit("", 1), CircuitError);
}

TEST(Library, CompilesToBothDevices) {
    const std::vector<Circuit> circuits{
        random_bit_circuit(),
        teleportation_circuit({Gate(GateName::H)}),
        deutsch_jozsa_circuit(Oracle::balanced("110")),
        bernstein_vazirani_circuit("1011"),
        qft_circuit(4),
        grover_circuit("011", 2),
    };
    for (const char *name : {"agave", "ibmqx5"}) {
        const Isa isa = load_isa(name);
        for (const Circuit &c : circuits) {
            const Circuit prefix = unitary_prefix(c);
            const auto cc = compile(prefix, isa);
            ASSERT_TRUE(cc.phase_distance.has_value());
            EXPECT_LT(*cc.phase_distance, 1e-10);
            EXPECT_LT(t::swap_corrected_distance(prefix, cc), 1e-10);
            EXPECT_TRUE(validate_compiled(compile(c, isa).circuit, isa).empty());
        }
    }
}

TEST(Library, GuaranteesSurviveCompilation) {
    for (const char *name : {"agave", "ibmqx5"}) {
        const Isa isa = load_isa(name);
        const auto bv = compile(bernstein_vazirani_circuit("1011"), isa);
        EXPECT_EQ(shots(bv.circuit, 500)["1011"], 500u) << name;
        const auto dj = compile(deutsch_jozsa_circuit(Oracle::balanced("011")), isa);
        EXPECT_EQ(shots(dj.circuit, 500)["000"], 0u) << name;
        const auto dj0 = compile(deutsch_jozsa_circuit(Oracle::constant(true, 3)), isa);
        EXPECT_EQ(shots(dj0.circuit, 500)["000"], 500u) << name;
        const auto tele = compile(teleportation_circuit({Gate(GateName::X)}), isa);
        const Counts c = shots(tele.circuit, 500);
        for (const auto &[k, v] : c.histogram) {
            EXPECT_EQ(k.front(), '1') << name;
        }
    }
}

} // namespace
