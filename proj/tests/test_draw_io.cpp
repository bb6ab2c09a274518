#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "qstack/qstack.hpp"

using namespace qstack;

namespace {

TEST(Draw, RandomBit) {
    EXPECT_EQ(draw_ascii(random_bit_circuit()), "q0: --[H]--[M→c0]--\n");
}

TEST(Draw, EmptyCircuitIsJustLabels) {
    EXPECT_EQ(draw_ascii(Circuit(2, 0)), "q0:\nq1:\n");
    EXPECT_EQ(draw_ascii(Circuit(0, 0)), "");
}

TEST(Draw, Teleportation) {
    const std::string want =
        "q0: --[X]--------*----[H]----[M→c0]--------------------------\n"
        "q1: --[H]---*---[X]--[M→c1]----------------------------------\n"
        "q2: -------[X]-----------------------[Z?c0]--[X?c1]--[M→c2]--\n";
    EXPECT_EQ(draw_ascii(teleportation_circuit({Gate(GateName::X)})), want);
}

TEST(Draw, ConnectorCrossesMiddleWire) {
    Circuit c(3, 0);
    c.cz(0, 2);
    EXPECT_EQ(draw_ascii(c), "q0: --*--\nq1: --|--\nq2: --*--\n");
}

TEST(Draw, ParametersResetAndFalseCondition) {
    Circuit c(1, 1);
    c.rz(0.5, 0).reset(0);
    c.c_if(0, false, GateOp(Gate(GateName::X), 0));
    EXPECT_EQ(draw_ascii(c), "q0: --[Rz(0.5)]--[|0>]--[X?c0=0]--\n");
}

TEST(Draw, Deterministic) {
    const Circuit c = grover_circuit("101", 1);
    EXPECT_EQ(draw_ascii(c), draw_ascii(c));
    const std::string art = draw_ascii(c);
    EXPECT_EQ(std::count(art.begin(), art.end(), '\n'), 3);
}

TEST(CountsJson, ShapeAndOrder) {
    RunConfig cfg;
    cfg.shots = 1;
    cfg.seed = 7;
    const Counts c = run(random_bit_circuit(), cfg);
    const std::string text = counts_json(c);
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["shots"], 1);
    EXPECT_EQ(j.size(), 2u);
    EXPECT_TRUE(text == "{\"0\":1,\"shots\":1}" || text == "{\"1\":1,\"shots\":1}");

    Counts manual;
    manual.shots = 5;
    manual.histogram = {{"01", 2}, {"10", 3}};
    EXPECT_EQ(counts_json(manual), "{\"01\":2,\"10\":3,\"shots\":5}");
}

TEST(ShotLists, OneListPerShot) {
    Circuit c(2, 2);
    c.x(1).measure(0, 0).measure(1, 1);
    RunConfig cfg;
    cfg.shots = 3;
    EXPECT_EQ(shot_lists_json(c, cfg), "[[0,1],[0,1],[0,1]]");
}

TEST(Amplitudes, Csv) {
    Circuit c(1, 0);
    c.x(0);
    EXPECT_EQ(amplitudes_csv(get_statevector(c)), "index,re,im\n0,0,0\n1,1,0\n");
    // values are written so they read back bit for bit
    const StateVector s = get_statevector(qft_circuit(1));
    std::istringstream in(amplitudes_csv(s));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(std::stod(line.substr(2)), s[0].real());
    EXPECT_NEAR(s[0].real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Resources, TextAndJson) {
    const ResourceReport r = estimate_resources(random_bit_circuit());
    EXPECT_EQ(resources_text(r),
              "gate.H:       1\n"
              "gates:        1\n"
              "conditionals: 0\n"
              "measurements: 1\n"
              "resets:       0\n"
              "depth:        2\n");
    EXPECT_EQ(resources_json(r),
              "{\"gate_counts\":{\"H\":1},\"conditional_count\":0,"
              "\"measurement_count\":1,\"reset_count\":0,\"depth\":2}");
}

} // namespace
