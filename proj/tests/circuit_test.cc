#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracle.h"
#include "smqc/circuit.h"

using namespace smqc;

namespace {

std::string read_circuit(const std::string &name) {
    std::ifstream in(std::string(SMQC_CIRCUITS_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t parse_error_line(std::string_view text) {
    try {
        parse_circuit(text);
    } catch (const ParseError &e) {
        return e.line();
    }
    return 0;
}

const LqcRound &lqc(const Schedule &s, std::size_t k) {
    return std::get<LqcRound>(s.rounds.at(k));
}
const NlCnotRound &nl(const Schedule &s, std::size_t k) {
    return std::get<NlCnotRound>(s.rounds.at(k));
}

}  // namespace

TEST(parse, basic_circuit) {
    Circuit c = parse_circuit(read_circuit("measured.circ"));
    EXPECT_EQ(c.ownership.party_count(), 2u);
    EXPECT_EQ(c.ownership.num_qubits(), 3u);
    EXPECT_EQ(c.ownership.qubits_of(PartyId{0}), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(c.ownership.input_size(PartyId{1}), 1u);
    ASSERT_EQ(c.ops.size(), 5u);
    EXPECT_EQ(std::get<SingleQubitGate>(c.ops[0].gate).name, "h");
    EXPECT_EQ(c.ops[0].line, 7u);
    EXPECT_EQ(std::get<CnotGate>(c.ops[1].gate).target, 2u);
    EXPECT_EQ(std::get<LocalMeasure>(c.ops[2].gate).qubits, (std::vector<std::size_t>{0, 1}));
}

TEST(parse, explicit_matrix) {
    Circuit c = parse_circuit("parties 1\nqubits 1\nowner 0 0\nu 0 0 0 1 0 1 0 0 0\n");
    EXPECT_EQ(std::get<SingleQubitGate>(c.ops[0].gate).matrix, gates::X());
}

TEST(parse, error_lines) {
    EXPECT_EQ(parse_error_line("parties 2\nqubits 1\nowner 0 0\nfoo 0\n"), 4u);
    EXPECT_EQ(parse_error_line("parties 2\nqubits 1\nowner 0 5\n"), 3u);
    EXPECT_EQ(parse_error_line("parties 1\nqubits 1\nowner 0 0\n\n# c\nh 3\n"), 6u);
    EXPECT_EQ(parse_error_line("h 0\n"), 1u);
    EXPECT_EQ(parse_error_line("parties 1\nqubits 1\nowner 0 0\ncnot 0\n"), 4u);
    EXPECT_EQ(parse_error_line("parties 1\nqubits 1\nowner 0 0\nh x\n"), 4u);
    // Missing owners are only known at end of input.
    EXPECT_EQ(parse_error_line("parties 1\nqubits 2\nowner 0 0\n"), 4u);
    try {
        parse_circuit("parties 1\nqubits 1\nowner 0 0\nfoo 0\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_STREQ(e.what(), "line 4: unknown gate 'foo'");
    }
}

TEST(parse, round_trip) {
    Rng rng(1);
    RandomCircuitOptions opt;
    opt.measure_probability = 0.1;
    for (int trial = 0; trial < 20; trial++) {
        Circuit c = random_circuit(rng, opt);
        std::string text = format_circuit(c);
        Circuit back = parse_circuit(text);
        EXPECT_EQ(format_circuit(back), text);
        ASSERT_EQ(back.ops.size(), c.ops.size());
        for (std::size_t k = 0; k < c.ops.size(); k++) {
            EXPECT_EQ(back.ops[k].qubits(), c.ops[k].qubits());
            if (const auto *g = std::get_if<SingleQubitGate>(&c.ops[k].gate)) {
                EXPECT_LT(std::get<SingleQubitGate>(back.ops[k].gate).matrix.max_abs_diff(g->matrix), 1e-15);
            }
        }
    }
}

TEST(validate, accepts_example_circuits) {
    for (auto name : {"two_party_cnot.circ", "three_party.circ", "measured.circ", "alternating.circ", "empty.circ"}) {
        EXPECT_TRUE(validate(parse_circuit(read_circuit(name))).empty()) << name;
    }
}

TEST(validate, rejections) {
    Circuit c = parse_circuit(read_circuit("cross_owner_measure.circ"));
    auto r = validate(c);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].kind, RejectionKind::kNonlocalMeasurement);
    EXPECT_EQ(r[0].line, 8u);
    EXPECT_EQ(r[0].message, "nonlocal measurement rejected: qubits span P0 and P1");
    EXPECT_THROW(build_schedule(c), InvalidCircuit);

    Circuit bad = parse_circuit("parties 1\nqubits 2\nowner 0 0\nowner 1 0\nu 0 1 0 1 0 0 0 1 0\ncnot 1 1\n");
    r = validate(bad);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].kind, RejectionKind::kNonUnitary);
    EXPECT_EQ(r[1].kind, RejectionKind::kBadOperands);
    EXPECT_EQ(r[1].op_index, 1u);
}

TEST(schedule, alternating_circuit) {
    Schedule s = build_schedule(parse_circuit(read_circuit("alternating.circ")));
    ASSERT_EQ(s.rounds.size(), 7u);
    EXPECT_EQ(s.nl_cnot_count(), 3u);

    EXPECT_EQ(lqc(s, 0).party, PartyId{0});
    EXPECT_EQ(lqc(s, 0).ops.size(), 1u);

    EXPECT_EQ(nl(s, 1).control_party, PartyId{0});
    EXPECT_EQ(nl(s, 1).control_qubit, 0u);
    EXPECT_EQ(nl(s, 1).target_party, PartyId{1});
    EXPECT_EQ(nl(s, 1).target_qubit, 2u);

    EXPECT_EQ(lqc(s, 2).party, PartyId{1});
    EXPECT_EQ(lqc(s, 2).ops.size(), 2u);

    EXPECT_EQ(nl(s, 3).control_party, PartyId{1});
    EXPECT_EQ(nl(s, 3).control_qubit, 3u);
    EXPECT_EQ(nl(s, 3).target_qubit, 1u);

    // s 1 and the local cnot 0 1 share a round.
    EXPECT_EQ(lqc(s, 4).party, PartyId{0});
    ASSERT_EQ(lqc(s, 4).ops.size(), 2u);
    EXPECT_TRUE(std::holds_alternative<CnotGate>(lqc(s, 4).ops[1].gate));

    EXPECT_EQ(nl(s, 5).control_qubit, 1u);
    EXPECT_EQ(nl(s, 5).target_qubit, 2u);
    EXPECT_EQ(lqc(s, 6).party, PartyId{1});

    std::string text = describe_schedule(s);
    EXPECT_NE(text.find("3 NL-CNOT rounds"), std::string::npos);
}

TEST(schedule, empty_and_local_only) {
    Schedule empty = build_schedule(parse_circuit(read_circuit("empty.circ")));
    EXPECT_EQ(empty.nl_cnot_count(), 0u);
    EXPECT_NE(describe_schedule(empty).find("0 NL-CNOT rounds"), std::string::npos);

    // Two parties with only local work get one round each, in party order.
    Schedule local = build_schedule(parse_circuit("parties 2\nqubits 2\nowner 0 1\nowner 1 0\nh 0\nx 1\nz 0\n"));
    ASSERT_EQ(local.rounds.size(), 2u);
    EXPECT_EQ(lqc(local, 0).party, PartyId{0});
    EXPECT_EQ(lqc(local, 1).party, PartyId{1});
    EXPECT_EQ(lqc(local, 1).ops.size(), 2u);
}

TEST(schedule, classify) {
    OwnershipMap own(2, {PartyId{0}, PartyId{0}, PartyId{1}});
    EXPECT_EQ(classify_cnot({0, 1}, own), CnotKind::kLocal);
    EXPECT_EQ(classify_cnot({2, 0}, own), CnotKind::kNonLocal);
}

TEST(schedule, flatten_preserves_semantics) {
    Rng rng(2);
    for (int trial = 0; trial < 20; trial++) {
        RandomCircuitOptions opt;
        opt.qubits = 5;
        opt.gates = 30;
        Circuit c = random_circuit(rng, opt);
        Schedule s = build_schedule(c);
        Circuit flat{s.flatten(), c.ownership};
        StateVector in = random_state(5, rng);
        EXPECT_GT(oracle::overlap(oracle::circuit_output(flat, oracle::vec(in)),
                                  oracle::circuit_output(c, oracle::vec(in))),
                  1 - 1e-12);
        // Every NL-CNOT round really spans two owners.
        for (const auto &r : s.rounds) {
            if (const auto *n = std::get_if<NlCnotRound>(&r)) {
                EXPECT_NE(n->control_party, n->target_party);
                EXPECT_EQ(c.ownership.owner(n->control_qubit), n->control_party);
                EXPECT_EQ(c.ownership.owner(n->target_qubit), n->target_party);
            }
        }
    }
}

TEST(oracle_simulate, matches_dense_product) {
    Rng rng(3);
    for (int trial = 0; trial < 20; trial++) {
        RandomCircuitOptions opt;
        opt.parties = 2;
        opt.qubits = 4;
        opt.gates = 25;
        Circuit c = random_circuit(rng, opt);
        StateVector in = random_state(4, rng);
        auto src = OutcomeSource::sampled(0);
        OracleResult r = oracle_simulate(c, in, src);
        EXPECT_TRUE(r.measurements.empty());
        EXPECT_GT(oracle::overlap(r.output, oracle::circuit_output(c, oracle::vec(in))), 1 - 1e-12);
    }
}

TEST(oracle_simulate, measurement_records) {
    Circuit c = parse_circuit(read_circuit("measured.circ"));
    // h 0; cnot 0 2 makes q0 and q2 equal; q1 stays 0.
    std::size_t branches = enumerate_branches([&](OutcomeSource &src) {
        OracleResult r = oracle_simulate(c, StateVector(3), src);
        ASSERT_EQ(r.measurements.size(), 3u);
        EXPECT_EQ(r.measurements[0].party, PartyId{0});
        EXPECT_EQ(r.measurements[1].bit, 0);
        EXPECT_EQ(r.measurements[2].party, PartyId{1});
        EXPECT_NEAR(src.branch_probability(), 0.25, 1e-12);
    });
    EXPECT_EQ(branches, 4u);
    auto src = OutcomeSource::sampled(0);
    EXPECT_THROW(oracle_simulate(c, StateVector(2), src), std::invalid_argument);
}

TEST(random_circuit, respects_options) {
    Rng rng(4);
    RandomCircuitOptions opt;
    opt.parties = 3;
    opt.qubits = 6;
    opt.gates = 40;
    opt.max_nonlocal_cnots = 2;
    for (int trial = 0; trial < 30; trial++) {
        Circuit c = random_circuit(rng, opt);
        EXPECT_EQ(c.ops.size(), 40u);
        EXPECT_TRUE(validate(c).empty());
        EXPECT_LE(build_schedule(c).nl_cnot_count(), 2u);
        for (std::uint16_t p = 0; p < 3; p++) {
            EXPECT_GE(c.ownership.input_size(PartyId{p}), 1u);
        }
    }
    opt.measure_probability = 0.5;
    opt.cross_owner_measure_probability = 1;
    bool rejected = false;
    for (int trial = 0; trial < 10; trial++) {
        rejected |= !validate(random_circuit(rng, opt)).empty();
    }
    EXPECT_TRUE(rejected);
    opt.qubits = 2;
    EXPECT_THROW(random_circuit(rng, opt), std::invalid_argument);
}
