// Acceptance suite: one PASS/FAIL line per criterion, exit status nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "oracle.h"
#include "smqc/adversary.h"
#include "smqc/circuit.h"
#include "smqc/commitment.h"
#include "smqc/protocol.h"

using namespace smqc;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string num(double v, const char *f = "%.3e") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

bool run_criterion(int id, const char *title, double limit_seconds, const std::function<Outcome()> &body) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = limit_seconds <= 0 || secs <= limit_seconds;
    bool pass = o.pass && in_time;
    std::printf("criterion %2d: %s  %s: %s (%.2f s", id, pass ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
    if (limit_seconds > 0) {
        std::printf(", limit %.0f s", limit_seconds);
    }
    std::printf(")\n");
    std::fflush(stdout);
    return pass;
}

const NlCnotRound kRound{PartyId{0}, 0, PartyId{1}, 1};

/// One NL-CNOT on control (x) target with both Bell outcomes forced.
StateVector forced_nl_cnot(const StateVector &control, const StateVector &target, std::size_t alice, std::size_t bob,
                           const RoundDeviations &dev, NlCnotRecord *record = nullptr) {
    StateVector joint = control.tensor(target);
    auto src = OutcomeSource::forced({alice, bob});
    NonceSource nonces(alice * 4 + bob);
    Transcript t;
    ProtocolContext ctx{src, nonces, t, 2};
    NlCnotRecord r = nl_cnot(joint, kRound, ctx, dev);
    if (record) {
        *record = r;
    }
    return joint;
}

Outcome criterion1() {
    Rng rng(101);
    double worst = 1;
    std::size_t branches = 0;
    for (int trial = 0; trial < 100; trial++) {
        StateVector a = random_state(1, rng), b = random_state(1, rng);
        oracle::Vec expected = oracle::cnot_of(oracle::vec(a), oracle::vec(b));
        for (std::size_t k = 0; k < 16; k++) {
            NlCnotRecord rec;
            StateVector out = forced_nl_cnot(a, b, k >> 2, k & 3, {}, &rec);
            if (rec.alice.index() != (k >> 2) || rec.bob.index() != (k & 3)) {
                return {false, "forced outcome not honored"};
            }
            worst = std::min(worst, oracle::overlap(out, expected));
            branches++;
        }
    }
    return {worst >= 1 - 1e-10, std::to_string(branches) + " branches, min overlap " + num(worst, "%.15f")};
}

Outcome criterion2() {
    Rng rng(202);
    RandomCircuitOptions opts;  // 3 parties, 8 qubits, 50 gates, <= 3 nonlocal CNOTs
    double worst = 1, worst_ttp = 1;
    std::size_t branches = 0;
    for (int trial = 0; trial < 50; trial++) {
        Circuit c = random_circuit(rng, opts);
        Schedule s = build_schedule(c);
        StateVector input = random_state(c.ownership.num_qubits(), rng);
        oracle::Vec expected = oracle::circuit_output(c, oracle::vec(input));
        SmqcOptions peer;
        peer.seed = static_cast<std::uint64_t>(trial);
        for (const auto &b : run_smqc_exhaustive(s, c.ownership, input, peer)) {
            worst = std::min(worst, oracle::overlap(b.result.output, expected));
            branches++;
        }
        SmqcOptions ttp = peer;
        ttp.backend = Backend::kTtp;
        for (const auto &b : run_smqc_exhaustive(s, c.ownership, input, ttp)) {
            worst_ttp = std::min(worst_ttp, oracle::overlap(b.result.output, expected));
        }
    }
    return {worst >= 1 - 1e-9 && worst_ttp >= 1 - 1e-9,
            "50 circuits, " + std::to_string(branches) + " peer branches, min overlap peer " + num(worst, "%.12f") +
                " ttp " + num(worst_ttp, "%.12f")};
}

Outcome criterion3() {
    Rng rng(303);
    std::array<std::size_t, 4> alice{}, bob{};
    const std::size_t runs = 10000;
    auto src = OutcomeSource::sampled(303);
    NonceSource nonces(303);
    for (std::size_t k = 0; k < runs; k++) {
        StateVector joint = random_state(1, rng).tensor(random_state(1, rng));
        Transcript t;
        ProtocolContext ctx{src, nonces, t, 2};
        NlCnotRecord r = nl_cnot(joint, kRound, ctx);
        alice[r.alice.index()]++;
        bob[r.bob.index()]++;
    }
    double worst = 0;
    for (std::size_t k = 0; k < 4; k++) {
        worst = std::max(worst, std::abs(alice[k] / double(runs) - 0.25));
        worst = std::max(worst, std::abs(bob[k] / double(runs) - 0.25));
    }
    return {worst <= 0.02, "10^4 runs, max |freq - 0.25| = " + num(worst, "%.4f")};
}

Outcome criterion4() {
    std::vector<Transcript> transcripts;
    std::vector<int> labels;
    for (int label = 0; label < 2; label++) {
        StateVector c = label ? basis_state(1, 1) : basis_state(1, 0);
        StateVector t = label ? minus_state() : plus_state();
        for (auto &tr : sample_nl_cnot_transcripts(c, t, 10000, 404 + label)) {
            transcripts.push_back(std::move(tr));
            labels.push_back(label);
        }
    }
    PassiveReport honest = analyze_passive(transcripts, labels);
    double tv = honest.comparisons.at(0).total_variation;

    // a_x copies the input class bit.
    Rng rng(405);
    std::vector<Transcript> leaky;
    std::vector<int> leaky_labels;
    for (int k = 0; k < 2000; k++) {
        int label = k & 1;
        leaky.push_back(exchange_transcript(label, static_cast<int>(rng() & 1), rng()));
        leaky_labels.push_back(label);
    }
    PassiveReport flagged = analyze_passive(leaky, leaky_labels);
    return {tv <= 0.02 && !honest.flagged && flagged.flagged,
            "honest TV " + num(tv, "%.4f") + ", leaky TV " + num(flagged.comparisons.at(0).total_variation, "%.4f") +
                (flagged.flagged ? " (flagged)" : " (not flagged)")};
}

Outcome criterion5() {
    Rng rng(505);
    double worst_rot = 1, worst_flip = 1;
    std::size_t branches = 0;
    for (int i = 0; i < 50; i++) {
        StateVector phi = random_state(1, rng), varphi = random_state(1, rng);
        RoundDeviations flip;
        flip.alice_flips_ax = true;
        oracle::Vec flipped = oracle::cnot_of(oracle::vec(phi), oracle::act(oracle::X2(), oracle::vec(varphi)));
        for (std::size_t k = 0; k < 16; k++) {
            worst_flip = std::min(worst_flip, oracle::overlap(forced_nl_cnot(phi, varphi, k >> 2, k & 3, flip), flipped));
        }
        for (int j = 0; j < 10; j++) {
            Unitary2 u = random_unitary2(rng);
            RoundDeviations rot;
            rot.alice_basis = u;
            oracle::Vec expected =
                oracle::cnot_of(oracle::act(oracle::from(u), oracle::vec(phi)), oracle::vec(varphi));
            for (std::size_t k = 0; k < 16; k++) {
                worst_rot = std::min(worst_rot, oracle::overlap(forced_nl_cnot(phi, varphi, k >> 2, k & 3, rot), expected));
                branches++;
            }
        }
    }
    return {worst_rot >= 1 - 1e-10 && worst_flip >= 1 - 1e-10,
            std::to_string(branches) + " rotated branches, min overlap rotated " + num(worst_rot, "%.12f") +
                ", bit flip " + num(worst_flip, "%.12f")};
}

Outcome criterion6() {
    Rng rng(606);
    const oracle::Dense paulis[] = {oracle::I2(), oracle::X2(), oracle::Y2(), oracle::Z2()};
    std::size_t branches = 0, failures = 0;
    bool reports_pass = true;
    for (int i = 0; i < 10; i++) {
        Unitary2 c = random_clifford(rng);
        ChiAncilla ancilla = i % 2 ? ChiAncilla::kSecond : ChiAncilla::kThird;
        // Ancilla 2 ends up carrying the control, ancilla 3 the target.
        const std::size_t side = ancilla == ChiAncilla::kSecond ? 0 : 1;
        for (int j = 0; j < 20; j++) {
            StateVector phi = random_state(1, rng), varphi = random_state(1, rng);
            oracle::Vec ideal = oracle::cnot_of(oracle::vec(phi), oracle::vec(varphi));
            RoundDeviations dev;
            dev.preparer = ancilla == ChiAncilla::kSecond ? Side::kBob : Side::kAlice;
            dev.chi_corruption = std::make_pair(ancilla, c);
            for (std::size_t k = 0; k < 16; k++) {
                StateVector out = forced_nl_cnot(phi, varphi, k >> 2, k & 3, dev);
                bool found = false;
                for (const auto &p : paulis) {
                    oracle::Dense cp = oracle::mul(oracle::from(c), p);
                    oracle::Vec predicted = oracle::act(oracle::on_qubit(cp, side, 2), ideal);
                    found = found || oracle::overlap(out, predicted) >= 1 - 1e-10;
                }
                failures += !found;
                branches++;
            }
            reports_pass = reports_pass && run_chi_corruption(c, ancilla, phi, varphi).report.verdict;
        }
    }
    return {failures == 0 && reports_pass, std::to_string(branches) + " branches, " + std::to_string(failures) +
                                               " without a matching Pauli, library verdicts " +
                                               (reports_pass ? "PASS" : "FAIL")};
}

Outcome criterion7() {
    Rng rng(707);
    double worst_dist = 0, worst_lib = 0, worst_u1 = 1;
    for (int i = 0; i < 100; i++) {
        StateVector phi = random_state(1, rng), phi2 = random_state(1, rng);
        for (int sign : {+1, -1}) {
            oracle::Vec t = sign > 0 ? oracle::Vec{oracle::kS, oracle::kS} : oracle::Vec{oracle::kS, -oracle::kS};
            oracle::Vec out = oracle::cnot_of(oracle::vec(phi), t);
            oracle::Vec out2 = oracle::cnot_of(oracle::vec(phi2), t);
            worst_dist = std::max(worst_dist, oracle::trace_distance2(oracle::reduced(out, 1), oracle::reduced(out2, 1)));
            worst_lib = std::max(worst_lib, prop1_check(phi, phi2, sign).trace_distance);
            U1Result u1 = recover_u1(phi, phi2, sign);
            oracle::Vec moved = oracle::act(oracle::on_qubit(oracle::from(u1.u1), 0, 2), out);
            worst_u1 = std::min(worst_u1, oracle::overlap(moved, out2));
        }
    }
    oracle::Vec zero{1, 0}, plus{oracle::kS, oracle::kS};
    double control = oracle::trace_distance2(oracle::reduced(oracle::cnot_of(zero, zero), 1),
                                             oracle::reduced(oracle::cnot_of(plus, zero), 1));
    double control_lib = prop1_check(basis_state(1, 0), plus_state(), basis_state(1, 0)).trace_distance;
    bool pass = worst_dist <= 1e-10 && worst_lib <= 1e-10 && control > 0.1 && control_lib > 0.1 && worst_u1 >= 1 - 1e-10;
    return {pass, "max distance " + num(worst_dist) + " (library " + num(worst_lib) + "), control " +
                      num(control_lib, "%.3f") + ", min U1 overlap " + num(worst_u1, "%.12f")};
}

Outcome criterion8() {
    Rng rng(808);
    NonceSource nonces(808);
    const PartyId p0{0}, p1{1};
    bool ordering = true;
    for (int k = 0; k < 1000; k++) {
        MessageChannel ch;
        auto r = swap_protocol({p0, k & 1, nonces.draw(p0)}, {p1, (k >> 1) & 1, nonces.draw(p1)}, ch);
        ordering = ordering && r.transcript.ordering_holds();
    }
    std::size_t accepts = 0;
    const Nonce real = nonces.draw(p0);
    const CommitmentToken token = commit(1, real);
    for (int k = 0; k < 100000; k++) {
        Opening forged{static_cast<int>(rng() & 1), nonces.draw(p1)};
        if (forged.nonce == real) {
            continue;
        }
        accepts += open_verify(token, forged);
    }
    bool named = true;
    for (PartyId cheater : {p0, p1}) {
        MessageChannel ch;
        try {
            swap_protocol({p0, 0, nonces.draw(p0), cheater == p0 ? SwapBehavior::kOpenWrongBit : SwapBehavior::kHonest},
                          {p1, 1, nonces.draw(p1), cheater == p1 ? SwapBehavior::kOpenWrongBit : SwapBehavior::kHonest},
                          ch);
            named = false;
        } catch (const SwapError &e) {
            named = named && e.kind() == SwapError::Kind::kCheatDetected && e.culprit() == cheater;
        }
    }
    return {ordering && accepts == 0 && named, std::string("ordering ") + (ordering ? "holds" : "violated") + ", " +
                                                   std::to_string(accepts) + " of 10^5 forgeries accepted, culprit " +
                                                   (named ? "named correctly" : "wrong")};
}

Outcome criterion9() {
    auto pad = [](int x, int z) {
        return oracle::mul(x ? oracle::X2() : oracle::I2(), z ? oracle::Z2() : oracle::I2());
    };
    const oracle::Dense cx = oracle::cnot(0, 1, 2);
    double worst = 0;
    for (int bits = 0; bits < 16; bits++) {
        int a = bits >> 3 & 1, b = bits >> 2 & 1, c = bits >> 1 & 1, d = bits & 1;
        KeyPair next = cnot_key_update({{a, b}, {c, d}});
        if (next != KeyPair{{a, b ^ d}, {a ^ c, d}}) {
            return {false, "key update rule differs for tuple " + std::to_string(bits)};
        }
        oracle::Dense lhs = oracle::mul(cx, oracle::kron(pad(a, b), pad(c, d)));
        oracle::Dense rhs = oracle::mul(oracle::kron(pad(next.control.x, next.control.z), pad(next.target.x, next.target.z)), cx);
        worst = std::max(worst, oracle::phase_diff(lhs, rhs));
    }
    return {worst <= 1e-12, "16 key tuples, max deviation " + num(worst)};
}

Outcome criterion10() {
    Rng rng(1010);
    RandomCircuitOptions opts;
    opts.measure_probability = 0.05;
    opts.cross_owner_measure_probability = 0.3;
    std::size_t rejected = 0, scheduled = 0;
    for (int i = 0; i < 1000; i++) {
        Circuit c = random_circuit(rng, opts);
        bool cross = false;
        std::size_t nonlocal = 0;
        for (const auto &op : c.ops) {
            if (const auto *m = std::get_if<LocalMeasure>(&op.gate)) {
                for (auto q : m->qubits) {
                    cross = cross || c.ownership.owner(q) != c.ownership.owner(m->qubits[0]);
                }
            } else if (const auto *g = std::get_if<CnotGate>(&op.gate)) {
                nonlocal += c.ownership.owner(g->control) != c.ownership.owner(g->target);
            }
        }
        try {
            Schedule s = build_schedule(c);
            if (cross) {
                return {false, "circuit " + std::to_string(i) + " with a cross-owner measurement was scheduled"};
            }
            if (s.nl_cnot_count() != nonlocal) {
                return {false, "circuit " + std::to_string(i) + ": NL-CNOT count " + std::to_string(s.nl_cnot_count()) +
                                   " != " + std::to_string(nonlocal)};
            }
            scheduled++;
        } catch (const InvalidCircuit &) {
            if (!cross) {
                return {false, "circuit " + std::to_string(i) + " rejected without a cross-owner measurement"};
            }
            rejected++;
        }
    }
    return {rejected > 0 && scheduled > 0,
            std::to_string(rejected) + " rejected, " + std::to_string(scheduled) + " scheduled with matching counts"};
}

}  // namespace

int main() {
    bool ok = true;
    ok &= run_criterion(1, "NL-CNOT correctness", 10, criterion1);
    ok &= run_criterion(2, "end-to-end vs oracle", 60, criterion2);
    ok &= run_criterion(3, "Bell outcome uniformity", 0, criterion3);
    ok &= run_criterion(4, "passive statistic", 0, criterion4);
    ok &= run_criterion(5, "attack formulas", 0, criterion5);
    ok &= run_criterion(6, "Clifford corruption", 0, criterion6);
    ok &= run_criterion(7, "reduced states and U1", 0, criterion7);
    ok &= run_criterion(8, "SWAP and commitment", 0, criterion8);
    ok &= run_criterion(9, "TTP key update identity", 0, criterion9);
    ok &= run_criterion(10, "model enforcement", 0, criterion10);
    std::printf("%s\n", ok ? "all criteria PASS" : "some criteria FAILED");
    return ok ? 0 : 1;
}
