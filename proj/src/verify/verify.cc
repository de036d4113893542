#include "smqc/verify.h"

#include <cstdio>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "smqc/adversary.h"
#include "smqc/circuit.h"
#include "smqc/commitment.h"
#include "smqc/protocol.h"
#include "smqc/qsim.h"

namespace smqc {

namespace {

class Suite {
   public:
    explicit Suite(std::string name) {
        result_.name = std::move(name);
    }

    void check(bool ok, const std::function<std::string()> &describe) {
        result_.checks++;
        if (!ok) {
            if (result_.failures == 0) {
                result_.first_failure = describe();
            }
            result_.failures++;
        }
    }

    /// Runs `body`, counting an escaped exception as one failed check.
    void guard(const std::function<void()> &body) {
        try {
            body();
        } catch (const std::exception &e) {
            check(false, [&] { return std::string("unexpected exception: ") + e.what(); });
        }
    }

    SuiteResult finish() {
        return std::move(result_);
    }

   private:
    SuiteResult result_;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

StateVector product(const StateVector &a, const StateVector &b) {
    return a.tensor(b);
}

StateVector cnot_of(StateVector s) {
    s.apply_cnot(0, 1);
    return s;
}

SuiteResult qsim_suite(Rng &rng) {
    Suite s("qsim");
    s.guard([&] {
        for (const char *name : {"i", "x", "y", "z", "h", "s", "sdg", "t", "tdg"}) {
            s.check(gates::by_name(name).is_unitary(), [&] { return std::string(name) + " is not unitary"; });
        }
        s.check(gates::CNOT().is_unitary(), [] { return "CNOT is not unitary"; });

        for (std::size_t a = 0; a < 4; a++) {
            for (std::size_t b = 0; b < 4; b++) {
                auto ba = BellOutcome::from_index(a);
                auto bb = BellOutcome::from_index(b);
                double ip = std::abs(bell_state(ba.x, ba.z).inner(bell_state(bb.x, bb.z)));
                s.check(std::abs(ip - (a == b ? 1.0 : 0.0)) <= kAlgebraTolerance,
                        [&] { return "Bell states not orthonormal at " + std::to_string(a) + "," + std::to_string(b); });
            }
        }

        StateVector chi = chi_state();
        for (std::size_t i = 0; i < 16; i++) {
            bool support = i == 0b0000 || i == 0b0011 || i == 0b1110 || i == 0b1101;
            s.check(std::abs(chi[i] - Complex(support ? 0.5 : 0.0)) <= kAlgebraTolerance,
                    [&] { return "chi amplitude " + std::to_string(i); });
        }

        // Teleporting through B00 leaves X^x Z^z psi.
        for (int trial = 0; trial < 20; trial++) {
            StateVector psi = random_state(1, rng);
            for (std::size_t k = 0; k < 4; k++) {
                StateVector joint = psi.tensor(bell_state(0, 0));
                auto src = OutcomeSource::forced({k});
                BellOutcome o = joint.measure_bell(0, 1, src);
                const std::size_t measured[] = {0, 1};
                StateVector rest = joint.discard(measured, bell_state(o.x, o.z));
                StateVector expected = psi;
                expected.apply(power(gates::Z(), o.z), 0);
                expected.apply(power(gates::X(), o.x), 0);
                auto cmp = phase_equal(rest, expected);
                s.check(cmp.equal, [&] { return "teleport residual, outcome " + std::to_string(k); });
            }
        }

        for (int trial = 0; trial < 20; trial++) {
            StateVector psi = random_state(3, rng);
            const std::size_t keep[] = {0, 2};
            DensityMatrix rho = partial_trace(psi, keep);
            s.check(rho.is_valid(1e-10), [] { return "partial trace is not a valid density matrix"; });

            StateVector pair = random_state(2, rng);
            auto sd = schmidt_decompose(pair);
            s.check(phase_equal(sd.reconstruct(), pair).equal, [] { return "Schmidt reconstruction"; });
            double norm = sd.coefficients[0] * sd.coefficients[0] + sd.coefficients[1] * sd.coefficients[1];
            s.check(std::abs(norm - 1) <= 1e-10 && sd.coefficients[0] >= sd.coefficients[1],
                    [] { return "Schmidt coefficients"; });
        }
    });
    return s.finish();
}

bool has_cross_owner_measure(const Circuit &c) {
    for (const auto &op : c.ops) {
        if (const auto *m = std::get_if<LocalMeasure>(&op.gate)) {
            for (auto q : m->qubits) {
                if (c.ownership.owner(q) != c.ownership.owner(m->qubits[0])) {
                    return true;
                }
            }
        }
    }
    return false;
}

std::size_t count_nonlocal(const Circuit &c) {
    std::size_t n = 0;
    for (const auto &op : c.ops) {
        if (const auto *g = std::get_if<CnotGate>(&op.gate)) {
            n += classify_cnot(*g, c.ownership) == CnotKind::kNonLocal;
        }
    }
    return n;
}

SuiteResult circuit_suite(Rng &rng) {
    Suite s("circuit");
    s.guard([&] {
        RandomCircuitOptions opts;
        opts.measure_probability = 0.05;
        opts.cross_owner_measure_probability = 0.3;
        for (int trial = 0; trial < 200; trial++) {
            Circuit c = random_circuit(rng, opts);
            bool cross = has_cross_owner_measure(c);
            s.check(validate(c).empty() != cross, [&] { return "validate disagrees on circuit " + std::to_string(trial); });
            try {
                Schedule sched = build_schedule(c);
                s.check(!cross, [&] { return "cross-owner measurement scheduled, circuit " + std::to_string(trial); });
                s.check(sched.nl_cnot_count() == count_nonlocal(c),
                        [&] { return "NL-CNOT count mismatch, circuit " + std::to_string(trial); });
            } catch (const InvalidCircuit &) {
                s.check(cross, [&] { return "valid circuit rejected, circuit " + std::to_string(trial); });
            }
            std::string text = format_circuit(c);
            s.check(format_circuit(parse_circuit(text)) == text, [&] { return "format/parse round trip"; });
        }

        opts.measure_probability = 0;
        for (int trial = 0; trial < 20; trial++) {
            Circuit c = random_circuit(rng, opts);
            Schedule sched = build_schedule(c);
            Circuit flat{sched.flatten(), c.ownership};
            StateVector input = random_state(c.ownership.num_qubits(), rng);
            auto a = OutcomeSource::forced({});
            auto b = OutcomeSource::forced({});
            auto ra = oracle_simulate(c, input, a);
            auto rb = oracle_simulate(flat, input, b);
            s.check(phase_equal(ra.output, rb.output).equal, [] { return "schedule order changes the circuit"; });
        }
    });
    return s.finish();
}

SuiteResult commitment_suite(Rng &rng, std::uint64_t seed) {
    Suite s("commitment");
    s.guard([&] {
        NonceSource nonces(seed);
        const PartyId p0{0}, p1{1};
        for (int trial = 0; trial < 50; trial++) {
            int a = trial & 1, b = (trial >> 1) & 1;
            MessageChannel ch;
            auto r = swap_protocol({p0, a, nonces.draw(p0)}, {p1, b, nonces.draw(p1)}, ch);
            s.check(r.first_bit_at_second == a && r.second_bit_at_first == b, [] { return "swap delivered wrong bits"; });
            s.check(r.transcript.ordering_holds(), [] { return "open before both commitments"; });
        }

        std::size_t accepts = 0;
        for (int trial = 0; trial < 2000; trial++) {
            int bit = static_cast<int>(rng() & 1);
            auto token = commit(bit, nonces.draw(p0));
            accepts += open_verify(token, {bit ^ 1, nonces.draw(p1)});
            accepts += open_verify(token, {bit, nonces.draw(p1)});
        }
        s.check(accepts == 0, [&] { return std::to_string(accepts) + " forged openings accepted"; });

        auto expect_error = [&](SwapBehavior first, SwapBehavior second, SwapError::Kind kind, PartyId culprit) {
            MessageChannel ch;
            try {
                swap_protocol({p0, 1, nonces.draw(p0), first}, {p1, 0, nonces.draw(p1), second}, ch);
                s.check(false, [&] { return std::string("no ") + to_string(kind) + " raised"; });
            } catch (const SwapError &e) {
                s.check(e.kind() == kind && e.culprit() == culprit,
                        [&] { return std::string("expected ") + to_string(kind) + ", got " + e.what(); });
            }
        };
        expect_error(SwapBehavior::kOpenWrongBit, SwapBehavior::kHonest, SwapError::Kind::kCheatDetected, p0);
        expect_error(SwapBehavior::kHonest, SwapBehavior::kOpenWrongBit, SwapError::Kind::kCheatDetected, p1);
        expect_error(SwapBehavior::kOpenEarly, SwapBehavior::kHonest, SwapError::Kind::kProtocolViolation, p0);
        expect_error(SwapBehavior::kHonest, SwapBehavior::kAbortAfterPeerOpen, SwapError::Kind::kAbort, p1);
    });
    return s.finish();
}

SuiteResult nl_cnot_suite(Rng &rng, const VerifyOptions &options) {
    Suite s("nl_cnot");
    s.guard([&] {
        RoundDeviations dev;
        dev.apply_corrections = !options.disable_corrections;
        for (int trial = 0; trial < 20; trial++) {
            StateVector control = random_state(1, rng);
            StateVector target = random_state(1, rng);
            StateVector expected = cnot_of(product(control, target));
            auto runs = run_two_party(control, target, dev, {});
            s.check(runs.size() == 16, [&] { return std::to_string(runs.size()) + " branches instead of 16"; });
            double total = 0;
            for (const auto &r : runs) {
                total += r.probability;
                auto cmp = phase_equal(r.output, expected);
                s.check(cmp.equal, [&] {
                    return "branch a=" + std::to_string(r.record.alice.index()) +
                           " b=" + std::to_string(r.record.bob.index()) + " overlap " + fmt(cmp.overlap);
                });
            }
            s.check(std::abs(total - 1) <= 1e-10, [] { return "branch probabilities do not sum to 1"; });
        }
    });
    return s.finish();
}

SuiteResult smqc_suite(Rng &rng, const VerifyOptions &options) {
    Suite s("smqc");
    s.guard([&] {
        RandomCircuitOptions copts;
        copts.qubits = 6;
        copts.gates = 30;
        copts.max_nonlocal_cnots = 2;
        for (int trial = 0; trial < 8; trial++) {
            Circuit c = random_circuit(rng, copts);
            Schedule sched = build_schedule(c);
            StateVector input = random_state(c.ownership.num_qubits(), rng);
            auto none = OutcomeSource::forced({});
            StateVector expected = oracle_simulate(c, input, none).output;

            SmqcOptions peer;
            peer.seed = options.seed + trial;
            peer.apply_corrections = !options.disable_corrections;
            for (const auto &b : run_smqc_exhaustive(sched, c.ownership, input, peer)) {
                auto cmp = phase_equal(b.result.output, expected);
                s.check(cmp.equal, [&] { return "peer backend overlap " + fmt(cmp.overlap); });
            }

            SmqcOptions ttp = peer;
            ttp.backend = Backend::kTtp;
            auto src = OutcomeSource::sampled(options.seed + trial);
            auto r = run_smqc(sched, c.ownership, input, src, ttp);
            auto cmp = phase_equal(r.output, expected);
            s.check(cmp.equal, [&] { return "TTP backend overlap " + fmt(cmp.overlap); });
        }
    });
    return s.finish();
}

Unitary2 pad(QotpKey k) {
    return power(gates::X(), k.x) * power(gates::Z(), k.z);
}

SuiteResult ttp_suite(Rng &rng) {
    Suite s("ttp");
    s.guard([&] {
        for (int bits = 0; bits < 16; bits++) {
            KeyPair keys{{bits >> 3 & 1, bits >> 2 & 1}, {bits >> 1 & 1, bits & 1}};
            KeyPair next = cnot_key_update(keys);
            Unitary4 lhs = gates::CNOT() * kron(pad(keys.control), pad(keys.target));
            Unitary4 rhs = kron(pad(next.control), pad(next.target)) * gates::CNOT();
            // Equal up to a sign.
            Complex phase = (rhs.adjoint() * lhs).trace() / 4.0;
            s.check(std::abs(std::abs(phase) - 1) <= kAlgebraTolerance &&
                        lhs.max_abs_diff(phase * rhs) <= kAlgebraTolerance,
                    [&] { return "key update identity fails for tuple " + std::to_string(bits); });
        }

        Keyring ring(rng());
        for (std::size_t round = 0; round < 10; round++) {
            StateVector psi = random_state(2, rng);
            KeyPair keys{ring.key(PartyId{0}, round), ring.key(PartyId{1}, round)};
            StateVector joint = psi;
            qotp_encrypt(joint, 0, keys.control);
            qotp_encrypt(joint, 1, keys.target);
            Transcript t;
            KeyPair next = ttp_nl_cnot(joint, {PartyId{0}, 0, PartyId{1}, 1}, keys, PartyId{2}, t);
            qotp_decrypt(joint, 0, next.control);
            qotp_decrypt(joint, 1, next.target);
            s.check(phase_equal(joint, cnot_of(psi)).equal, [] { return "padded CNOT does not decrypt to CNOT"; });
            s.check(t.party_to_party().size() == 4, [] { return "TTP round should move four qubits"; });
        }
    });
    return s.finish();
}

SuiteResult adversary_suite(Rng &rng) {
    Suite s("adversary");
    s.guard([&] {
        for (const char *name : {"i", "x", "y", "z", "h", "s", "sdg"}) {
            s.check(is_clifford(gates::by_name(name)), [&] { return std::string(name) + " not classified Clifford"; });
        }
        for (const char *name : {"t", "tdg"}) {
            s.check(!is_clifford(gates::by_name(name)), [&] { return std::string(name) + " classified Clifford"; });
        }

        for (int trial = 0; trial < 5; trial++) {
            StateVector control = random_state(1, rng);
            StateVector target = random_state(1, rng);
            Unitary2 u = random_unitary2(rng);
            for (Side side : {Side::kAlice, Side::kBob}) {
                auto rot = run_rotated_basis_attack(u, control, target, side);
                s.check(rot.report.verdict, [&] { return "rotated basis, max deviation " + fmt(rot.report.max_deviation); });
                auto flip = run_bit_flip_attack(control, target, side);
                s.check(flip.report.verdict, [&] { return "bit flip, max deviation " + fmt(flip.report.max_deviation); });
            }
            Unitary2 c = random_clifford(rng);
            for (ChiAncilla a : {ChiAncilla::kSecond, ChiAncilla::kThird}) {
                auto chi = run_chi_corruption(c, a, control, target);
                s.check(chi.report.verdict, [] { return "chi corruption Pauli search failed"; });
            }
        }

        double worst_distance = 0, worst_overlap = 1;
        for (int trial = 0; trial < 20; trial++) {
            StateVector phi = random_state(1, rng);
            StateVector phi2 = random_state(1, rng);
            for (int sign : {+1, -1}) {
                worst_distance = std::max(worst_distance, prop1_check(phi, phi2, sign).trace_distance);
                U1Result u1 = recover_u1(phi, phi2, sign);
                worst_overlap = std::min(worst_overlap, u1.overlap);
                s.check(u1.u1.is_unitary(), [] { return "recovered U1 is not unitary"; });
            }
        }
        s.check(worst_distance <= kProtocolTolerance, [&] { return "reduced states differ by " + fmt(worst_distance); });
        s.check(worst_overlap >= 1 - kProtocolTolerance, [&] { return "U1 overlap " + fmt(worst_overlap); });
        double control = prop1_check(basis_state(1, 0), plus_state(), basis_state(1, 0)).trace_distance;
        s.check(control > 0.1, [&] { return "negative control distance " + fmt(control); });

        bool rejected = false;
        try {
            run_chi_corruption(gates::T(), ChiAncilla::kThird, plus_state(), basis_state(1, 0));
        } catch (const std::invalid_argument &) {
            rejected = true;
        }
        s.check(rejected, [] { return "non-Clifford corruption accepted"; });
    });
    return s.finish();
}

}  // namespace

bool VerifyReport::passed() const {
    for (const auto &s : suites) {
        if (!s.passed()) {
            return false;
        }
    }
    return !suites.empty();
}

std::string VerifyReport::table() const {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %8s %8s  %s\n", "suite", "checks", "failed", "result");
    out << line;
    for (const auto &s : suites) {
        std::snprintf(line, sizeof(line), "%-12s %8zu %8zu  %s\n", s.name.c_str(), s.checks, s.failures,
                      s.passed() ? "PASS" : "FAIL");
        out << line;
        if (!s.first_failure.empty()) {
            out << "    first failure: " << s.first_failure << "\n";
        }
    }
    out << (passed() ? "all suites PASS" : "FAILED") << "\n";
    return out.str();
}

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["suites"] = nlohmann::ordered_json::array();
    for (const auto &s : suites) {
        nlohmann::ordered_json e;
        e["name"] = s.name;
        e["checks"] = s.checks;
        e["failures"] = s.failures;
        e["verdict"] = s.passed() ? "PASS" : "FAIL";
        if (!s.first_failure.empty()) {
            e["first_failure"] = s.first_failure;
        }
        j["suites"].push_back(std::move(e));
    }
    j["verdict"] = passed() ? "PASS" : "FAIL";
    return j.dump(2);
}

VerifyReport run_verify(const VerifyOptions &options) {
    VerifyReport report;
    report.seed = options.seed;
    // Each suite gets its own stream so adding checks to one leaves the others unchanged.
    auto stream = [&](std::uint64_t k) { return Rng(splitmix64(options.seed ^ splitmix64(k))); };
    Rng r0 = stream(0), r1 = stream(1), r2 = stream(2), r3 = stream(3), r4 = stream(4), r5 = stream(5),
        r6 = stream(6);
    report.suites.push_back(qsim_suite(r0));
    report.suites.push_back(circuit_suite(r1));
    report.suites.push_back(commitment_suite(r2, options.seed));
    report.suites.push_back(nl_cnot_suite(r3, options));
    report.suites.push_back(smqc_suite(r4, options));
    report.suites.push_back(ttp_suite(r5));
    report.suites.push_back(adversary_suite(r6));
    return report;
}

}  // namespace smqc
