#include "smqc/protocol.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "smqc/adversary.h"

namespace smqc {

void qotp_encrypt(StateVector &state, std::size_t qubit, QotpKey key) {
    if (key.z) {
        state.apply(gates::Z(), qubit);
    }
    if (key.x) {
        state.apply(gates::X(), qubit);
    }
}

void qotp_decrypt(StateVector &state, std::size_t qubit, QotpKey key) {
    if (key.x) {
        state.apply(gates::X(), qubit);
    }
    if (key.z) {
        state.apply(gates::Z(), qubit);
    }
}

KeyPair cnot_key_update(KeyPair keys) {
    return {{keys.control.x, keys.control.z ^ keys.target.z}, {keys.control.x ^ keys.target.x, keys.target.z}};
}

QotpKey Keyring::key(PartyId party, std::size_t round) const {
    std::uint64_t h = splitmix64(seed_ ^ splitmix64((std::uint64_t{party.value} << 32) ^ round ^ 0x5157504B45594Bull));
    return {static_cast<int>(h & 1), static_cast<int>((h >> 1) & 1)};
}

KeyPair ttp_nl_cnot(StateVector &joint, const NlCnotRound &round, KeyPair keys, PartyId ttp, Transcript &transcript) {
    transcript.append(EventKind::kQubitTransfer, round.control_party, ttp, encode_qubit_ids({round.control_qubit}));
    transcript.append(EventKind::kQubitTransfer, round.target_party, ttp, encode_qubit_ids({round.target_qubit}));
    joint.apply_cnot(round.control_qubit, round.target_qubit);
    transcript.append(EventKind::kQubitTransfer, ttp, round.control_party, encode_qubit_ids({round.control_qubit}));
    transcript.append(EventKind::kQubitTransfer, ttp, round.target_party, encode_qubit_ids({round.target_qubit}));
    return cnot_key_update(keys);
}

RoundDeviations deviations_for(const AdversaryStrategy &alice, const AdversaryStrategy &bob) {
    RoundDeviations d;
    if (const auto *c = std::get_if<ChiCorruption>(&alice)) {
        d.preparer = Side::kAlice;
        d.chi_corruption = {ChiAncilla::kThird, c->c};
    } else if (const auto *c = std::get_if<ChiCorruption>(&bob)) {
        d.preparer = Side::kBob;
        d.chi_corruption = {ChiAncilla::kSecond, c->c};
    }
    if (const auto *r = std::get_if<RotatedBasis>(&alice)) {
        d.alice_basis = r->u;
    }
    if (const auto *r = std::get_if<RotatedBasis>(&bob)) {
        d.bob_basis = r->u;
    }
    d.alice_flips_ax = std::holds_alternative<BitFlip>(alice);
    d.bob_flips_bz = std::holds_alternative<BitFlip>(bob);
    return d;
}

namespace {

void record_measurement(Transcript &t, PartyId party, std::vector<std::uint8_t> bits) {
    t.append(EventKind::kLocalMeasurement, party, party, std::move(bits));
}

}  // namespace

NlCnotRecord nl_cnot(StateVector &joint, const NlCnotRound &round, ProtocolContext &context,
                     const RoundDeviations &deviations) {
    const std::size_t m = joint.num_qubits();
    const std::size_t c = round.control_qubit;
    const std::size_t t = round.target_qubit;
    if (c >= m || t >= m || c == t) {
        throw std::invalid_argument("nl_cnot: bad control/target qubits");
    }
    if (round.control_party == round.target_party) {
        throw std::invalid_argument("nl_cnot: control and target belong to the same party");
    }
    const PartyId alice = round.control_party;
    const PartyId bob = round.target_party;
    const std::size_t id = context.next_ancilla_id;
    context.next_ancilla_id += 4;
    auto &transcript = context.transcript;

    // Step 1: |chi> on register positions m..m+3.
    StateVector chi = chi_state();
    if (deviations.chi_corruption) {
        const auto &[which, cliff] = *deviations.chi_corruption;
        chi.apply(cliff, which == ChiAncilla::kSecond ? 1 : 2);
    }
    joint = joint.tensor(chi);
    if (deviations.preparer == Side::kAlice) {
        transcript.append(EventKind::kQubitTransfer, alice, bob, encode_qubit_ids({id + 2, id + 3}));
    } else {
        transcript.append(EventKind::kQubitTransfer, bob, alice, encode_qubit_ids({id, id + 1}));
    }

    // Step 2: Bell measurements.
    if (deviations.alice_basis) {
        joint.apply(*deviations.alice_basis, c);
    }
    BellOutcome a = joint.measure_bell(c, m, context.outcomes);
    record_measurement(transcript, alice, {static_cast<std::uint8_t>(a.x), static_cast<std::uint8_t>(a.z)});
    if (deviations.bob_basis) {
        joint.apply(*deviations.bob_basis, t);
    }
    BellOutcome b = joint.measure_bell(m + 3, t, context.outcomes);
    record_measurement(transcript, bob, {static_cast<std::uint8_t>(b.x), static_cast<std::uint8_t>(b.z)});

    // Step 3: SWAP(a_x, b_z).
    const int sent_ax = a.x ^ (deviations.alice_flips_ax ? 1 : 0);
    const int sent_bz = b.z ^ (deviations.bob_flips_bz ? 1 : 0);
    MessageChannel channel;
    SwapRole first{alice, sent_ax, context.nonces.draw(alice), deviations.alice_swap};
    SwapRole second{bob, sent_bz, context.nonces.draw(bob), deviations.bob_swap};
    auto log_swap = [&](const SwapTranscript &st) {
        for (const auto &msg : st.messages) {
            transcript.append(EventKind::kCommitment, msg.sender, msg.recipient, msg.encode());
        }
    };
    SwapResult swap;
    try {
        swap = swap_protocol(first, second, channel);
    } catch (const SwapError &e) {
        log_swap(e.transcript());
        throw;
    }
    log_swap(swap.transcript);
    const int ax_at_bob = swap.first_bit_at_second;
    const int bz_at_alice = swap.second_bit_at_first;

    // Step 4: corrections, rightmost factor first.
    if (deviations.apply_corrections) {
        auto apply_if = [&](int bit, const Unitary2 &u, std::size_t q) {
            if (bit) {
                joint.apply(u, q);
            }
        };
        apply_if(a.z, gates::Z(), m + 1);
        apply_if(a.x, gates::X(), m + 1);
        apply_if(bz_at_alice, gates::Z(), m + 1);
        apply_if(b.x, gates::X(), m + 2);
        apply_if(ax_at_bob, gates::X(), m + 2);
        apply_if(b.z, gates::Z(), m + 2);
    }

    // Drop the measured pairs and move the carriers into the control/target slots.
    const std::size_t measured[4] = {c, m, m + 3, t};
    joint = joint.discard(measured, bell_state(a.x, a.z).tensor(bell_state(b.x, b.z)));
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; i++) {
        if (i == c) {
            order[i] = m - 2;
        } else if (i == t) {
            order[i] = m - 1;
        } else {
            order[i] = i - static_cast<std::size_t>(c < i) - static_cast<std::size_t>(t < i);
        }
    }
    joint = joint.permuted(order);
    auto remap = encode_qubit_ids({id + 1, c, id + 2, t});
    transcript.append(EventKind::kRemap, alice, alice, remap);

    return {a, b, sent_ax, sent_bz, deviations.preparer};
}

StateVector assemble_input(const OwnershipMap &ownership, const std::map<PartyId, StateVector> &inputs) {
    const std::size_t m = ownership.num_qubits();
    StateVector joint(0);
    std::vector<std::size_t> layout;  // register position -> circuit qubit
    for (std::size_t p = 0; p < ownership.party_count(); p++) {
        PartyId party{static_cast<std::uint16_t>(p)};
        auto qubits = ownership.qubits_of(party);
        auto it = inputs.find(party);
        StateVector local = it == inputs.end() ? StateVector(qubits.size()) : it->second;
        if (local.num_qubits() != qubits.size()) {
            throw std::invalid_argument("input for " + party.str() + " has " + std::to_string(local.num_qubits()) +
                                        " qubits, ownership assigns " + std::to_string(qubits.size()));
        }
        joint = joint.tensor(local);
        layout.insert(layout.end(), qubits.begin(), qubits.end());
    }
    for (const auto &[party, _] : inputs) {
        if (party.value >= ownership.party_count()) {
            throw std::invalid_argument("input given for unknown party " + party.str());
        }
    }
    std::vector<std::size_t> order(m);
    for (std::size_t pos = 0; pos < m; pos++) {
        order[layout[pos]] = pos;
    }
    return joint.permuted(order);
}

namespace {

/// Everything run_smqc carries from one round to the next. Copied at branch points
/// by run_smqc_exhaustive.
struct RunState {
    SmqcResult result;
    NonceSource nonces;
    std::size_t next_ancilla_id;
    std::size_t round_index = 0;
};

class Executor {
   public:
    Executor(const OwnershipMap &ownership, const SmqcOptions &options)
        : ownership_(ownership),
          options_(options),
          keyring_(options.seed),
          ttp_{static_cast<std::uint16_t>(ownership.party_count())} {
        for (const auto &[party, strategy] : options.strategies) {
            if (party.value >= ownership.party_count()) {
                throw std::invalid_argument("strategy given for unknown party " + party.str());
            }
            if (const auto *c = std::get_if<ChiCorruption>(&strategy); c && !is_clifford(c->c)) {
                throw std::invalid_argument("chi corruption operator is not Clifford");
            }
            bool active =
                !std::holds_alternative<Honest>(strategy) && !std::holds_alternative<PassiveRecorder>(strategy);
            if (active && options.backend == Backend::kTtp) {
                throw std::invalid_argument("active strategies only apply to the peer backend");
            }
        }
    }

    RunState start(const StateVector &input) const {
        if (input.num_qubits() != ownership_.num_qubits()) {
            throw std::invalid_argument("run_smqc: input has " + std::to_string(input.num_qubits()) +
                                        " qubits, ownership covers " + std::to_string(ownership_.num_qubits()));
        }
        return {{input, {}, {}, {}}, NonceSource(options_.seed), ownership_.num_qubits()};
    }

    void step(RunState &state, const ScheduleRound &round, OutcomeSource &outcomes) const {
        auto &result = state.result;
        if (const auto *lqc = std::get_if<LqcRound>(&round)) {
            std::vector<MeasurementRecord> bits;
            for (const auto &op : lqc->ops) {
                for (auto q : op.qubits()) {
                    if (ownership_.owner(q) != lqc->party) {
                        throw std::logic_error("LQC round of " + lqc->party.str() + " touches foreign qubit " +
                                               std::to_string(q));
                    }
                }
                apply_op(result.output, op, ownership_, outcomes, bits);
            }
            if (!bits.empty()) {
                std::vector<std::uint8_t> payload;
                for (const auto &r : bits) {
                    payload.push_back(static_cast<std::uint8_t>(r.bit));
                }
                record_measurement(result.transcript, lqc->party, std::move(payload));
                result.measurements.insert(result.measurements.end(), bits.begin(), bits.end());
            }
            return;
        }
        const auto &nl = std::get<NlCnotRound>(round);
        if (options_.backend == Backend::kPeer) {
            RoundDeviations dev = deviations_for(strategy_of(nl.control_party), strategy_of(nl.target_party));
            dev.apply_corrections = options_.apply_corrections;
            ProtocolContext context{outcomes, state.nonces, result.transcript, state.next_ancilla_id};
            result.rounds.push_back(nl_cnot(result.output, nl, context, dev));
            state.next_ancilla_id = context.next_ancilla_id;
        } else {
            KeyPair keys{keyring_.key(nl.control_party, state.round_index),
                         keyring_.key(nl.target_party, state.round_index)};
            qotp_encrypt(result.output, nl.control_qubit, keys.control);
            qotp_encrypt(result.output, nl.target_qubit, keys.target);
            KeyPair updated = ttp_nl_cnot(result.output, nl, keys, ttp_, result.transcript);
            qotp_decrypt(result.output, nl.control_qubit, updated.control);
            qotp_decrypt(result.output, nl.target_qubit, updated.target);
        }
        state.round_index++;
    }

   private:
    AdversaryStrategy strategy_of(PartyId p) const {
        auto it = options_.strategies.find(p);
        return it == options_.strategies.end() ? AdversaryStrategy{Honest{}} : it->second;
    }

    const OwnershipMap &ownership_;
    const SmqcOptions &options_;
    Keyring keyring_;
    PartyId ttp_;
};

void explore(const Executor &executor, const Schedule &schedule, std::size_t k, const RunState &state,
             const std::vector<std::size_t> &choices, double probability, std::vector<BranchResult> &out) {
    if (k == schedule.rounds.size()) {
        out.push_back({choices, probability, state.result});
        return;
    }
    enumerate_branches([&](OutcomeSource &source) {
        RunState next = state;
        executor.step(next, schedule.rounds[k], source);
        std::vector<std::size_t> c = choices;
        double p = probability;
        for (const auto &d : source.decisions()) {
            c.push_back(d.choice);
            p *= d.probabilities[d.choice];
        }
        explore(executor, schedule, k + 1, next, c, p, out);
    });
}

}  // namespace

SmqcResult run_smqc(const Schedule &schedule, const OwnershipMap &ownership, const StateVector &input,
                    OutcomeSource &outcomes, const SmqcOptions &options) {
    Executor executor(ownership, options);
    RunState state = executor.start(input);
    for (const auto &round : schedule.rounds) {
        executor.step(state, round, outcomes);
    }
    return std::move(state.result);
}

// Walks the branch tree round by round, so a round runs once per distinct outcome
// prefix instead of once per leaf.
std::vector<BranchResult> run_smqc_exhaustive(const Schedule &schedule, const OwnershipMap &ownership,
                                              const StateVector &input, const SmqcOptions &options) {
    Executor executor(ownership, options);
    std::vector<BranchResult> out;
    explore(executor, schedule, 0, executor.start(input), {}, 1.0, out);
    return out;
}

}  // namespace smqc
