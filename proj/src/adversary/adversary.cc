#include "smqc/adversary.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace smqc {

using nlohmann::ordered_json;

std::string strategy_name(const AdversaryStrategy &strategy) {
    return std::visit(
        [](const auto &s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Honest>) {
                return "honest";
            } else if constexpr (std::is_same_v<T, PassiveRecorder>) {
                return "passive";
            } else if constexpr (std::is_same_v<T, ChiCorruption>) {
                return "chi-corruption";
            } else if constexpr (std::is_same_v<T, RotatedBasis>) {
                return "rotated-basis";
            } else {
                return "bitflip";
            }
        },
        strategy);
}

const std::array<Unitary2, 4> &paulis() {
    static const std::array<Unitary2, 4> p{gates::I(), gates::X(), gates::Y(), gates::Z()};
    return p;
}

const char *pauli_name(std::size_t index) {
    static const char *kNames[] = {"I", "X", "Y", "Z"};
    return index < 4 ? kNames[index] : "?";
}

namespace {

bool is_pauli_up_to_phase(const Unitary2 &m) {
    for (const auto &p : paulis()) {
        if (std::abs((p * m).trace()) / 2 >= 1 - kProtocolTolerance) {
            return true;
        }
    }
    return false;
}

std::string format_matrix(const Unitary2 &u) {
    std::ostringstream out;
    out.precision(6);
    out << "[";
    for (std::size_t k = 0; k < 4; k++) {
        out << (k ? ", " : "") << u.entries[k].real() << (u.entries[k].imag() < 0 ? "-" : "+")
            << std::abs(u.entries[k].imag()) << "i";
    }
    out << "]";
    return out.str();
}

StateVector product(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != 1 || b.num_qubits() != 1) {
        throw std::invalid_argument("expected single-qubit inputs");
    }
    return a.tensor(b);
}

StateVector cnot_of(StateVector s) {
    s.apply_cnot(0, 1);
    return s;
}

}  // namespace

bool is_clifford(const Unitary2 &u) {
    if (!u.is_unitary()) {
        return false;
    }
    const Unitary2 ud = u.adjoint();
    return is_pauli_up_to_phase(u * gates::X() * ud) && is_pauli_up_to_phase(u * gates::Z() * ud);
}

Unitary2 random_clifford(Rng &rng) {
    static const std::vector<Unitary2> group = [] {
        auto canonical = [](Unitary2 m) {
            std::size_t k = std::abs(m.entries[0]) > 1e-9 ? 0 : 1;
            Complex phase = std::conj(m.entries[k]) / std::abs(m.entries[k]);
            return phase * m;
        };
        std::vector<Unitary2> found{Unitary2::identity()};
        for (std::size_t i = 0; i < found.size(); i++) {
            for (const auto *g : {&gates::H(), &gates::S()}) {
                Unitary2 next = canonical(*g * found[i]);
                bool seen = std::any_of(found.begin(), found.end(),
                                        [&](const Unitary2 &f) { return f.max_abs_diff(next) < 1e-9; });
                if (!seen) {
                    found.push_back(next);
                }
            }
        }
        return found;
    }();
    const Unitary2 &pick = group[static_cast<std::size_t>(rng() % group.size())];
    return std::polar(1.0, 2 * std::numbers::pi * uniform01(rng)) * pick;
}

std::string AttackReport::to_json() const {
    ordered_json j;
    j["strategy"] = strategy;
    j["params"] = params;
    j["branches_checked"] = branches_checked;
    j["max_deviation"] = max_deviation;
    j["verdict"] = verdict ? "PASS" : "FAIL";
    return j.dump(2);
}

std::vector<TwoPartyRun> run_two_party(const StateVector &control, const StateVector &target,
                                       const RoundDeviations &deviations, const AttackMode &mode) {
    const StateVector joint = product(control, target);
    const NlCnotRound round{PartyId{0}, 0, PartyId{1}, 1};
    std::vector<TwoPartyRun> runs;
    auto once = [&](OutcomeSource &source, std::uint64_t nonce_seed) {
        const std::size_t first_decision = source.decisions().size();
        NonceSource nonces(nonce_seed);
        TwoPartyRun run{joint, {}, 0, {}};
        ProtocolContext ctx{source, nonces, run.transcript, 2};
        run.record = nl_cnot(run.output, round, ctx, deviations);
        run.probability = 1;
        for (std::size_t k = first_decision; k < source.decisions().size(); k++) {
            const auto &d = source.decisions()[k];
            run.probability *= d.probabilities[d.choice];
        }
        runs.push_back(std::move(run));
    };
    if (mode.exhaustive) {
        enumerate_branches([&](OutcomeSource &source) { once(source, mode.seed); });
    } else {
        auto source = OutcomeSource::sampled(mode.seed);
        for (std::size_t i = 0; i < mode.samples; i++) {
            once(source, splitmix64(mode.seed + i));
        }
    }
    return runs;
}

namespace {

AttackResult check_against(const std::vector<TwoPartyRun> &runs, const StateVector &predicted, AttackReport report) {
    report.branches_checked = runs.size();
    report.verdict = true;
    for (const auto &run : runs) {
        auto cmp = phase_equal(run.output, predicted);
        report.max_deviation = std::max(report.max_deviation, 1 - cmp.overlap);
        report.verdict = report.verdict && cmp.equal;
    }
    return {runs.front().output, std::move(report)};
}

const char *side_name(Side s) {
    return s == Side::kAlice ? "alice" : "bob";
}

}  // namespace

AttackResult run_rotated_basis_attack(const Unitary2 &u, const StateVector &control, const StateVector &target,
                                      Side side, const AttackMode &mode) {
    if (!u.is_unitary()) {
        throw std::invalid_argument("rotated basis: U is not unitary");
    }
    RoundDeviations dev;
    StateVector predicted = product(control, target);
    if (side == Side::kAlice) {
        dev.alice_basis = u;
        predicted.apply(u, 0);
    } else {
        dev.bob_basis = u;
        predicted.apply(u, 1);
    }
    predicted.apply_cnot(0, 1);
    AttackReport report{"rotated-basis", {{"side", side_name(side)}, {"u", format_matrix(u)}}};
    return check_against(run_two_party(control, target, dev, mode), predicted, std::move(report));
}

AttackResult run_bit_flip_attack(const StateVector &control, const StateVector &target, Side side,
                                 const AttackMode &mode) {
    RoundDeviations dev;
    StateVector predicted = product(control, target);
    if (side == Side::kAlice) {
        dev.alice_flips_ax = true;
        predicted.apply(gates::X(), 1);
    } else {
        dev.bob_flips_bz = true;
        predicted.apply(gates::Z(), 0);
    }
    predicted.apply_cnot(0, 1);
    AttackReport report{"bit-flip", {{"side", side_name(side)}}};
    return check_against(run_two_party(control, target, dev, mode), predicted, std::move(report));
}

AttackResult run_chi_corruption(const Unitary2 &c, ChiAncilla target, const StateVector &control,
                                const StateVector &target_input, const AttackMode &mode) {
    if (!is_clifford(c)) {
        throw std::invalid_argument("chi corruption rejected: operator is not Clifford");
    }
    RoundDeviations dev;
    dev.preparer = target == ChiAncilla::kSecond ? Side::kBob : Side::kAlice;
    dev.chi_corruption = {target, c};
    const std::size_t side_qubit = target == ChiAncilla::kSecond ? 0 : 1;
    const StateVector honest = cnot_of(product(control, target_input));

    auto runs = run_two_party(control, target_input, dev, mode);
    AttackReport report{"chi-corruption",
                        {{"c", format_matrix(c)}, {"target", target == ChiAncilla::kSecond ? "ancilla2" : "ancilla3"}}};
    report.branches_checked = runs.size();
    report.verdict = true;
    std::string found;
    for (const auto &run : runs) {
        double best = 0;
        std::size_t best_p = 0;
        for (std::size_t k = 0; k < 4; k++) {
            StateVector predicted = honest;
            predicted.apply(c * paulis()[k], side_qubit);
            double ov = phase_equal(run.output, predicted).overlap;
            if (ov > best) {
                best = ov;
                best_p = k;
            }
        }
        report.max_deviation = std::max(report.max_deviation, 1 - best);
        report.verdict = report.verdict && best >= 1 - kProtocolTolerance;
        found += pauli_name(best_p);
    }
    report.params["paulis"] = found;

    bool undetected = true;
    if (mode.exhaustive) {
        auto honest_runs = run_two_party(control, target_input, {}, mode);
        undetected = honest_runs.size() == runs.size();
        for (std::size_t i = 0; undetected && i < runs.size(); i++) {
            undetected = runs[i].record.alice == honest_runs[i].record.alice &&
                         runs[i].record.bob == honest_runs[i].record.bob &&
                         std::abs(runs[i].probability - honest_runs[i].probability) <= kProtocolTolerance;
        }
    }
    report.params["undetected"] = undetected ? "true" : "false";
    report.verdict = report.verdict && undetected;
    return {runs.front().output, std::move(report)};
}

Prop1Result prop1_check(const StateVector &phi, const StateVector &phi_prime, const StateVector &target) {
    const std::size_t keep[] = {1};
    DensityMatrix rho = partial_trace(cnot_of(product(phi, target)), keep);
    DensityMatrix rho_prime = partial_trace(cnot_of(product(phi_prime, target)), keep);
    double d = trace_distance(rho, rho_prime);
    return {std::move(rho), std::move(rho_prime), d};
}

namespace {

StateVector x_eigenstate(int sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("sign must be +1 or -1");
    }
    return sign > 0 ? plus_state() : minus_state();
}

}  // namespace

Prop1Result prop1_check(const StateVector &phi, const StateVector &phi_prime, int sign) {
    return prop1_check(phi, phi_prime, x_eigenstate(sign));
}

U1Result recover_u1(const StateVector &phi, const StateVector &phi_prime, int sign) {
    const StateVector t = x_eigenstate(sign);
    const StateVector psi = cnot_of(product(phi, t));
    const StateVector psi_prime = cnot_of(product(phi_prime, t));
    const SchmidtDecomposition sd = schmidt_decompose(psi);

    // alpha'_k = (I (x) <beta_k|) psi' / a_k: the left partner of beta_k in psi'.
    auto left_partner = [&](std::size_t k) {
        std::vector<Complex> v(2, 0);
        for (std::size_t i = 0; i < 2; i++) {
            for (std::size_t j = 0; j < 2; j++) {
                v[i] += std::conj(sd.right[k][j]) * psi_prime[2 * i + j];
            }
        }
        return StateVector::from_amplitudes(std::move(v));
    };
    StateVector a0 = left_partner(0);
    StateVector a1 = orthogonal_complement(a0);
    if (sd.coefficients[1] > 1e-9) {
        Complex phase = a1.inner(left_partner(1));
        if (std::abs(phase) > 1e-12) {
            a1 = StateVector::from_amplitudes({a1[0] * phase, a1[1] * phase});
        }
    }
    Unitary2 u1;
    const std::array<const StateVector *, 2> from{&sd.left[0], &sd.left[1]};
    const std::array<const StateVector *, 2> to{&a0, &a1};
    for (std::size_t k = 0; k < 2; k++) {
        for (std::size_t r = 0; r < 2; r++) {
            for (std::size_t c = 0; c < 2; c++) {
                u1(r, c) += (*to[k])[r] * std::conj((*from[k])[c]);
            }
        }
    }
    StateVector moved = psi;
    moved.apply(u1, 0);
    return {u1, std::abs(moved.inner(psi_prime))};
}

std::string PassiveReport::to_json() const {
    ordered_json j;
    ordered_json classes = ordered_json::array();
    for (const auto &[label, dist] : distributions) {
        classes.push_back({{"label", label}, {"samples", counts.at(label)}, {"distribution", dist}});
    }
    j["classes"] = classes;
    ordered_json comps = ordered_json::array();
    for (const auto &c : comparisons) {
        comps.push_back({{"a", c.a}, {"b", c.b}, {"total_variation", c.total_variation}});
    }
    j["comparisons"] = comps;
    j["threshold"] = threshold;
    j["flagged"] = flagged;
    return j.dump(2);
}

PassiveReport analyze_passive(std::span<const Transcript> transcripts, std::span<const int> labels, double threshold,
                              std::size_t min_samples) {
    if (transcripts.size() != labels.size()) {
        throw std::invalid_argument("analyze_passive: one label per transcript required");
    }
    std::map<int, std::map<std::string, std::size_t>> tallies;
    PassiveReport report{{}, {}, {}, threshold, false};
    for (std::size_t i = 0; i < transcripts.size(); i++) {
        std::string key;
        for (int b : transcripts[i].exchanged_bits()) {
            key.push_back(b ? '1' : '0');
        }
        tallies[labels[i]][key]++;
        report.counts[labels[i]]++;
    }
    for (const auto &[label, n] : report.counts) {
        if (n < min_samples) {
            throw std::invalid_argument("analyze_passive: class " + std::to_string(label) + " has " +
                                        std::to_string(n) + " samples, need " + std::to_string(min_samples));
        }
        for (const auto &[key, c] : tallies[label]) {
            report.distributions[label][key] = static_cast<double>(c) / static_cast<double>(n);
        }
    }
    for (auto a = report.distributions.begin(); a != report.distributions.end(); ++a) {
        for (auto b = std::next(a); b != report.distributions.end(); ++b) {
            std::set<std::string> keys;
            for (const auto &[k, _] : a->second) keys.insert(k);
            for (const auto &[k, _] : b->second) keys.insert(k);
            double tv = 0;
            for (const auto &k : keys) {
                double p = a->second.count(k) ? a->second.at(k) : 0;
                double q = b->second.count(k) ? b->second.at(k) : 0;
                tv += std::abs(p - q);
            }
            tv /= 2;
            report.comparisons.push_back({a->first, b->first, tv});
            report.flagged = report.flagged || tv > threshold;
        }
    }
    return report;
}

std::vector<Transcript> sample_nl_cnot_transcripts(const StateVector &control, const StateVector &target,
                                                   std::size_t runs, std::uint64_t seed) {
    AttackMode mode{false, seed, runs};
    std::vector<Transcript> out;
    for (auto &run : run_two_party(control, target, {}, mode)) {
        out.push_back(std::move(run.transcript));
    }
    return out;
}

Transcript exchange_transcript(int a_x, int b_z, std::uint64_t seed) {
    NonceSource nonces(seed);
    MessageChannel channel;
    const PartyId alice{0}, bob{1};
    auto swap = swap_protocol({alice, a_x, nonces.draw(alice)}, {bob, b_z, nonces.draw(bob)}, channel);
    Transcript t;
    for (const auto &m : swap.transcript.messages) {
        t.append(EventKind::kCommitment, m.sender, m.recipient, m.encode());
    }
    return t;
}

std::optional<Circuit> attack_prediction(const Circuit &circuit,
                                         const std::map<PartyId, AdversaryStrategy> &strategies) {
    for (const auto &[_, s] : strategies) {
        if (std::holds_alternative<ChiCorruption>(s)) {
            return std::nullopt;
        }
    }
    auto strategy_of = [&](PartyId p) -> const AdversaryStrategy * {
        auto it = strategies.find(p);
        return it == strategies.end() ? nullptr : &it->second;
    };
    Circuit out{{}, circuit.ownership};
    for (const auto &op : circuit.ops) {
        const auto *cn = std::get_if<CnotGate>(&op.gate);
        if (cn && classify_cnot(*cn, circuit.ownership) == CnotKind::kNonLocal) {
            const auto *alice = strategy_of(circuit.ownership.owner(cn->control));
            const auto *bob = strategy_of(circuit.ownership.owner(cn->target));
            // Rotations act on the data before measurement; flipped bits show up as
            // Paulis on the outputs, so they go after both rotations.
            const auto *alice_u = alice ? std::get_if<RotatedBasis>(alice) : nullptr;
            const auto *bob_u = bob ? std::get_if<RotatedBasis>(bob) : nullptr;
            if (alice_u) {
                out.ops.push_back({SingleQubitGate{"u", alice_u->u, cn->control}, op.line});
            }
            if (bob_u) {
                out.ops.push_back({SingleQubitGate{"u", bob_u->u, cn->target}, op.line});
            }
            if (alice && std::holds_alternative<BitFlip>(*alice)) {
                out.ops.push_back({SingleQubitGate{"x", gates::X(), cn->target}, op.line});
            }
            if (bob && std::holds_alternative<BitFlip>(*bob)) {
                out.ops.push_back({SingleQubitGate{"z", gates::Z(), cn->control}, op.line});
            }
        }
        out.ops.push_back(op);
    }
    return out;
}

}  // namespace smqc
