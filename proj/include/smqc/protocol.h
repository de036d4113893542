#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "smqc/circuit.h"
#include "smqc/commitment.h"
#include "smqc/qsim.h"
#include "smqc/strategy.h"
#include "smqc/transcript.h"

namespace smqc {

// ---------------------------------------------------------------------------
// Quantum one-time pad and the CNOT-homomorphic TTP evaluation.

/// Pad X^x Z^z.
struct QotpKey {
    int x = 0;
    int z = 0;

    friend bool operator==(const QotpKey &, const QotpKey &) = default;
};

/// Applies X^x Z^z.
void qotp_encrypt(StateVector &state, std::size_t qubit, QotpKey key);
/// Applies (X^x Z^z)^dagger = Z^z X^x.
void qotp_decrypt(StateVector &state, std::size_t qubit, QotpKey key);

struct KeyPair {
    QotpKey control;
    QotpKey target;

    friend bool operator==(const KeyPair &, const KeyPair &) = default;
};

/// CNOT (X^a Z^b (x) X^c Z^d) = ± (X^a Z^(b^d) (x) X^(a^c) Z^d) CNOT, so the pads
/// (a, b), (c, d) become (a, b^d), (a^c, d).
KeyPair cnot_key_update(KeyPair keys);

/// Preshared pads, derived deterministically from a seed (stands in for keys
/// established out of band).
class Keyring {
   public:
    explicit Keyring(std::uint64_t seed) : seed_(seed) {}
    QotpKey key(PartyId party, std::size_t round) const;

   private:
    std::uint64_t seed_;
};

/// TTP role of an NL-CNOT: receives both padded qubits, applies CNOT, returns
/// them. Returns the updated pads the parties must decrypt with.
KeyPair ttp_nl_cnot(StateVector &joint, const NlCnotRound &round, KeyPair keys, PartyId ttp, Transcript &transcript);

// ---------------------------------------------------------------------------
// Two-party NL-CNOT over the |chi> resource and a commitment-based bit swap.

/// Deviations from the honest protocol applied during one NL-CNOT round.
struct RoundDeviations {
    Side preparer = Side::kAlice;
    std::optional<std::pair<ChiAncilla, Unitary2>> chi_corruption;
    std::optional<Unitary2> alice_basis;
    std::optional<Unitary2> bob_basis;
    bool alice_flips_ax = false;
    bool bob_flips_bz = false;
    SwapBehavior alice_swap = SwapBehavior::kHonest;
    SwapBehavior bob_swap = SwapBehavior::kHonest;
    /// Fault injection: skip the Pauli corrections.
    bool apply_corrections = true;
};

RoundDeviations deviations_for(const AdversaryStrategy &alice, const AdversaryStrategy &bob);

struct NlCnotRecord {
    BellOutcome alice;
    BellOutcome bob;
    /// Bits actually exchanged through SWAP.
    int sent_ax;
    int sent_bz;
    Side preparer;
};

/// Everything a round needs besides the register. `next_ancilla_id` numbers the
/// |chi> qubits in the transcript and advances by 4 per round.
struct ProtocolContext {
    OutcomeSource &outcomes;
    NonceSource &nonces;
    Transcript &transcript;
    std::size_t next_ancilla_id;
};

/// Runs one NL-CNOT between `round.control_qubit` (Alice) and `round.target_qubit`
/// (Bob) of `joint`:
///   1. the preparer builds |chi> on four fresh ancillas and hands the other party its half;
///   2. Alice Bell-measures (control, ancilla 1) -> (a_x, a_z), Bob Bell-measures
///      (ancilla 4, target) -> (b_x, b_z);
///   3. a_x and b_z are exchanged through swap_protocol;
///   4. Alice applies Z^b_z X^a_x Z^a_z to ancilla 2, Bob Z^b_z X^a_x X^b_x to ancilla 3.
/// The measured qubits are then removed and ancillas 2 and 3 take the places of
/// the control and target, so the register keeps its size and layout.
NlCnotRecord nl_cnot(StateVector &joint, const NlCnotRound &round, ProtocolContext &context,
                     const RoundDeviations &deviations = {});

// ---------------------------------------------------------------------------
// Multiparty execution of a schedule.

enum class Backend { kPeer, kTtp };

struct SmqcOptions {
    Backend backend = Backend::kPeer;
    /// Missing parties are honest.
    std::map<PartyId, AdversaryStrategy> strategies;
    /// Seeds nonces and preshared pads (measurement randomness comes from the OutcomeSource).
    std::uint64_t seed = 0;
    bool apply_corrections = true;
};

struct SmqcResult {
    StateVector output;
    std::vector<MeasurementRecord> measurements;
    Transcript transcript;
    std::vector<NlCnotRecord> rounds;
};

/// Executes LQC rounds locally and each NL-CNOT round through nl_cnot (peer) or
/// ttp_nl_cnot (TTP).
SmqcResult run_smqc(const Schedule &schedule, const OwnershipMap &ownership, const StateVector &input,
                    OutcomeSource &outcomes, const SmqcOptions &options);

struct BranchResult {
    std::vector<std::size_t> choices;
    double probability;
    SmqcResult result;
};

/// run_smqc over every measurement branch with nonzero probability.
std::vector<BranchResult> run_smqc_exhaustive(const Schedule &schedule, const OwnershipMap &ownership,
                                              const StateVector &input, const SmqcOptions &options);

/// Joint register from per-party inputs; a party's state lists its qubits in
/// ascending order. Missing parties start in |0...0>.
StateVector assemble_input(const OwnershipMap &ownership, const std::map<PartyId, StateVector> &inputs);

}  // namespace smqc
