#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smqc/circuit.h"
#include "smqc/protocol.h"
#include "smqc/qsim.h"
#include "smqc/strategy.h"
#include "smqc/transcript.h"

namespace smqc {

/// I, X, Y, Z.
const std::array<Unitary2, 4> &paulis();
const char *pauli_name(std::size_t index);

/// True iff u X u^dagger and u Z u^dagger are both Paulis up to phase (within 1e-10).
bool is_clifford(const Unitary2 &u);

/// Uniformly random element of the 24-element single-qubit Clifford group (mod
/// phase) times a random global phase.
Unitary2 random_clifford(Rng &rng);

/// Branch-exhaustive by default; sampled mode draws `samples` runs from `seed`.
struct AttackMode {
    bool exhaustive = true;
    std::uint64_t seed = 0;
    std::size_t samples = 64;
};

struct AttackReport {
    std::string strategy;
    std::map<std::string, std::string> params;
    std::size_t branches_checked = 0;
    /// Largest 1 - overlap against the predicted output over all branches.
    double max_deviation = 0;
    bool verdict = false;

    std::string to_json() const;
};

struct AttackResult {
    /// Output of the first branch checked (all branches agree up to phase when the verdict passes).
    StateVector output;
    AttackReport report;
};

/// Runs a single NL-CNOT on the register control (x) target under `deviations` and
/// checks every branch against `predicted`.
struct TwoPartyRun {
    StateVector output;
    NlCnotRecord record;
    double probability;
    Transcript transcript;
};
std::vector<TwoPartyRun> run_two_party(const StateVector &control, const StateVector &target,
                                       const RoundDeviations &deviations, const AttackMode &mode);

/// A dishonest party measures in a rotated Bell basis. Predicted output:
/// CNOT((U phi) (x) varphi) for Alice, CNOT(phi (x) U varphi) for Bob.
AttackResult run_rotated_basis_attack(const Unitary2 &u, const StateVector &control, const StateVector &target,
                                      Side side = Side::kAlice, const AttackMode &mode = {});

/// A dishonest party exchanges the complement of its bit. Predicted output:
/// CNOT(phi (x) X varphi) for Alice, CNOT(Z phi (x) varphi) for Bob.
AttackResult run_bit_flip_attack(const StateVector &control, const StateVector &target, Side side = Side::kAlice,
                                 const AttackMode &mode = {});

/// A dishonest preparer applies the Clifford `c` to one carrier of |chi>. Checks
/// that every branch equals ((c P) on the corrupted side) CNOT(inputs) for some
/// Pauli P, and that the victim's outcome statistics match the honest protocol
/// (params "undetected" = "true"). Throws std::invalid_argument if `c` is not Clifford.
AttackResult run_chi_corruption(const Unitary2 &c, ChiAncilla target, const StateVector &control,
                                const StateVector &target_input, const AttackMode &mode = {});

struct Prop1Result {
    DensityMatrix rho;
    DensityMatrix rho_prime;
    double trace_distance;
};

/// Reduced states on the target after CNOT(phi (x) t) and CNOT(phi' (x) t).
Prop1Result prop1_check(const StateVector &phi, const StateVector &phi_prime, const StateVector &target);
/// Same with t = |+> (sign +1) or |-> (sign -1).
Prop1Result prop1_check(const StateVector &phi, const StateVector &phi_prime, int sign);

struct U1Result {
    Unitary2 u1;
    /// |<CNOT(phi' (x) t)| (U1 (x) I) CNOT(phi (x) t)>|.
    double overlap;
};

/// Local unitary on the control side taking CNOT(phi (x) t) to CNOT(phi' (x) t),
/// built by pairing the Schmidt vectors of both states across the shared right
/// Schmidt basis.
U1Result recover_u1(const StateVector &phi, const StateVector &phi_prime, int sign);

struct PassiveReport {
    /// label -> exchanged-bit string -> empirical frequency.
    std::map<int, std::map<std::string, double>> distributions;
    std::map<int, std::size_t> counts;
    struct Comparison {
        int a;
        int b;
        double total_variation;
    };
    std::vector<Comparison> comparisons;
    double threshold;
    bool flagged;

    std::string to_json() const;
};

/// Compares the distribution of exchanged SWAP bits across input classes. Flags
/// the report if any pairwise total-variation distance exceeds `threshold`.
/// Throws std::invalid_argument if a class has fewer than `min_samples` transcripts.
PassiveReport analyze_passive(std::span<const Transcript> transcripts, std::span<const int> labels,
                              double threshold = 0.02, std::size_t min_samples = 1000);

/// Transcripts of `runs` honest sampled NL-CNOTs on control (x) target.
std::vector<Transcript> sample_nl_cnot_transcripts(const StateVector &control, const StateVector &target,
                                                   std::size_t runs, std::uint64_t seed);

/// Transcript of a single honest SWAP of (a_x, b_z) between P0 and P1.
Transcript exchange_transcript(int a_x, int b_z, std::uint64_t seed);

/// Circuit whose honest output equals the attacked run's output (rotated basis and
/// bit flip). Returns nullopt when a strategy has no fixed prediction (chi corruption).
std::optional<Circuit> attack_prediction(const Circuit &circuit,
                                         const std::map<PartyId, AdversaryStrategy> &strategies);

}  // namespace smqc
