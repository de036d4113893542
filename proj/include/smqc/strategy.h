#pragma once

#include <string>
#include <variant>

#include "smqc/qsim.h"

namespace smqc {

/// Which end of an NL-CNOT a party plays: Alice holds the control, Bob the target.
enum class Side { kAlice, kBob };

/// The four qubits of the |chi> resource are ancillas 1..4; 2 becomes Alice's
/// output carrier and 3 Bob's.
enum class ChiAncilla { kSecond = 2, kThird = 3 };

struct Honest {};

/// Follows the protocol and keeps its view of the transcript.
struct PassiveRecorder {};

/// Prepares |chi> itself and applies the Clifford `c` to the counterpart's carrier
/// (ancilla 2 when acting as Bob, ancilla 3 when acting as Alice).
struct ChiCorruption {
    Unitary2 c;
};

/// Bell-measures in the rotated basis (U^dagger (x) I)|B_xz> as Alice, or
/// (I (x) U^dagger)|B_xz> as Bob, i.e. applies U to its own data qubit first.
struct RotatedBasis {
    Unitary2 u;
};

/// Sends the complement of its exchanged bit (a_x as Alice, b_z as Bob).
struct BitFlip {};

/// Per-party behavior. Strategies are role relative: what a party does in a given
/// NL-CNOT round depends on whether it holds the control or the target there.
using AdversaryStrategy = std::variant<Honest, PassiveRecorder, ChiCorruption, RotatedBasis, BitFlip>;

std::string strategy_name(const AdversaryStrategy &strategy);

}  // namespace smqc
