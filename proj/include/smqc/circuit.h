#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smqc/party.h"
#include "smqc/qsim.h"
#include "smqc/randomness.h"

namespace smqc {

struct SingleQubitGate {
    std::string name;  // "x", "h", ..., or "u" for an explicit matrix
    Unitary2 matrix;
    std::size_t qubit;
};

struct CnotGate {
    std::size_t control;
    std::size_t target;
};

/// Computational basis measurement of one or more qubits, which must share an owner.
struct LocalMeasure {
    std::vector<std::size_t> qubits;
};

struct CircuitOp {
    std::variant<SingleQubitGate, CnotGate, LocalMeasure> gate;
    /// Source line (1-based) when parsed from text, 0 otherwise.
    std::size_t line = 0;

    /// Qubits touched, in operand order.
    std::vector<std::size_t> qubits() const;
};

/// Assigns every qubit of the circuit to exactly one party.
class OwnershipMap {
   public:
    OwnershipMap() = default;
    OwnershipMap(std::size_t party_count, std::vector<PartyId> owners);

    std::size_t party_count() const {
        return party_count_;
    }
    std::size_t num_qubits() const {
        return owners_.size();
    }
    PartyId owner(std::size_t qubit) const;
    /// Qubits owned by `party`, ascending.
    std::vector<std::size_t> qubits_of(PartyId party) const;
    /// k_i.
    std::size_t input_size(PartyId party) const {
        return qubits_of(party).size();
    }

   private:
    std::size_t party_count_ = 0;
    std::vector<PartyId> owners_;
};

struct Circuit {
    std::vector<CircuitOp> ops;
    OwnershipMap ownership;
};

class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string &message);
    std::size_t line() const {
        return line_;
    }

   private:
    std::size_t line_;
};

/// Parses the line-oriented circuit format:
///
///     parties <n>
///     qubits <m>
///     owner <qubit> <party>            (one per qubit)
///     x|y|z|h|s|t <q>
///     u <q> <re00> <im00> <re01> <im01> <re10> <im10> <re11> <im11>
///     cnot <control> <target>
///     measure <q> [<q> ...]
///
/// '#' starts a comment. Gate lines keep file order. Non-unitary `u` matrices
/// and cross-owner measurements parse fine and are caught by validate().
Circuit parse_circuit(std::string_view text);

/// Inverse of parse_circuit (explicit matrices are printed with 17 significant digits).
std::string format_circuit(const Circuit &circuit);

enum class RejectionKind {
    kNonlocalMeasurement,
    kNonUnitary,
    kBadOperands,
};

struct Rejection {
    std::size_t op_index;
    std::size_t line;
    RejectionKind kind;
    std::string message;
};

/// Checks the circuit against the computation model: only single-qubit gates,
/// CNOTs and measurements local to one party. Empty result means accepted.
std::vector<Rejection> validate(const Circuit &circuit);

class InvalidCircuit : public std::runtime_error {
   public:
    explicit InvalidCircuit(std::vector<Rejection> rejections);
    const std::vector<Rejection> &rejections() const {
        return rejections_;
    }

   private:
    std::vector<Rejection> rejections_;
};

enum class CnotKind { kLocal, kNonLocal };

CnotKind classify_cnot(const CnotGate &cnot, const OwnershipMap &ownership);

/// Local quantum circuit: a run of ops touching only `party`'s qubits.
struct LqcRound {
    PartyId party;
    std::vector<CircuitOp> ops;
};

struct NlCnotRound {
    PartyId control_party;
    std::size_t control_qubit;
    PartyId target_party;
    std::size_t target_qubit;
};

using ScheduleRound = std::variant<LqcRound, NlCnotRound>;

struct Schedule {
    std::vector<ScheduleRound> rounds;

    std::size_t nl_cnot_count() const;
    /// Ops in schedule order, NL-CNOT rounds turned back into CNOTs.
    std::vector<CircuitOp> flatten() const;
};

/// Splits the circuit into per-party LQC rounds separated by NL-CNOT rounds.
/// Between two consecutive nonlocal CNOTs, every party with pending ops gets one
/// LqcRound, in ascending party order. Throws InvalidCircuit if validate() rejects.
Schedule build_schedule(const Circuit &circuit);

/// Human-readable round listing ending with the NL-CNOT count.
std::string describe_schedule(const Schedule &schedule);

struct MeasurementRecord {
    PartyId party;
    std::size_t qubit;
    int bit;

    friend bool operator==(const MeasurementRecord &, const MeasurementRecord &) = default;
};

struct OracleResult {
    StateVector output;
    std::vector<MeasurementRecord> measurements;
};

/// Runs the whole circuit on one joint register, as a single machine would.
OracleResult oracle_simulate(const Circuit &circuit, const StateVector &input, OutcomeSource &outcomes);

/// Applies one op to a register; measurements draw from `outcomes` and are appended to `record`.
void apply_op(StateVector &state, const CircuitOp &op, const OwnershipMap &ownership, OutcomeSource &outcomes,
              std::vector<MeasurementRecord> &record);

struct RandomCircuitOptions {
    std::size_t parties = 3;
    std::size_t qubits = 8;
    std::size_t gates = 50;
    std::size_t max_nonlocal_cnots = 3;
    /// Per-gate probability of a measurement (0 for measurement-free circuits).
    double measure_probability = 0;
    /// Probability that a generated measurement spans two owners.
    double cross_owner_measure_probability = 0;
};

/// Random circuit over {x, y, z, h, s, t, random u, cnot, measure}; every party owns
/// at least one qubit. Exactly `gates` ops are produced.
Circuit random_circuit(Rng &rng, const RandomCircuitOptions &options);

}  // namespace smqc
