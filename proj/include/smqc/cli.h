#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "smqc/circuit.h"
#include "smqc/protocol.h"
#include "smqc/qsim.h"
#include "smqc/strategy.h"

namespace smqc::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInvalidInput = 2,
    kProtocolError = 3,
    kPropertyFailure = 4,
};

/// Single-qubit named kets concatenated ("|0>|+>", or "|0+>"), or a bracketed
/// amplitude list ("[0.6, 0.8i]", "[1, 0, 0, 1]") that is normalized on read.
/// Complex entries are written a, bi, a+bi or a-bi. Throws std::invalid_argument.
StateVector parse_state(std::string_view text);

/// Items "<party>=<state>", several per string when separated by ';'. A party's
/// state covers its qubits in ascending order.
std::map<PartyId, StateVector> parse_inputs(const std::vector<std::string> &items, const OwnershipMap &ownership);

/// "<party>=<name>[:<param>]" with names honest, passive, bitflip, rotated-basis:<gate>
/// and chi-corruption:<gate>.
std::map<PartyId, AdversaryStrategy> parse_strategies(const std::vector<std::string> &items,
                                                      std::size_t party_count);

enum class Mode { kAuto, kSampled, kExhaustive };

struct RunConfig {
    std::string circuit_path;
    std::vector<std::string> inputs;
    /// Required in sampled mode.
    std::optional<std::uint64_t> seed;
    /// kAuto picks exhaustive up to `exhaustive_threshold` NL-CNOT rounds.
    Mode mode = Mode::kAuto;
    std::size_t exhaustive_threshold = 3;
    Backend backend = Backend::kPeer;
    std::vector<std::string> strategies;
    std::optional<std::string> out_dir;
};

struct AttackConfig {
    /// rotated-basis, bit-flip, chi-corruption, prop1 or passive.
    std::string strategy;
    std::string u = "h";
    std::string c = "h";
    Side side = Side::kAlice;
    ChiAncilla ancilla = ChiAncilla::kThird;
    int sign = +1;
    std::uint64_t seed = 0;
    std::size_t trials = 10;
    /// Transcripts per input class for passive.
    std::size_t samples = 10000;
    std::optional<std::string> out_dir;
};

struct VerifyConfig {
    std::uint64_t seed = 0;
    bool disable_corrections = false;
    std::optional<std::string> out_dir;
};

int cmd_schedule(const std::string &circuit_path, std::ostream &out, std::ostream &err);
int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_attack(const AttackConfig &config, std::ostream &out, std::ostream &err);
int cmd_verify(const VerifyConfig &config, std::ostream &out, std::ostream &err);

}  // namespace smqc::cli
