#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smqc/party.h"

namespace smqc {

enum class EventKind {
    kClassical,         // party-to-party classical message outside SWAP
    kCommitment,        // SWAP wire message (commit or open)
    kQubitTransfer,     // payload: 2-byte big-endian qubit ids
    kLocalMeasurement,  // payload: one byte per outcome bit
    kRemap,             // payload: (2-byte logical id, 2-byte register position) pairs
};

const char *to_string(EventKind kind);

struct Event {
    std::uint64_t seq;
    EventKind kind;
    PartyId from;
    PartyId to;
    std::vector<std::uint8_t> payload;
};

/// Append-only, totally ordered record of a run.
class Transcript {
   public:
    const Event &append(EventKind kind, PartyId from, PartyId to, std::vector<std::uint8_t> payload);

    const std::vector<Event> &events() const {
        return events_;
    }
    /// Events that are messages or transfers between distinct parties.
    std::vector<Event> party_to_party() const;
    /// What `party` sees: events it sent, received or performed.
    std::vector<Event> view_of(PartyId party) const;
    /// Bits revealed by SWAP openings, in order.
    std::vector<int> exchanged_bits() const;

    /// JSON array of {seq, kind, from, to, payload-hex}.
    std::string to_json() const;

   private:
    std::vector<Event> events_;
};

std::vector<std::uint8_t> encode_qubit_ids(const std::vector<std::size_t> &ids);
std::vector<std::size_t> decode_qubit_ids(const std::vector<std::uint8_t> &payload);

std::string to_hex(const std::vector<std::uint8_t> &bytes);

}  // namespace smqc
