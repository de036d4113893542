#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "smqc/party.h"
#include "smqc/randomness.h"

namespace smqc {

using Digest = std::array<std::uint8_t, 32>;
using Nonce = std::array<std::uint8_t, 16>;

/// Binds a party to a bit. The digest is SHA-256 over the 17-byte serialization
/// (bit byte || nonce bytes).
struct CommitmentToken {
    Digest digest{};

    friend bool operator==(const CommitmentToken &, const CommitmentToken &) = default;
};

struct Opening {
    int bit = 0;
    Nonce nonce{};

    /// bit byte (0x00 or 0x01) followed by the 16 nonce bytes.
    std::array<std::uint8_t, 17> serialize() const;
    /// Throws std::invalid_argument unless `bytes` is 17 bytes with a 0/1 bit byte.
    static Opening deserialize(std::span<const std::uint8_t> bytes);
};

CommitmentToken commit(int bit, const Nonce &nonce);

/// True iff the opening reproduces the token.
bool open_verify(const CommitmentToken &token, const Opening &opening);

/// Per-party nonce streams derived from one seed, so a party's nonces do not
/// depend on what other parties draw.
class NonceSource {
   public:
    explicit NonceSource(std::uint64_t seed) : seed_(seed) {}
    Nonce draw(PartyId party);

   private:
    std::uint64_t seed_;
    std::map<PartyId, Rng> streams_;
};

enum class MessageTag : std::uint8_t {
    kCommit = 0x01,
    kOpen = 0x02,
};

/// SWAP message. Wire encoding: tag byte || sender id (2 bytes, big endian) || payload,
/// where the payload is a 32-byte digest (commit) or a 17-byte opening (open).
struct WireMessage {
    MessageTag tag;
    PartyId sender;
    PartyId recipient;
    std::vector<std::uint8_t> payload;

    std::vector<std::uint8_t> encode() const;
    static WireMessage decode(std::span<const std::uint8_t> bytes, PartyId recipient);
};

/// Reliable in-order channel; delivery is immediate and serialized.
class MessageChannel {
   public:
    void send(WireMessage message);
    /// Removes and returns everything queued for `party`, oldest first.
    std::vector<WireMessage> drain(PartyId party);
    /// Every message ever sent, in send order.
    const std::vector<WireMessage> &log() const {
        return log_;
    }

   private:
    std::map<PartyId, std::deque<WireMessage>> inboxes_;
    std::vector<WireMessage> log_;
};

/// Scripted deviations for exercising the SWAP failure paths.
enum class SwapBehavior {
    kHonest,
    /// Sends its opening together with its commitment.
    kOpenEarly,
    /// Opens to the complement of the committed bit.
    kOpenWrongBit,
    /// Stops once it has seen the counterpart's opening.
    kAbortAfterPeerOpen,
};

struct SwapRole {
    PartyId party;
    int bit = 0;
    Nonce nonce{};
    SwapBehavior behavior = SwapBehavior::kHonest;
};

struct SwapTranscript {
    std::vector<WireMessage> messages;

    /// Every commit precedes every open.
    bool ordering_holds() const;
};

struct SwapResult {
    int first_bit_at_second;
    int second_bit_at_first;
    SwapTranscript transcript;
};

class SwapError : public std::runtime_error {
   public:
    enum class Kind {
        kCheatDetected,      // an opening failed verification
        kProtocolViolation,  // an opening appeared before both commitments
        kAbort,              // a party stopped after seeing the counterpart's opening
    };

    SwapError(Kind kind, PartyId culprit, SwapTranscript partial);

    Kind kind() const {
        return kind_;
    }
    PartyId culprit() const {
        return culprit_;
    }
    const SwapTranscript &transcript() const {
        return transcript_;
    }

   private:
    Kind kind_;
    PartyId culprit_;
    SwapTranscript transcript_;
};

const char *to_string(SwapError::Kind kind);

/// Fair exchange of two bits by commit-then-open. Both parties commit, then both
/// open; each verifies the other's opening. Parties are stepped round robin,
/// `first` before `second`. Throws SwapError on any detected deviation.
SwapResult swap_protocol(const SwapRole &first, const SwapRole &second, MessageChannel &channel);

}  // namespace smqc
