#include "smqc/commitment.h"

#include <openssl/evp.h>

#include <algorithm>
#include <optional>
#include <set>
#include <string>

namespace smqc {

std::array<std::uint8_t, 17> Opening::serialize() const {
    std::array<std::uint8_t, 17> out{};
    out[0] = static_cast<std::uint8_t>(bit & 1);
    std::copy(nonce.begin(), nonce.end(), out.begin() + 1);
    return out;
}

Opening Opening::deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 17 || bytes[0] > 1) {
        throw std::invalid_argument("malformed opening");
    }
    Opening o;
    o.bit = bytes[0];
    std::copy(bytes.begin() + 1, bytes.end(), o.nonce.begin());
    return o;
}

CommitmentToken commit(int bit, const Nonce &nonce) {
    if (bit != 0 && bit != 1) {
        throw std::invalid_argument("commit: bit must be 0 or 1");
    }
    auto data = Opening{bit, nonce}.serialize();
    CommitmentToken token;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), token.digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != token.digest.size()) {
        throw std::runtime_error("commit: SHA-256 failed");
    }
    return token;
}

bool open_verify(const CommitmentToken &token, const Opening &opening) {
    if (opening.bit != 0 && opening.bit != 1) {
        return false;
    }
    return commit(opening.bit, opening.nonce) == token;
}

Nonce NonceSource::draw(PartyId party) {
    auto it = streams_.find(party);
    if (it == streams_.end()) {
        it = streams_.emplace(party, Rng(splitmix64(seed_ ^ splitmix64(party.value + 1)))).first;
    }
    Nonce n;
    for (std::size_t k = 0; k < n.size(); k += 8) {
        std::uint64_t word = it->second();
        for (std::size_t b = 0; b < 8; b++) {
            n[k + b] = static_cast<std::uint8_t>(word >> (56 - 8 * b));
        }
    }
    return n;
}

std::vector<std::uint8_t> WireMessage::encode() const {
    std::vector<std::uint8_t> out;
    out.reserve(3 + payload.size());
    out.push_back(static_cast<std::uint8_t>(tag));
    out.push_back(static_cast<std::uint8_t>(sender.value >> 8));
    out.push_back(static_cast<std::uint8_t>(sender.value & 0xFF));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

WireMessage WireMessage::decode(std::span<const std::uint8_t> bytes, PartyId recipient) {
    if (bytes.size() < 3) {
        throw std::invalid_argument("wire message too short");
    }
    WireMessage m;
    if (bytes[0] == 0x01) {
        m.tag = MessageTag::kCommit;
    } else if (bytes[0] == 0x02) {
        m.tag = MessageTag::kOpen;
    } else {
        throw std::invalid_argument("unknown wire message tag " + std::to_string(bytes[0]));
    }
    m.sender = PartyId{static_cast<std::uint16_t>((bytes[1] << 8) | bytes[2])};
    m.recipient = recipient;
    m.payload.assign(bytes.begin() + 3, bytes.end());
    std::size_t expected = m.tag == MessageTag::kCommit ? 32 : 17;
    if (m.payload.size() != expected) {
        throw std::invalid_argument("wire message payload has wrong length");
    }
    return m;
}

void MessageChannel::send(WireMessage message) {
    inboxes_[message.recipient].push_back(message);
    log_.push_back(std::move(message));
}

std::vector<WireMessage> MessageChannel::drain(PartyId party) {
    auto &box = inboxes_[party];
    std::vector<WireMessage> out(box.begin(), box.end());
    box.clear();
    return out;
}

bool SwapTranscript::ordering_holds() const {
    std::optional<std::size_t> last_commit, first_open;
    for (std::size_t i = 0; i < messages.size(); i++) {
        if (messages[i].tag == MessageTag::kCommit) {
            last_commit = i;
        } else if (!first_open) {
            first_open = i;
        }
    }
    return !last_commit || !first_open || *last_commit < *first_open;
}

SwapError::SwapError(Kind kind, PartyId culprit, SwapTranscript partial)
    : std::runtime_error(std::string(to_string(kind)) + " by " + culprit.str()),
      kind_(kind),
      culprit_(culprit),
      transcript_(std::move(partial)) {}

const char *to_string(SwapError::Kind kind) {
    switch (kind) {
        case SwapError::Kind::kCheatDetected:
            return "CheatDetected";
        case SwapError::Kind::kProtocolViolation:
            return "ProtocolViolation";
        case SwapError::Kind::kAbort:
            return "Abort";
    }
    return "?";
}

namespace {

struct SwapParty {
    SwapParty(const SwapRole &r, PartyId p) : role(r), peer(p) {}

    SwapRole role;
    PartyId peer;
    std::optional<CommitmentToken> peer_token;
    std::optional<int> peer_bit;
    bool sent_commit = false;
    bool sent_open = false;
    bool aborted = false;

    bool done() const {
        return sent_open && peer_bit.has_value();
    }
};

class SwapRun {
   public:
    SwapRun(const SwapRole &first, const SwapRole &second, MessageChannel &channel)
        : parties_{SwapParty{first, second.party}, SwapParty{second, first.party}}, channel_(channel) {}

    SwapResult run() {
        while (!(parties_[0].done() && parties_[1].done())) {
            bool progress = step(parties_[0]);
            progress |= step(parties_[1]);
            if (!progress) {
                for (const auto &p : parties_) {
                    if (p.aborted || p.role.behavior == SwapBehavior::kAbortAfterPeerOpen) {
                        throw SwapError(SwapError::Kind::kAbort, p.role.party, transcript_);
                    }
                }
                throw std::logic_error("swap_protocol: deadlock");
            }
        }
        return {*parties_[1].peer_bit, *parties_[0].peer_bit, transcript_};
    }

   private:
    void emit(WireMessage m) {
        if (m.tag == MessageTag::kCommit) {
            committed_.insert(m.sender);
        }
        transcript_.messages.push_back(m);
        channel_.send(m);
        if (m.tag == MessageTag::kOpen && committed_.size() < 2) {
            throw SwapError(SwapError::Kind::kProtocolViolation, m.sender, transcript_);
        }
    }

    void send_open(SwapParty &p) {
        Opening o{p.role.bit, p.role.nonce};
        if (p.role.behavior == SwapBehavior::kOpenWrongBit) {
            o.bit ^= 1;
        }
        auto bytes = o.serialize();
        emit({MessageTag::kOpen, p.role.party, p.peer, {bytes.begin(), bytes.end()}});
        p.sent_open = true;
    }

    bool step(SwapParty &p) {
        if (p.aborted) {
            return false;
        }
        if (!p.sent_commit) {
            auto token = commit(p.role.bit, p.role.nonce);
            emit({MessageTag::kCommit, p.role.party, p.peer, {token.digest.begin(), token.digest.end()}});
            p.sent_commit = true;
            if (p.role.behavior == SwapBehavior::kOpenEarly) {
                send_open(p);
            }
            return true;
        }
        bool progress = false;
        for (auto &m : channel_.drain(p.role.party)) {
            progress = true;
            if (m.tag == MessageTag::kCommit) {
                if (p.peer_token) {
                    throw SwapError(SwapError::Kind::kProtocolViolation, m.sender, transcript_);
                }
                CommitmentToken t;
                std::copy(m.payload.begin(), m.payload.end(), t.digest.begin());
                p.peer_token = t;
            } else {
                if (!p.peer_token || p.peer_bit) {
                    throw SwapError(SwapError::Kind::kProtocolViolation, m.sender, transcript_);
                }
                Opening o = Opening::deserialize(m.payload);
                if (!open_verify(*p.peer_token, o)) {
                    throw SwapError(SwapError::Kind::kCheatDetected, m.sender, transcript_);
                }
                p.peer_bit = o.bit;
            }
        }
        if (p.peer_token && !p.sent_open) {
            if (p.role.behavior == SwapBehavior::kAbortAfterPeerOpen) {
                if (p.peer_bit) {
                    p.aborted = true;
                }
                return progress;
            }
            send_open(p);
            progress = true;
        }
        return progress;
    }

    std::array<SwapParty, 2> parties_;
    MessageChannel &channel_;
    SwapTranscript transcript_;
    std::set<PartyId> committed_;
};

}  // namespace

SwapResult swap_protocol(const SwapRole &first, const SwapRole &second, MessageChannel &channel) {
    if (first.party == second.party) {
        throw std::invalid_argument("swap_protocol: parties must differ");
    }
    if ((first.bit != 0 && first.bit != 1) || (second.bit != 0 && second.bit != 1)) {
        throw std::invalid_argument("swap_protocol: bits must be 0 or 1");
    }
    return SwapRun(first, second, channel).run();
}

}  // namespace smqc
