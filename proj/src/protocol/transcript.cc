#include "smqc/transcript.h"

#include "json.hpp"
#include <stdexcept>

namespace smqc {

const char *to_string(EventKind kind) {
    switch (kind) {
        case EventKind::kClassical:
            return "classical";
        case EventKind::kCommitment:
            return "commitment";
        case EventKind::kQubitTransfer:
            return "qubit_transfer";
        case EventKind::kLocalMeasurement:
            return "local_measurement";
        case EventKind::kRemap:
            return "remap";
    }
    return "?";
}

const Event &Transcript::append(EventKind kind, PartyId from, PartyId to, std::vector<std::uint8_t> payload) {
    events_.push_back({events_.size(), kind, from, to, std::move(payload)});
    return events_.back();
}

std::vector<Event> Transcript::party_to_party() const {
    std::vector<Event> out;
    for (const auto &e : events_) {
        bool message = e.kind == EventKind::kClassical || e.kind == EventKind::kCommitment ||
                       e.kind == EventKind::kQubitTransfer;
        if (message && e.from != e.to) {
            out.push_back(e);
        }
    }
    return out;
}

std::vector<Event> Transcript::view_of(PartyId party) const {
    std::vector<Event> out;
    for (const auto &e : events_) {
        if (e.from == party || e.to == party) {
            out.push_back(e);
        }
    }
    return out;
}

std::vector<int> Transcript::exchanged_bits() const {
    std::vector<int> bits;
    for (const auto &e : events_) {
        if (e.kind == EventKind::kCommitment && e.payload.size() == 3 + 17 && e.payload[0] == 0x02) {
            bits.push_back(e.payload[3]);
        }
    }
    return bits;
}

std::string to_hex(const std::vector<std::uint8_t> &bytes) {
    static const char *kDigits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 15]);
    }
    return s;
}

std::string Transcript::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &e : events_) {
        nlohmann::ordered_json j;
        j["seq"] = e.seq;
        j["kind"] = to_string(e.kind);
        j["from"] = e.from.value;
        j["to"] = e.to.value;
        j["payload-hex"] = to_hex(e.payload);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

std::vector<std::uint8_t> encode_qubit_ids(const std::vector<std::size_t> &ids) {
    std::vector<std::uint8_t> out;
    for (auto id : ids) {
        if (id > 0xFFFF) {
            throw std::invalid_argument("qubit id does not fit in two bytes");
        }
        out.push_back(static_cast<std::uint8_t>(id >> 8));
        out.push_back(static_cast<std::uint8_t>(id & 0xFF));
    }
    return out;
}

std::vector<std::size_t> decode_qubit_ids(const std::vector<std::uint8_t> &payload) {
    if (payload.size() % 2) {
        throw std::invalid_argument("qubit id payload has odd length");
    }
    std::vector<std::size_t> ids;
    for (std::size_t k = 0; k < payload.size(); k += 2) {
        ids.push_back((std::size_t{payload[k]} << 8) | payload[k + 1]);
    }
    return ids;
}

}  // namespace smqc
