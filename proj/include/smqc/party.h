#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace smqc {

/// Identifies one participant of a joint computation. Parties are numbered
/// 0..n-1; the trusted third party of the TTP backend uses id n.
struct PartyId {
    std::uint16_t value = 0;

    constexpr auto operator<=>(const PartyId &) const = default;

    std::string str() const {
        return "P" + std::to_string(value);
    }
};

}  // namespace smqc
