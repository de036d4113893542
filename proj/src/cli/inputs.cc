#include <cctype>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

#include "smqc/adversary.h"
#include "smqc/cli.h"

namespace smqc::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_real(std::string_view text, std::string_view context) {
    std::string s(text);
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw std::invalid_argument("bad number '" + s + "' in " + std::string(context));
    }
    return v;
}

Complex parse_complex(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        throw std::invalid_argument("empty amplitude");
    }
    if (text.back() != 'i') {
        return parse_real(text, text);
    }
    std::string_view body = text.substr(0, text.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    std::string_view re = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
    std::string_view im = split == std::string_view::npos ? body : body.substr(split);
    double imag;
    if (im.empty() || im == "+") {
        imag = 1;
    } else if (im == "-") {
        imag = -1;
    } else {
        imag = parse_real(im, text);
    }
    return {re.empty() ? 0.0 : parse_real(re, text), imag};
}

StateVector named_ket(char c) {
    switch (c) {
        case '0':
            return basis_state(1, 0);
        case '1':
            return basis_state(1, 1);
        case '+':
            return plus_state();
        case '-':
            return minus_state();
    }
    throw std::invalid_argument(std::string("unknown ket label '") + c + "' (expected 0, 1, + or -)");
}

Unitary2 gate_param(std::string_view name, std::string_view strategy) {
    if (name.empty()) {
        throw std::invalid_argument(std::string(strategy) + " needs a gate parameter, e.g. " + std::string(strategy) +
                                    ":h");
    }
    return gates::by_name(name);
}

std::uint16_t parse_party(std::string_view text, std::size_t party_count) {
    text = trim(text);
    std::size_t v = 0;
    if (text.empty() || text.size() > 5) {
        throw std::invalid_argument("bad party '" + std::string(text) + "'");
    }
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("bad party '" + std::string(text) + "'");
        }
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    if (v >= party_count) {
        throw std::invalid_argument("party " + std::to_string(v) + " does not exist (circuit has " +
                                    std::to_string(party_count) + " parties)");
    }
    return static_cast<std::uint16_t>(v);
}

template <typename F>
void for_each_item(const std::vector<std::string> &items, F &&f) {
    for (const auto &raw : items) {
        std::string_view rest = raw;
        while (!rest.empty()) {
            std::size_t semi = rest.find(';');
            std::string_view item = trim(rest.substr(0, semi));
            rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
            if (item.empty()) {
                continue;
            }
            std::size_t eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw std::invalid_argument("expected <party>=<value>, got '" + std::string(item) + "'");
            }
            f(item.substr(0, eq), trim(item.substr(eq + 1)));
        }
    }
}

}  // namespace

StateVector parse_state(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        throw std::invalid_argument("empty state");
    }
    if (text.front() == '[') {
        if (text.back() != ']') {
            throw std::invalid_argument("amplitude list must end with ']'");
        }
        std::vector<Complex> amps;
        std::string_view body = text.substr(1, text.size() - 2);
        while (true) {
            std::size_t comma = body.find(',');
            amps.push_back(parse_complex(body.substr(0, comma)));
            if (comma == std::string_view::npos) {
                break;
            }
            body = body.substr(comma + 1);
        }
        std::size_t n = amps.size();
        if (n < 2 || (n & (n - 1)) != 0) {
            throw std::invalid_argument("amplitude list length must be a power of two >= 2");
        }
        double norm = 0;
        for (auto a : amps) {
            norm += std::norm(a);
        }
        if (norm <= 1e-24) {
            throw std::invalid_argument("amplitude list is zero");
        }
        return StateVector::from_amplitudes(std::move(amps));
    }

    std::optional<StateVector> state;
    while (!text.empty()) {
        if (text.front() != '|') {
            throw std::invalid_argument("expected '|' in ket '" + std::string(text) + "'");
        }
        std::size_t close = text.find('>');
        if (close == std::string_view::npos || close == 1) {
            throw std::invalid_argument("unterminated or empty ket");
        }
        for (char c : text.substr(1, close - 1)) {
            StateVector k = named_ket(c);
            state = state ? state->tensor(k) : k;
        }
        text = trim(text.substr(close + 1));
    }
    return *state;
}

std::map<PartyId, StateVector> parse_inputs(const std::vector<std::string> &items, const OwnershipMap &ownership) {
    std::map<PartyId, StateVector> out;
    for_each_item(items, [&](std::string_view party_text, std::string_view state_text) {
        PartyId party{parse_party(party_text, ownership.party_count())};
        StateVector state = parse_state(state_text);
        if (state.num_qubits() != ownership.input_size(party)) {
            throw std::invalid_argument("input for " + party.str() + " has " + std::to_string(state.num_qubits()) +
                                        " qubits, party owns " + std::to_string(ownership.input_size(party)));
        }
        if (!out.emplace(party, std::move(state)).second) {
            throw std::invalid_argument("duplicate input for " + party.str());
        }
    });
    return out;
}

std::map<PartyId, AdversaryStrategy> parse_strategies(const std::vector<std::string> &items,
                                                      std::size_t party_count) {
    std::map<PartyId, AdversaryStrategy> out;
    for_each_item(items, [&](std::string_view party_text, std::string_view spec) {
        PartyId party{parse_party(party_text, party_count)};
        std::size_t colon = spec.find(':');
        std::string name(spec.substr(0, colon));
        std::string_view param = colon == std::string_view::npos ? std::string_view{} : trim(spec.substr(colon + 1));
        for (auto &ch : name) {
            ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
        AdversaryStrategy strategy;
        if (name == "honest") {
            strategy = Honest{};
        } else if (name == "passive") {
            strategy = PassiveRecorder{};
        } else if (name == "bitflip" || name == "bit-flip") {
            strategy = BitFlip{};
        } else if (name == "rotated-basis") {
            strategy = RotatedBasis{gate_param(param, name)};
        } else if (name == "chi-corruption") {
            Unitary2 c = gate_param(param, name);
            if (!is_clifford(c)) {
                throw std::invalid_argument("chi corruption rejected: operator is not Clifford");
            }
            strategy = ChiCorruption{c};
        } else {
            throw std::invalid_argument("unknown strategy '" + name + "'");
        }
        if (!out.emplace(party, strategy).second) {
            throw std::invalid_argument("duplicate strategy for " + party.str());
        }
    });
    return out;
}

}  // namespace smqc::cli
