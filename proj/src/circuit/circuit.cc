#include "smqc/circuit.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

namespace smqc {

std::vector<std::size_t> CircuitOp::qubits() const {
    return std::visit(
        [](const auto &g) -> std::vector<std::size_t> {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, SingleQubitGate>) {
                return {g.qubit};
            } else if constexpr (std::is_same_v<T, CnotGate>) {
                return {g.control, g.target};
            } else {
                return g.qubits;
            }
        },
        gate);
}

OwnershipMap::OwnershipMap(std::size_t party_count, std::vector<PartyId> owners)
    : party_count_(party_count), owners_(std::move(owners)) {
    for (std::size_t q = 0; q < owners_.size(); q++) {
        if (owners_[q].value >= party_count_) {
            throw std::invalid_argument("qubit " + std::to_string(q) + " owned by unknown party " +
                                        owners_[q].str());
        }
    }
}

PartyId OwnershipMap::owner(std::size_t qubit) const {
    if (qubit >= owners_.size()) {
        throw std::invalid_argument("qubit " + std::to_string(qubit) + " has no owner");
    }
    return owners_[qubit];
}

std::vector<std::size_t> OwnershipMap::qubits_of(PartyId party) const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < owners_.size(); q++) {
        if (owners_[q] == party) {
            out.push_back(q);
        }
    }
    return out;
}

ParseError::ParseError(std::size_t line, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            i++;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            i++;
        }
        if (i > start) {
            words.push_back(line.substr(start, i - start));
        }
    }
    return words;
}

std::size_t parse_index(std::string_view word, std::size_t line, const char *what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size()) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(word) + "'");
    }
    return value;
}

double parse_real(std::string_view word, std::size_t line) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size()) {
        throw ParseError(line, "expected a number, got '" + std::string(word) + "'");
    }
    return value;
}

bool is_named_gate(std::string_view word) {
    return word == "x" || word == "y" || word == "z" || word == "h" || word == "s" || word == "t";
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
    std::optional<std::size_t> parties;
    std::optional<std::size_t> qubits;
    std::vector<std::optional<PartyId>> owners;
    std::vector<CircuitOp> ops;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        line_no++;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto words = split_words(line);
        if (words.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        std::string_view cmd = words[0];
        auto need_args = [&](std::size_t n) {
            if (words.size() != n + 1) {
                throw ParseError(line_no, "'" + std::string(cmd) + "' takes " + std::to_string(n) + " argument(s)");
            }
        };
        auto need_header = [&] {
            if (!parties || !qubits) {
                throw ParseError(line_no, "'parties' and 'qubits' must precede '" + std::string(cmd) + "'");
            }
        };
        auto qubit_arg = [&](std::string_view w) {
            std::size_t q = parse_index(w, line_no, "a qubit index");
            if (q >= *qubits) {
                throw ParseError(line_no, "qubit " + std::to_string(q) + " out of range (qubits " +
                                              std::to_string(*qubits) + ")");
            }
            return q;
        };

        if (cmd == "parties") {
            need_args(1);
            if (parties) {
                throw ParseError(line_no, "duplicate 'parties'");
            }
            parties = parse_index(words[1], line_no, "a party count");
            if (*parties == 0 || *parties > 0xFFFF) {
                throw ParseError(line_no, "party count must be between 1 and 65535");
            }
        } else if (cmd == "qubits") {
            need_args(1);
            if (qubits) {
                throw ParseError(line_no, "duplicate 'qubits'");
            }
            qubits = parse_index(words[1], line_no, "a qubit count");
            if (*qubits > 24) {
                throw ParseError(line_no, "at most 24 qubits are supported");
            }
            owners.assign(*qubits, std::nullopt);
        } else if (cmd == "owner") {
            need_header();
            need_args(2);
            std::size_t q = qubit_arg(words[1]);
            std::size_t p = parse_index(words[2], line_no, "a party index");
            if (p >= *parties) {
                throw ParseError(line_no, "party " + std::to_string(p) + " out of range (parties " +
                                              std::to_string(*parties) + ")");
            }
            if (owners[q]) {
                throw ParseError(line_no, "qubit " + std::to_string(q) + " already has an owner");
            }
            owners[q] = PartyId{static_cast<std::uint16_t>(p)};
        } else if (is_named_gate(cmd)) {
            need_header();
            need_args(1);
            ops.push_back({SingleQubitGate{std::string(cmd), gates::by_name(cmd), qubit_arg(words[1])}, line_no});
        } else if (cmd == "u") {
            need_header();
            need_args(9);
            Unitary2 m;
            for (std::size_t k = 0; k < 4; k++) {
                m.entries[k] = {parse_real(words[2 + 2 * k], line_no), parse_real(words[3 + 2 * k], line_no)};
            }
            ops.push_back({SingleQubitGate{"u", m, qubit_arg(words[1])}, line_no});
        } else if (cmd == "cnot") {
            need_header();
            need_args(2);
            ops.push_back({CnotGate{qubit_arg(words[1]), qubit_arg(words[2])}, line_no});
        } else if (cmd == "measure") {
            need_header();
            if (words.size() < 2) {
                throw ParseError(line_no, "'measure' needs at least one qubit");
            }
            LocalMeasure m;
            for (std::size_t k = 1; k < words.size(); k++) {
                m.qubits.push_back(qubit_arg(words[k]));
            }
            ops.push_back({std::move(m), line_no});
        } else {
            throw ParseError(line_no, "unknown gate '" + std::string(cmd) + "'");
        }
        if (end == text.size()) {
            break;
        }
    }

    if (!parties || !qubits) {
        throw ParseError(line_no, "missing 'parties' or 'qubits' declaration");
    }
    std::vector<PartyId> resolved;
    for (std::size_t q = 0; q < owners.size(); q++) {
        if (!owners[q]) {
            throw ParseError(line_no, "qubit " + std::to_string(q) + " has no owner");
        }
        resolved.push_back(*owners[q]);
    }
    return {std::move(ops), OwnershipMap(*parties, std::move(resolved))};
}

namespace {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_op(const CircuitOp &op) {
    return std::visit(
        [](const auto &g) {
            using T = std::decay_t<decltype(g)>;
            std::string s;
            if constexpr (std::is_same_v<T, SingleQubitGate>) {
                s = g.name + " " + std::to_string(g.qubit);
                if (g.name == "u") {
                    for (const auto &e : g.matrix.entries) {
                        s += " " + format_real(e.real()) + " " + format_real(e.imag());
                    }
                }
            } else if constexpr (std::is_same_v<T, CnotGate>) {
                s = "cnot " + std::to_string(g.control) + " " + std::to_string(g.target);
            } else {
                s = "measure";
                for (auto q : g.qubits) {
                    s += " " + std::to_string(q);
                }
            }
            return s;
        },
        op.gate);
}

}  // namespace

std::string format_circuit(const Circuit &circuit) {
    std::ostringstream out;
    out << "parties " << circuit.ownership.party_count() << "\n";
    out << "qubits " << circuit.ownership.num_qubits() << "\n";
    for (std::size_t q = 0; q < circuit.ownership.num_qubits(); q++) {
        out << "owner " << q << " " << circuit.ownership.owner(q).value << "\n";
    }
    for (const auto &op : circuit.ops) {
        out << format_op(op) << "\n";
    }
    return out.str();
}

std::vector<Rejection> validate(const Circuit &circuit) {
    std::vector<Rejection> out;
    const auto &own = circuit.ownership;
    for (std::size_t i = 0; i < circuit.ops.size(); i++) {
        const auto &op = circuit.ops[i];
        auto reject = [&](RejectionKind kind, std::string message) {
            out.push_back({i, op.line, kind, std::move(message)});
        };
        auto qubits = op.qubits();
        if (std::any_of(qubits.begin(), qubits.end(), [&](std::size_t q) { return q >= own.num_qubits(); })) {
            reject(RejectionKind::kBadOperands, "qubit index out of range");
            continue;
        }
        if (const auto *g = std::get_if<SingleQubitGate>(&op.gate)) {
            if (!g->matrix.is_unitary()) {
                reject(RejectionKind::kNonUnitary, "gate '" + g->name + "' on qubit " + std::to_string(g->qubit) +
                                                       " is not unitary");
            }
        } else if (const auto *c = std::get_if<CnotGate>(&op.gate)) {
            if (c->control == c->target) {
                reject(RejectionKind::kBadOperands, "cnot control equals target");
            }
        } else {
            const auto &m = std::get<LocalMeasure>(op.gate);
            auto sorted = m.qubits;
            std::sort(sorted.begin(), sorted.end());
            if (sorted.empty() || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                reject(RejectionKind::kBadOperands, "measure needs distinct qubits");
                continue;
            }
            PartyId first = own.owner(m.qubits[0]);
            for (auto q : m.qubits) {
                if (own.owner(q) != first) {
                    reject(RejectionKind::kNonlocalMeasurement,
                           "nonlocal measurement rejected: qubits span " + first.str() + " and " + own.owner(q).str());
                    break;
                }
            }
        }
    }
    return out;
}

InvalidCircuit::InvalidCircuit(std::vector<Rejection> rejections)
    : std::runtime_error([&] {
          std::string msg = "circuit rejected:";
          for (const auto &r : rejections) {
              msg += "\n  ";
              if (r.line) {
                  msg += "line " + std::to_string(r.line) + ": ";
              }
              msg += r.message;
          }
          return msg;
      }()),
      rejections_(std::move(rejections)) {}

CnotKind classify_cnot(const CnotGate &cnot, const OwnershipMap &ownership) {
    return ownership.owner(cnot.control) == ownership.owner(cnot.target) ? CnotKind::kLocal : CnotKind::kNonLocal;
}

std::size_t Schedule::nl_cnot_count() const {
    return static_cast<std::size_t>(std::count_if(rounds.begin(), rounds.end(), [](const ScheduleRound &r) {
        return std::holds_alternative<NlCnotRound>(r);
    }));
}

std::vector<CircuitOp> Schedule::flatten() const {
    std::vector<CircuitOp> out;
    for (const auto &r : rounds) {
        if (const auto *lqc = std::get_if<LqcRound>(&r)) {
            out.insert(out.end(), lqc->ops.begin(), lqc->ops.end());
        } else {
            const auto &nl = std::get<NlCnotRound>(r);
            out.push_back({CnotGate{nl.control_qubit, nl.target_qubit}, 0});
        }
    }
    return out;
}

Schedule build_schedule(const Circuit &circuit) {
    if (auto rejections = validate(circuit); !rejections.empty()) {
        throw InvalidCircuit(std::move(rejections));
    }
    const auto &own = circuit.ownership;
    std::vector<std::vector<CircuitOp>> pending(own.party_count());
    Schedule schedule;
    auto flush = [&] {
        for (std::size_t p = 0; p < pending.size(); p++) {
            if (!pending[p].empty()) {
                schedule.rounds.push_back(LqcRound{PartyId{static_cast<std::uint16_t>(p)}, std::move(pending[p])});
                pending[p].clear();
            }
        }
    };
    for (const auto &op : circuit.ops) {
        if (const auto *c = std::get_if<CnotGate>(&op.gate); c && classify_cnot(*c, own) == CnotKind::kNonLocal) {
            flush();
            schedule.rounds.push_back(NlCnotRound{own.owner(c->control), c->control, own.owner(c->target), c->target});
        } else {
            pending[own.owner(op.qubits().front()).value].push_back(op);
        }
    }
    flush();
    return schedule;
}

std::string describe_schedule(const Schedule &schedule) {
    std::ostringstream out;
    for (std::size_t i = 0; i < schedule.rounds.size(); i++) {
        out << "round " << i << ": ";
        if (const auto *lqc = std::get_if<LqcRound>(&schedule.rounds[i])) {
            out << "LQC " << lqc->party.str() << " [";
            for (std::size_t k = 0; k < lqc->ops.size(); k++) {
                std::string s = format_op(lqc->ops[k]);
                if (const auto *g = std::get_if<SingleQubitGate>(&lqc->ops[k].gate); g && g->name == "u") {
                    s = "u " + std::to_string(g->qubit);
                }
                out << (k ? ", " : "") << s;
            }
            out << "]\n";
        } else {
            const auto &nl = std::get<NlCnotRound>(schedule.rounds[i]);
            out << "NL-CNOT " << nl.control_party.str() << ":q" << nl.control_qubit << " -> " << nl.target_party.str()
                << ":q" << nl.target_qubit << "\n";
        }
    }
    out << schedule.nl_cnot_count() << " NL-CNOT rounds\n";
    return out.str();
}

void apply_op(StateVector &state, const CircuitOp &op, const OwnershipMap &ownership, OutcomeSource &outcomes,
              std::vector<MeasurementRecord> &record) {
    std::visit(
        [&](const auto &g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, SingleQubitGate>) {
                state.apply(g.matrix, g.qubit);
            } else if constexpr (std::is_same_v<T, CnotGate>) {
                state.apply_cnot(g.control, g.target);
            } else {
                for (auto q : g.qubits) {
                    int bit = state.measure_z(q, outcomes);
                    record.push_back({ownership.owner(q), q, bit});
                }
            }
        },
        op.gate);
}

OracleResult oracle_simulate(const Circuit &circuit, const StateVector &input, OutcomeSource &outcomes) {
    if (input.num_qubits() != circuit.ownership.num_qubits()) {
        throw std::invalid_argument("oracle_simulate: input has " + std::to_string(input.num_qubits()) +
                                    " qubits, circuit has " + std::to_string(circuit.ownership.num_qubits()));
    }
    OracleResult result{input, {}};
    for (const auto &op : circuit.ops) {
        apply_op(result.output, op, circuit.ownership, outcomes, result.measurements);
    }
    return result;
}

Circuit random_circuit(Rng &rng, const RandomCircuitOptions &options) {
    if (options.parties == 0 || options.qubits < options.parties) {
        throw std::invalid_argument("random_circuit: need at least one qubit per party");
    }
    std::vector<PartyId> owners;
    for (std::size_t q = 0; q < options.qubits; q++) {
        std::size_t p = q < options.parties ? q : static_cast<std::size_t>(rng() % options.parties);
        owners.push_back(PartyId{static_cast<std::uint16_t>(p)});
    }
    std::shuffle(owners.begin(), owners.end(), rng);
    OwnershipMap own(options.parties, owners);

    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    auto same_owner_other = [&](std::size_t q) -> std::optional<std::size_t> {
        std::vector<std::size_t> c;
        for (auto r : own.qubits_of(own.owner(q))) {
            if (r != q) {
                c.push_back(r);
            }
        }
        if (c.empty()) {
            return std::nullopt;
        }
        return c[pick(c.size())];
    };
    auto single = [&]() -> CircuitOp {
        static const char *kNames[] = {"x", "y", "z", "h", "s", "t", "u"};
        std::string name = kNames[pick(7)];
        Unitary2 m = name == "u" ? random_unitary2(rng) : gates::by_name(name);
        return {SingleQubitGate{name, m, pick(options.qubits)}, 0};
    };

    Circuit circuit{{}, own};
    std::size_t nonlocal = 0;
    while (circuit.ops.size() < options.gates) {
        double roll = uniform01(rng);
        if (roll < options.measure_probability) {
            std::size_t q = pick(options.qubits);
            LocalMeasure m{{q}};
            if (uniform01(rng) < options.cross_owner_measure_probability) {
                std::vector<std::size_t> others;
                for (std::size_t r = 0; r < options.qubits; r++) {
                    if (own.owner(r) != own.owner(q)) {
                        others.push_back(r);
                    }
                }
                if (!others.empty()) {
                    m.qubits.push_back(others[pick(others.size())]);
                }
            } else if (auto r = same_owner_other(q); r && uniform01(rng) < 0.5) {
                m.qubits.push_back(*r);
            }
            circuit.ops.push_back({std::move(m), 0});
        } else if (roll < options.measure_probability + 0.3) {
            std::size_t c = pick(options.qubits);
            std::size_t t = pick(options.qubits - 1);
            if (t >= c) {
                t++;
            }
            if (own.owner(c) != own.owner(t)) {
                if (nonlocal < options.max_nonlocal_cnots) {
                    nonlocal++;
                    circuit.ops.push_back({CnotGate{c, t}, 0});
                } else if (auto r = same_owner_other(c)) {
                    circuit.ops.push_back({CnotGate{c, *r}, 0});
                } else {
                    circuit.ops.push_back(single());
                }
            } else {
                circuit.ops.push_back({CnotGate{c, t}, 0});
            }
        } else {
            circuit.ops.push_back(single());
        }
    }
    return circuit;
}

}  // namespace smqc
