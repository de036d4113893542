#include "smqc/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "smqc/adversary.h"
#include "smqc/verify.h"

namespace smqc::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kRunTolerance = 1e-9;
constexpr std::size_t kTableRows = 16;

std::string fixed(double v, int digits = 12) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &dir, const std::string &name, const std::string &content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + (std::filesystem::path(dir) / name).string());
    }
    out << content << "\n";
}

Circuit load_circuit(const std::string &path) {
    return parse_circuit(read_file(path));
}

bool measurement_free(const Circuit &c) {
    return std::none_of(c.ops.begin(), c.ops.end(),
                        [](const CircuitOp &op) { return std::holds_alternative<LocalMeasure>(op.gate); });
}

std::string outcome_string(const std::vector<MeasurementRecord> &records) {
    std::string s;
    for (const auto &r : records) {
        s += (s.empty() ? "" : " ") + r.party.str() + ":q" + std::to_string(r.qubit) + "=" + std::to_string(r.bit);
    }
    return s.empty() ? "-" : s;
}

/// Output of `circuit` with its measurements forced to `records`; nullopt if that
/// outcome sequence is impossible.
std::optional<StateVector> forced_oracle(const Circuit &circuit, const StateVector &input,
                                         const std::vector<MeasurementRecord> &records) {
    std::vector<std::size_t> script;
    for (const auto &r : records) {
        script.push_back(static_cast<std::size_t>(r.bit));
    }
    auto src = OutcomeSource::forced(script);
    try {
        return oracle_simulate(circuit, input, src).output;
    } catch (const ZeroProbabilityBranch &) {
        return std::nullopt;
    }
}

std::map<std::string, double> oracle_distribution(const Circuit &circuit, const StateVector &input) {
    std::map<std::string, double> dist;
    enumerate_branches([&](OutcomeSource &src) {
        auto r = oracle_simulate(circuit, input, src);
        dist[outcome_string(r.measurements)] += src.branch_probability();
    });
    return dist;
}

struct Branch {
    double probability;
    SmqcResult result;
};

/// Stderr message and exit code for an exception escaping a command.
int report_error(std::ostream &err) {
    try {
        throw;
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const InvalidCircuit &e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const SwapError &e) {
        err << "protocol error: " << e.what() << "\n";
        return kProtocolError;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception &e) {
        err << "protocol error: " << e.what() << "\n";
        return kProtocolError;
    }
}

std::string describe_strategies(const std::map<PartyId, AdversaryStrategy> &strategies) {
    std::string s;
    for (const auto &[p, st] : strategies) {
        s += (s.empty() ? "" : ", ") + p.str() + "=" + strategy_name(st);
    }
    return s.empty() ? "all honest" : s;
}

bool is_active(const AdversaryStrategy &s) {
    return !std::holds_alternative<Honest>(s) && !std::holds_alternative<PassiveRecorder>(s);
}

}  // namespace

int cmd_schedule(const std::string &circuit_path, std::ostream &out, std::ostream &err) {
    try {
        Schedule schedule = build_schedule(load_circuit(circuit_path));
        out << describe_schedule(schedule);
        return kSuccess;
    } catch (...) {
        return report_error(err);
    }
}

int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &err) {
    try {
        const Circuit circuit = load_circuit(config.circuit_path);
        const Schedule schedule = build_schedule(circuit);
        const StateVector input = assemble_input(circuit.ownership, parse_inputs(config.inputs, circuit.ownership));
        SmqcOptions options;
        options.backend = config.backend;
        options.strategies = parse_strategies(config.strategies, circuit.ownership.party_count());
        options.seed = config.seed.value_or(0);

        bool exhaustive = config.mode == Mode::kExhaustive ||
                          (config.mode == Mode::kAuto && schedule.nl_cnot_count() <= config.exhaustive_threshold);
        if (!exhaustive && !config.seed) {
            throw std::invalid_argument("sampled mode needs --seed");
        }

        std::vector<Branch> branches;
        if (exhaustive) {
            for (auto &b : run_smqc_exhaustive(schedule, circuit.ownership, input, options)) {
                branches.push_back({b.probability, std::move(b.result)});
            }
        } else {
            auto src = OutcomeSource::sampled(*config.seed);
            auto r = run_smqc(schedule, circuit.ownership, input, src, options);
            branches.push_back({src.branch_probability(), std::move(r)});
        }

        bool any_active = std::any_of(options.strategies.begin(), options.strategies.end(),
                                      [](const auto &kv) { return is_active(kv.second); });
        // What the run should reproduce: the circuit itself when everyone is honest,
        // the attack-effect circuit otherwise (none for chi corruption).
        std::optional<Circuit> reference = any_active ? attack_prediction(circuit, options.strategies) : circuit;

        double min_oracle = 1, min_reference = 1;
        ordered_json rows = ordered_json::array();
        std::map<std::string, double> run_dist;
        for (std::size_t k = 0; k < branches.size(); k++) {
            const auto &b = branches[k];
            auto ideal = forced_oracle(circuit, input, b.result.measurements);
            double ov = ideal ? phase_equal(b.result.output, *ideal).overlap : 0;
            min_oracle = std::min(min_oracle, ov);
            ordered_json row;
            row["branch"] = k;
            row["probability"] = b.probability;
            row["measurements"] = outcome_string(b.result.measurements);
            row["oracle_overlap"] = ov;
            if (reference && any_active) {
                auto pred = forced_oracle(*reference, input, b.result.measurements);
                double pv = pred ? phase_equal(b.result.output, *pred).overlap : 0;
                min_reference = std::min(min_reference, pv);
                row["predicted_overlap"] = pv;
            }
            run_dist[outcome_string(b.result.measurements)] += b.probability;
            rows.push_back(std::move(row));
        }
        if (reference && !any_active) {
            min_reference = min_oracle;
        }

        const bool has_measurements = !measurement_free(circuit);
        std::optional<double> dist_diff;
        if (has_measurements && exhaustive && reference) {
            auto ideal = oracle_distribution(*reference, input);
            double d = 0;
            for (const auto &[key, p] : ideal) {
                d = std::max(d, std::abs(p - (run_dist.count(key) ? run_dist.at(key) : 0.0)));
            }
            for (const auto &[key, p] : run_dist) {
                if (!ideal.count(key)) {
                    d = std::max(d, p);
                }
            }
            dist_diff = d;
        }

        bool pass = !reference || (min_reference >= 1 - kRunTolerance && (!dist_diff || *dist_diff <= kRunTolerance));

        out << "circuit: " << config.circuit_path << " (" << circuit.ownership.num_qubits() << " qubits, "
            << circuit.ownership.party_count() << " parties, " << schedule.nl_cnot_count() << " NL-CNOT rounds)\n";
        out << "mode: " << (exhaustive ? "exhaustive" : "sampled") << ", " << branches.size() << " branch"
            << (branches.size() == 1 ? "" : "es") << ", backend " << (config.backend == Backend::kPeer ? "peer" : "ttp")
            << "\n";
        out << "strategies: " << describe_strategies(options.strategies) << "\n";
        if (has_measurements) {
            out << "branch  probability     measurements  overlap\n";
            for (std::size_t k = 0; k < std::min(branches.size(), kTableRows); k++) {
                const auto &row = rows[k];
                double ov = row.contains("predicted_overlap") ? row["predicted_overlap"].get<double>()
                                                              : row["oracle_overlap"].get<double>();
                out << k << "  " << fixed(branches[k].probability, 6) << "  "
                    << outcome_string(branches[k].result.measurements) << "  " << fixed(ov) << "\n";
            }
            if (branches.size() > kTableRows) {
                out << "... " << branches.size() - kTableRows << " more branches in report.json\n";
            }
        }
        out << "oracle overlap: " << fixed(min_oracle) << "\n";
        if (reference && any_active) {
            out << "predicted overlap: " << fixed(min_reference) << "\n";
        } else if (!reference) {
            out << "predicted overlap: n/a (output depends on the corruption and the branch)\n";
        }
        if (dist_diff) {
            out << "outcome distribution max difference: " << fixed(*dist_diff) << "\n";
        }
        out << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";

        if (config.out_dir) {
            ordered_json report;
            report["circuit"] = config.circuit_path;
            report["mode"] = exhaustive ? "exhaustive" : "sampled";
            report["backend"] = config.backend == Backend::kPeer ? "peer" : "ttp";
            report["seed"] = options.seed;
            ordered_json strategies = ordered_json::object();
            for (const auto &[p, st] : options.strategies) {
                strategies[p.str()] = strategy_name(st);
            }
            report["strategies"] = strategies;
            report["nl_cnot_rounds"] = schedule.nl_cnot_count();
            report["branches"] = branches.size();
            report["min_oracle_overlap"] = min_oracle;
            if (reference && any_active) {
                report["min_predicted_overlap"] = min_reference;
            }
            if (dist_diff) {
                report["distribution_max_difference"] = *dist_diff;
            }
            report["verdict"] = pass ? "PASS" : "FAIL";
            report["rows"] = rows;
            write_file(*config.out_dir, "report.json", report.dump(2));

            ordered_json transcripts = ordered_json::array();
            for (std::size_t k = 0; k < branches.size(); k++) {
                ordered_json t;
                t["branch"] = k;
                t["probability"] = branches[k].probability;
                t["events"] = ordered_json::parse(branches[k].result.transcript.to_json());
                transcripts.push_back(std::move(t));
            }
            write_file(*config.out_dir, "transcript.json", transcripts.dump(2));
        }
        return pass ? kSuccess : kPropertyFailure;
    } catch (...) {
        return report_error(err);
    }
}

namespace {

AttackReport aggregate(const std::string &strategy, std::map<std::string, std::string> params,
                       const std::vector<AttackReport> &reports) {
    AttackReport total{strategy, std::move(params), 0, 0, true};
    bool undetected = !reports.empty();
    for (const auto &r : reports) {
        auto it = r.params.find("undetected");
        undetected = undetected && it != r.params.end() && it->second == "true";
        total.branches_checked += r.branches_checked;
        total.max_deviation = std::max(total.max_deviation, r.max_deviation);
        total.verdict = total.verdict && r.verdict;
    }
    if (strategy == "chi-corruption") {
        total.params["undetected"] = undetected ? "true" : "false";
    }
    total.params["trials"] = std::to_string(reports.size());
    return total;
}

int finish_attack(const AttackConfig &config, const std::string &json, bool verdict, std::ostream &out) {
    out << "verdict: " << (verdict ? "PASS" : "FAIL") << "\n";
    if (config.out_dir) {
        write_file(*config.out_dir, "attack.json", json);
    }
    return verdict ? kSuccess : kPropertyFailure;
}

const char *side_name(Side s) {
    return s == Side::kAlice ? "alice" : "bob";
}

}  // namespace

int cmd_attack(const AttackConfig &config, std::ostream &out, std::ostream &err) {
    try {
        Rng rng(config.seed);
        const std::string &name = config.strategy;
        if (name == "rotated-basis" || name == "bit-flip" || name == "bitflip" || name == "chi-corruption") {
            std::optional<Unitary2> op;
            if (name == "rotated-basis") {
                op = gates::by_name(config.u);
            } else if (name == "chi-corruption") {
                op = gates::by_name(config.c);
                if (!is_clifford(*op)) {
                    throw std::invalid_argument("chi corruption rejected: operator is not Clifford");
                }
            }
            std::vector<AttackReport> reports;
            for (std::size_t t = 0; t < config.trials; t++) {
                StateVector control = random_state(1, rng);
                StateVector target = random_state(1, rng);
                AttackResult r = name == "rotated-basis" ? run_rotated_basis_attack(*op, control, target, config.side)
                                 : name == "chi-corruption"
                                     ? run_chi_corruption(*op, config.ancilla, control, target)
                                     : run_bit_flip_attack(control, target, config.side);
                out << "trial " << t << ": " << r.report.branches_checked << " branches, max deviation "
                    << fixed(r.report.max_deviation, 15) << ", " << (r.report.verdict ? "PASS" : "FAIL") << "\n";
                reports.push_back(std::move(r.report));
            }
            std::map<std::string, std::string> params;
            std::string canonical = name == "bitflip" ? "bit-flip" : name;
            if (canonical == "rotated-basis") {
                params["u"] = config.u;
            }
            if (canonical == "chi-corruption") {
                params["c"] = config.c;
                params["ancilla"] = std::to_string(static_cast<int>(config.ancilla));
            } else {
                params["side"] = side_name(config.side);
            }
            params["seed"] = std::to_string(config.seed);
            AttackReport total = aggregate(canonical, params, reports);
            out << "total: " << total.branches_checked << " branches, max deviation " << fixed(total.max_deviation, 15)
                << "\n";
            return finish_attack(config, total.to_json(), total.verdict, out);
        }

        if (name == "prop1") {
            ordered_json trials = ordered_json::array();
            double max_distance = 0, min_overlap = 1;
            out << "trial  distance            u1 overlap\n";
            for (std::size_t t = 0; t < config.trials; t++) {
                StateVector phi = random_state(1, rng);
                StateVector phi2 = random_state(1, rng);
                double d = prop1_check(phi, phi2, config.sign).trace_distance;
                double ov = recover_u1(phi, phi2, config.sign).overlap;
                max_distance = std::max(max_distance, d);
                min_overlap = std::min(min_overlap, ov);
                out << t << "  " << fixed(d, 15) << "  " << fixed(ov, 15) << "\n";
                trials.push_back({{"trial", t}, {"distance", d}, {"u1_overlap", ov}});
            }
            double control = prop1_check(basis_state(1, 0), plus_state(), basis_state(1, 0)).trace_distance;
            bool verdict = max_distance <= kProtocolTolerance && min_overlap >= 1 - kProtocolTolerance && control > 0.1;
            out << "max distance: " << fixed(max_distance, 15) << "\n";
            out << "min u1 overlap: " << fixed(min_overlap, 15) << "\n";
            out << "negative control (target |0>): distance " << fixed(control, 6) << "\n";
            ordered_json j;
            j["strategy"] = "prop1";
            j["params"] = {{"sign", config.sign > 0 ? "+" : "-"}, {"seed", std::to_string(config.seed)}};
            j["trials"] = trials;
            j["max_distance"] = max_distance;
            j["min_u1_overlap"] = min_overlap;
            j["negative_control_distance"] = control;
            j["verdict"] = verdict ? "PASS" : "FAIL";
            return finish_attack(config, j.dump(2), verdict, out);
        }

        if (name == "passive") {
            std::vector<Transcript> transcripts;
            std::vector<int> labels;
            const std::pair<StateVector, StateVector> classes[] = {{basis_state(1, 0), basis_state(1, 0)},
                                                                   {basis_state(1, 1), plus_state()}};
            for (int label = 0; label < 2; label++) {
                for (auto &t : sample_nl_cnot_transcripts(classes[label].first, classes[label].second, config.samples,
                                                          splitmix64(config.seed + label))) {
                    transcripts.push_back(std::move(t));
                    labels.push_back(label);
                }
            }
            PassiveReport report = analyze_passive(transcripts, labels, 0.02, std::min<std::size_t>(config.samples, 1000));
            for (const auto &c : report.comparisons) {
                out << "classes " << c.a << " vs " << c.b << ": total variation " << fixed(c.total_variation, 6) << "\n";
            }
            out << "flagged: " << (report.flagged ? "yes" : "no") << "\n";
            return finish_attack(config, report.to_json(), !report.flagged, out);
        }

        throw std::invalid_argument("unknown attack '" + name +
                                    "' (expected rotated-basis, bit-flip, chi-corruption, prop1 or passive)");
    } catch (...) {
        return report_error(err);
    }
}

int cmd_verify(const VerifyConfig &config, std::ostream &out, std::ostream &err) {
    try {
        VerifyReport report = run_verify({config.seed, config.disable_corrections});
        out << report.table();
        if (config.out_dir) {
            write_file(*config.out_dir, "verify.json", report.to_json());
        }
        return report.passed() ? kSuccess : kPropertyFailure;
    } catch (...) {
        return report_error(err);
    }
}

}  // namespace smqc::cli
