#include <iostream>

#include "CLI11.hpp"
#include "smqc/cli.h"

using namespace smqc;

int main(int argc, char **argv) {
    CLI::App app{"Secure multiparty quantum computation simulator"};
    app.require_subcommand(1);

    std::string schedule_path;
    auto *schedule = app.add_subcommand("schedule", "Split a circuit into LQC and NL-CNOT rounds");
    schedule->add_option("--circuit,circuit", schedule_path, "Circuit file")->required();

    cli::RunConfig run_cfg;
    std::string mode = "auto";
    std::string backend = "peer";
    std::uint64_t run_seed = 0;
    auto *run = app.add_subcommand("run", "Execute a circuit through the protocol and compare with the oracle");
    run->add_option("--circuit", run_cfg.circuit_path, "Circuit file")->required();
    run->add_option("--inputs", run_cfg.inputs, "Per-party initial states, e.g. '0=|+>;1=[0.6,0.8i]'");
    auto *seed_opt = run->add_option("--seed", run_seed, "Seed for sampled outcomes, nonces and pads");
    run->add_option("--mode", mode, "sampled, exhaustive or auto")
        ->check(CLI::IsMember({"auto", "sampled", "exhaustive"}));
    run->add_option("--exhaustive-threshold", run_cfg.exhaustive_threshold,
                    "Largest NL-CNOT count run exhaustively in auto mode");
    run->add_option("--backend", backend, "peer or ttp")->check(CLI::IsMember({"peer", "ttp"}));
    run->add_option("--strategy", run_cfg.strategies, "<party>=<name>[:<gate>]");
    run->add_option("--out", run_cfg.out_dir, "Directory for report.json and transcript.json");

    cli::AttackConfig attack_cfg;
    std::string side = "alice";
    std::string sign = "+";
    int ancilla = 3;
    auto *attack = app.add_subcommand("attack", "Run an attack demonstration branch-exhaustively");
    attack->add_option("strategy", attack_cfg.strategy, "rotated-basis, bit-flip, chi-corruption, prop1 or passive")
        ->required();
    attack->add_option("--u", attack_cfg.u, "Basis rotation (gate name)");
    attack->add_option("--c", attack_cfg.c, "Clifford applied to |chi> (gate name)");
    attack->add_option("--side", side, "alice or bob")->check(CLI::IsMember({"alice", "bob"}));
    attack->add_option("--ancilla", ancilla, "Corrupted |chi> qubit (2 or 3)")->check(CLI::IsMember({2, 3}));
    attack->add_option("--sign", sign, "Target |+> or |->")->check(CLI::IsMember({"+", "-"}));
    attack->add_option("--seed", attack_cfg.seed, "Seed for random inputs");
    attack->add_option("--trials", attack_cfg.trials, "Random inputs to check");
    attack->add_option("--samples", attack_cfg.samples, "Transcripts per input class (passive)");
    attack->add_option("--out", attack_cfg.out_dir, "Directory for attack.json");

    cli::VerifyConfig verify_cfg;
    auto *verify = app.add_subcommand("verify", "Run every property suite");
    verify->add_option("--seed", verify_cfg.seed, "Seed for the suites");
    verify->add_flag("--disable-corrections", verify_cfg.disable_corrections,
                     "Fault injection: skip NL-CNOT Pauli corrections");
    verify->add_option("--out", verify_cfg.out_dir, "Directory for verify.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : cli::kInvalidInput;
    }

    if (*schedule) {
        return cli::cmd_schedule(schedule_path, std::cout, std::cerr);
    }
    if (*run) {
        if (*seed_opt) {
            run_cfg.seed = run_seed;
        }
        run_cfg.mode = mode == "sampled" ? cli::Mode::kSampled
                       : mode == "exhaustive" ? cli::Mode::kExhaustive
                                              : cli::Mode::kAuto;
        run_cfg.backend = backend == "ttp" ? Backend::kTtp : Backend::kPeer;
        return cli::cmd_run(run_cfg, std::cout, std::cerr);
    }
    if (*attack) {
        attack_cfg.side = side == "bob" ? Side::kBob : Side::kAlice;
        attack_cfg.sign = sign == "-" ? -1 : +1;
        attack_cfg.ancilla = ancilla == 2 ? ChiAncilla::kSecond : ChiAncilla::kThird;
        return cli::cmd_attack(attack_cfg, std::cout, std::cerr);
    }
    return cli::cmd_verify(verify_cfg, std::cout, std::cerr);
}
