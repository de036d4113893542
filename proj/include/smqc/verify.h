#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace smqc {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    /// First failing check, empty when the suite passed.
    std::string first_failure;

    bool passed() const {
        return failures == 0 && checks > 0;
    }
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    /// Fault injection: run NL-CNOTs without their Pauli corrections.
    bool disable_corrections = false;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<SuiteResult> suites;

    bool passed() const;
    /// Fixed-width summary, one line per suite.
    std::string table() const;
    std::string to_json() const;
};

/// Runs the property suites qsim, circuit, commitment, nl_cnot, smqc, ttp and
/// adversary. Output depends only on the options.
VerifyReport run_verify(const VerifyOptions &options);

}  // namespace smqc
