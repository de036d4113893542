#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace smqc {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits; independent of the standard
/// library's distribution implementation.
double uniform01(Rng &rng);

/// Stateless 64-bit mixer used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Outcomes whose Born probability falls at or below this are treated as impossible.
inline constexpr double kProbabilityFloor = 1e-12;

class ZeroProbabilityBranch : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// One recorded measurement decision.
struct Decision {
    std::size_t choice;
    std::vector<double> probabilities;
};

/// Supplies measurement outcomes. Either samples them from a seeded generator
/// (Born rule) or replays a forced script of outcome indices, which is what
/// makes exhaustive branch enumeration possible.
class OutcomeSource {
   public:
    /// What a forced source does once its script runs out.
    enum class Tail {
        kStrict,         // throw std::logic_error
        kFirstFeasible,  // take the lowest-index outcome with nonzero probability
    };

    static OutcomeSource sampled(std::uint64_t seed);
    static OutcomeSource forced(std::vector<std::size_t> script, Tail tail = Tail::kStrict);

    /// Picks an outcome index given the outcome probabilities. In forced mode
    /// throws ZeroProbabilityBranch if the scripted outcome is impossible.
    std::size_t choose(std::span<const double> probabilities);

    bool is_forced() const {
        return !rng_.has_value();
    }
    const std::vector<Decision> &decisions() const {
        return decisions_;
    }
    /// Product of the probabilities of every choice made so far.
    double branch_probability() const;

   private:
    OutcomeSource() = default;

    std::optional<Rng> rng_;
    std::vector<std::size_t> script_;
    Tail tail_ = Tail::kStrict;
    std::vector<Decision> decisions_;
};

/// Calls `run` once per measurement branch with nonzero probability, walking the
/// branch tree depth first in lexicographic order of outcome indices. `run` must be
/// deterministic given the outcomes it is fed. Returns the number of branches.
std::size_t enumerate_branches(const std::function<void(OutcomeSource &)> &run);

}  // namespace smqc
