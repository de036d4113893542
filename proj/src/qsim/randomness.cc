#include "smqc/randomness.h"

#include <numeric>
#include <string>

namespace smqc {

double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

OutcomeSource OutcomeSource::sampled(std::uint64_t seed) {
    OutcomeSource s;
    s.rng_.emplace(seed);
    return s;
}

OutcomeSource OutcomeSource::forced(std::vector<std::size_t> script, Tail tail) {
    OutcomeSource s;
    s.script_ = std::move(script);
    s.tail_ = tail;
    return s;
}

std::size_t OutcomeSource::choose(std::span<const double> probabilities) {
    if (probabilities.empty()) {
        throw std::invalid_argument("choose: no outcomes");
    }
    std::size_t pick = 0;
    if (rng_) {
        double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
        double u = uniform01(*rng_) * total;
        double acc = 0;
        std::size_t last_feasible = probabilities.size();
        pick = probabilities.size();
        for (std::size_t k = 0; k < probabilities.size(); k++) {
            if (probabilities[k] <= kProbabilityFloor) {
                continue;
            }
            last_feasible = k;
            acc += probabilities[k];
            if (u < acc) {
                pick = k;
                break;
            }
        }
        if (pick == probabilities.size()) {
            // Rounding left u just past the final cumulative sum.
            pick = last_feasible;
        }
        if (pick == probabilities.size()) {
            throw ZeroProbabilityBranch("choose: every outcome has zero probability");
        }
    } else {
        std::size_t step = decisions_.size();
        if (step < script_.size()) {
            pick = script_[step];
            if (pick >= probabilities.size()) {
                throw std::invalid_argument("forced outcome " + std::to_string(pick) + " out of range");
            }
            if (probabilities[pick] <= kProbabilityFloor) {
                throw ZeroProbabilityBranch("forced outcome " + std::to_string(pick) + " at step " +
                                            std::to_string(step) + " has zero probability");
            }
        } else if (tail_ == Tail::kStrict) {
            throw std::logic_error("forced outcome script exhausted at step " + std::to_string(step));
        } else {
            pick = 0;
            while (pick < probabilities.size() && probabilities[pick] <= kProbabilityFloor) {
                pick++;
            }
            if (pick == probabilities.size()) {
                throw ZeroProbabilityBranch("choose: every outcome has zero probability");
            }
        }
    }
    decisions_.push_back({pick, std::vector<double>(probabilities.begin(), probabilities.end())});
    return pick;
}

double OutcomeSource::branch_probability() const {
    double p = 1;
    for (const auto &d : decisions_) {
        p *= d.probabilities[d.choice];
    }
    return p;
}

std::size_t enumerate_branches(const std::function<void(OutcomeSource &)> &run) {
    std::vector<std::size_t> prefix;
    std::size_t count = 0;
    while (true) {
        auto source = OutcomeSource::forced(prefix, OutcomeSource::Tail::kFirstFeasible);
        run(source);
        count++;

        const auto &decisions = source.decisions();
        bool advanced = false;
        for (std::size_t i = decisions.size(); i-- > 0;) {
            const auto &d = decisions[i];
            std::size_t next = d.choice + 1;
            while (next < d.probabilities.size() && d.probabilities[next] <= kProbabilityFloor) {
                next++;
            }
            if (next < d.probabilities.size()) {
                prefix.clear();
                for (std::size_t j = 0; j < i; j++) {
                    prefix.push_back(decisions[j].choice);
                }
                prefix.push_back(next);
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            return count;
        }
    }
}

}  // namespace smqc
