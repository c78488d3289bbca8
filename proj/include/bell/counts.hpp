#pragma once

#include <cstdint>
#include <vector>

#include "bell/quantum.hpp"

namespace bell {

/// Acquisition plan for one simulated run: one strategy, one noise model,
/// Poisson coincidence statistics at `rate` for `duration` seconds per
/// setting pair, all pairs of the strategy's scenario measured once.
struct RunPlan {
    Strategy strategy;
    NoiseModel noise;
    double rate = 1000.0;   ///< expected coincidences per second
    double duration = 1.0;  ///< seconds per setting pair
    bool randomize_order = true;
    std::uint64_t seed = 1;
};

inline void validate(const RunPlan& plan) {
    validate(plan.strategy);
    validate(plan.noise);
    if (!(plan.rate > 0.0)) throw GuardError("rate must be > 0");
    if (!(plan.duration > 0.0)) throw GuardError("duration must be > 0");
}

/// Raw coincidence counts for one setting pair (outcome order ++, +-, -+, --).
struct PairCounts {
    long long n_pp = 0;
    long long n_pm = 0;
    long long n_mp = 0;
    long long n_mm = 0;
    double duration_s = 0.0;

    long long total() const { return n_pp + n_pm + n_mp + n_mm; }
};

/// Everything needed to re-derive estimates and uncertainties from one run:
/// per-pair counts and durations, the acquisition order, the seed and the
/// plan that produced them. No post-processing is ever applied to these.
struct CountRecord {
    Scenario scenario;
    std::vector<PairCounts> pairs;       ///< index x * nB + y
    std::vector<int> acquisition_order;  ///< flat pair indices in measured order
    std::uint64_t seed = 0;
    RunPlan plan;

    const PairCounts& at(int x, int y) const { return pairs[x * scenario.nB + y]; }
    PairCounts& at(int x, int y) { return pairs[x * scenario.nB + y]; }
};

}  // namespace bell
