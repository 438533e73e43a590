#pragma once

#include "cogsel/model.hpp"

#include <cstdint>

namespace cogsel {

struct SimResult {
    double empirical_rate = 0.0;       // nats, average over slots
    double rate_stderr = 0.0;          // standard error of the per-slot rate
    double empirical_avg_power = 0.0;
    double power_stderr = 0.0;
    std::int64_t slots = 0;

    /// |empirical_rate - analytical| <= sigmas * rate_stderr.
    bool within_band(double analytical, double sigmas = 3.0) const;
};

/// Slot-by-slot replay of the static policy.
///
/// Every sensed channel is free in a slot with probability q_n, independently
/// across slots and channels. A free channel carries (1/2) ln(1 + P_n / sigma_n^2)
/// nats at power P_n. Standard errors use the sample deviation across slots
/// and are infinite for a single slot.
///
/// Draws one uniform per (slot, sensed channel) in slot-major, index-ascending
/// order from Rng(seed).
SimResult simulate(const Instance& inst, const SensingSet& sensing, const Allocation& alloc,
                   std::int64_t slots, std::uint64_t seed);

}  // namespace cogsel
