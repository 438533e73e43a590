#include "cogsel/waterfill.hpp"

#include <algorithm>
#include <limits>

namespace cogsel {

Allocation solve_waterfill(const Instance& inst, const SensingSet& sensing) {
    if (sensing.empty()) throw DegenerateSetError("empty sensing set");

    // Zero-width channels never constrain the level.
    std::vector<std::size_t> order;
    order.reserve(sensing.size());
    for (std::size_t n : sensing) {
        if (inst.channels[n].avail_prob > 0.0) order.push_back(n);
    }
    if (order.empty()) throw DegenerateSetError("degenerate: zero total width");

    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return inst.channels[a].noise_var < inst.channels[b].noise_var;
    });

    const double budget = inst.power_budget;
    double width = 0.0;
    double weighted_floor = 0.0;
    double level = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& ch = inst.channels[order[k]];
        width += ch.avail_prob;
        weighted_floor += ch.avail_prob * ch.noise_var;
        level = (budget + weighted_floor) / width;
        const double next = k + 1 < order.size() ? inst.channels[order[k + 1]].noise_var
                                                 : std::numeric_limits<double>::infinity();
        if (level <= next) break;
    }

    Allocation alloc;
    alloc.water_level = level;
    alloc.powers.assign(inst.size(), 0.0);
    for (std::size_t n : sensing) {
        alloc.powers[n] = std::max(level - inst.channels[n].noise_var, 0.0);
    }
    alloc.capacity_nats = capacity(inst, sensing, alloc);
    return alloc;
}

}  // namespace cogsel
