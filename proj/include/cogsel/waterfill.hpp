#pragma once

#include "cogsel/model.hpp"

namespace cogsel {

/// Sensing set whose selected channels all have zero availability, so no
/// water level can meet the power budget.
class DegenerateSetError : public Error {
public:
    using Error::Error;
};

/// Modified water-filling over a fixed sensing set.
///
/// Each selected channel has width q_n; the level lambda solves
/// sum_{n in S} q_n [lambda - sigma_n^2]^+ = P exactly by walking the sorted
/// noise breakpoints. Powers are [lambda - sigma_n^2]^+ on S and zero
/// elsewhere.
///
/// Throws DegenerateSetError for an empty set or zero total width.
Allocation solve_waterfill(const Instance& inst, const SensingSet& sensing);

}  // namespace cogsel
