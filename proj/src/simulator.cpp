#include "cogsel/simulator.hpp"

#include "cogsel/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cogsel {

namespace {

// Welford accumulator: the mean of identical samples stays exact.
struct Running {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
    double stderr_of_mean() const {
        if (count < 2) return std::numeric_limits<double>::infinity();
        const double var = m2 / static_cast<double>(count - 1);
        return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
    }
};

}  // namespace

bool SimResult::within_band(double analytical, double sigmas) const {
    return std::abs(empirical_rate - analytical) <= sigmas * rate_stderr;
}

SimResult simulate(const Instance& inst, const SensingSet& sensing, const Allocation& alloc,
                   std::int64_t slots, std::uint64_t seed) {
    if (slots < 1) throw Error("slots must be >= 1");
    require_valid_sensing(inst, sensing);
    if (alloc.powers.size() != inst.size()) throw Error("allocation length does not match instance");
    for (std::size_t n = 0; n < inst.size(); ++n) {
        if (!(alloc.powers[n] >= 0.0)) throw Error("negative power in allocation");
        if (alloc.powers[n] > 0.0 && !sensing.contains(n)) {
            throw Error("allocation gives power to an unsensed channel");
        }
    }

    // Per-channel rate terms, same expression as channel_rate with q = 1.
    std::vector<double> rate(inst.size(), 0.0);
    for (std::size_t n : sensing) {
        rate[n] = 0.5 * std::log1p(alloc.powers[n] / inst.channels[n].noise_var);
    }

    Rng rng(seed);
    Running rate_acc;
    Running power_acc;
    for (std::int64_t t = 0; t < slots; ++t) {
        double slot_rate = 0.0;
        double slot_power = 0.0;
        for (std::size_t n : sensing) {
            if (rng.bernoulli(inst.channels[n].avail_prob)) {
                slot_rate += rate[n];
                slot_power += alloc.powers[n];
            }
        }
        rate_acc.add(slot_rate);
        power_acc.add(slot_power);
    }

    SimResult r;
    r.slots = slots;
    r.empirical_rate = rate_acc.mean;
    r.rate_stderr = rate_acc.stderr_of_mean();
    r.empirical_avg_power = power_acc.mean;
    r.power_stderr = power_acc.stderr_of_mean();
    return r;
}

}  // namespace cogsel
