#include "cogsel/selector.hpp"

#include "cogsel/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

namespace cogsel {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::coarse: return "coarse";
        case Method::fine: return "fine";
        case Method::exhaustive: return "exhaustive";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "coarse") return Method::coarse;
    if (name == "fine") return Method::fine;
    if (name == "exhaustive") return Method::exhaustive;
    throw Error("unknown method: " + std::string(name));
}

namespace {

/// Up to `limit` channels from `pool` that pass `admissible`, largest key
/// first, ties to the lower index.
SensingSet top_admissible(const std::vector<std::size_t>& pool, int limit,
                          const std::function<bool(std::size_t)>& admissible,
                          const std::function<double(std::size_t)>& key) {
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(pool.size());
    for (std::size_t n : pool) {
        if (admissible(n)) ranked.emplace_back(key(n), n);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (ranked.size() > static_cast<std::size_t>(limit)) ranked.resize(static_cast<std::size_t>(limit));
    std::vector<std::size_t> idx;
    idx.reserve(ranked.size());
    for (const auto& r : ranked) idx.push_back(r.second);
    return SensingSet(std::move(idx));
}

struct SetIteration {
    SensingSet final_set;
    int iterations = 0;
    bool cycled = false;
    std::vector<IterationStep> trace;
};

/// Alternates level computation and re-selection until the selected set
/// equals its predecessor. A revisit of any older set stops the loop and
/// keeps the visited set with the highest water-filled capacity.
SetIteration iterate_sets(const Instance& inst, SensingSet start,
                          const std::function<double(const SensingSet&)>& level_of,
                          const std::function<SensingSet(double)>& select) {
    SetIteration out;
    std::vector<SensingSet> history{start};
    SensingSet prev = std::move(start);
    for (;;) {
        const double level = level_of(prev);
        SensingSet next = select(level);
        ++out.iterations;
        out.trace.push_back({level, next});
        if (next == prev || next.empty()) {
            out.final_set = std::move(prev);
            return out;
        }
        if (std::find(history.begin(), history.end(), next) != history.end()) {
            out.cycled = true;
            double best = -1.0;
            for (const auto& s : history) {
                const double c = solve_waterfill(inst, s).capacity_nats;
                if (c > best) {
                    best = c;
                    out.final_set = s;
                }
            }
            return out;
        }
        history.push_back(next);
        prev = std::move(next);
    }
}

}  // namespace

OptResult coarse_optimize(const Instance& inst) {
    require_valid(inst);
    const std::size_t n_ch = inst.size();
    const int limit = inst.sensing_budget;

    bool any_width = false;
    for (const auto& ch : inst.channels) any_width = any_width || ch.avail_prob > 0.0;
    if (!any_width) throw Error("no channel with positive availability");

    std::vector<std::size_t> all(n_ch);
    for (std::size_t n = 0; n < n_ch; ++n) all[n] = n;

    // L largest q_n, lower index on ties.
    std::vector<std::size_t> by_q = all;
    std::stable_sort(by_q.begin(), by_q.end(), [&](std::size_t a, std::size_t b) {
        return inst.channels[a].avail_prob > inst.channels[b].avail_prob;
    });
    by_q.resize(static_cast<std::size_t>(limit));
    SensingSet start(by_q);

    auto level_of = [&](const SensingSet& s) { return solve_waterfill(inst, s).water_level; };
    auto select = [&](double level) {
        auto score = [&](std::size_t n) {
            const auto& ch = inst.channels[n];
            return ch.avail_prob * (level - ch.noise_var);
        };
        return top_admissible(all, limit, [&](std::size_t n) { return score(n) > 0.0; }, score);
    };
    SetIteration it = iterate_sets(inst, start, level_of, select);

    OptResult r;
    r.method = Method::coarse;
    r.initial = std::move(start);
    r.sensing = std::move(it.final_set);
    r.alloc = solve_waterfill(inst, r.sensing);
    r.lambda_min = r.alloc.water_level;
    r.iterations = it.iterations;
    r.cycled = it.cycled;
    r.trace = std::move(it.trace);
    r.certified_optimal = lemma1_certificate(inst, r);
    return r;
}

bool lemma1_certificate(const Instance& inst, const OptResult& coarse) {
    const double threshold = coarse.lambda_min - 1e-12 * coarse.lambda_min;
    for (std::size_t n = 0; n < inst.size(); ++n) {
        if (coarse.sensing.contains(n)) continue;
        if (inst.channels[n].noise_var < threshold) return false;
    }
    return true;
}

SensingSet candidate_set(const Instance& inst, double lambda_min) {
    std::vector<std::size_t> idx;
    for (std::size_t n = 0; n < inst.size(); ++n) {
        if (inst.channels[n].noise_var <= lambda_min) idx.push_back(n);
    }
    return SensingSet(std::move(idx));
}

double fine_lambda(const Instance& inst, const SensingSet& sensing) {
    double width = 0.0;
    double weighted_floor = 0.0;
    for (std::size_t n : sensing) {
        const auto& ch = inst.channels[n];
        width += ch.avail_prob;
        weighted_floor += ch.avail_prob * ch.noise_var;
    }
    if (!(width > 0.0)) throw DegenerateSetError("degenerate: zero total width");
    return (weighted_floor + inst.power_budget) / width;
}

double fine_score(double lambda, double noise_var) {
    return lambda - noise_var * std::exp(1.0 - noise_var / lambda);
}

double fine_rank_key(double lambda, const ChannelProfile& ch) {
    const double ratio = ch.noise_var / lambda;
    return ch.avail_prob * (-std::log(ratio) - 1.0 + ratio);
}

OptResult fine_optimize(const Instance& inst, const OptResult& coarse, FineRanking ranking) {
    if (lemma1_certificate(inst, coarse) ||
        coarse.sensing.size() < static_cast<std::size_t>(inst.sensing_budget)) {
        OptResult r = coarse;
        r.method = Method::fine;
        return r;
    }

    // Zero-width channels carry no rate and would make the level undefined.
    std::vector<std::size_t> pool;
    for (std::size_t n : candidate_set(inst, coarse.lambda_min)) {
        if (inst.channels[n].avail_prob > 0.0) pool.push_back(n);
    }

    auto level_of = [&](const SensingSet& s) { return fine_lambda(inst, s); };
    auto select = [&](double level) {
        auto admissible = [&](std::size_t n) { return fine_score(level, inst.channels[n].noise_var) > 0.0; };
        if (ranking == FineRanking::unweighted) {
            return top_admissible(pool, inst.sensing_budget, admissible,
                                  [&](std::size_t n) { return fine_score(level, inst.channels[n].noise_var); });
        }
        return top_admissible(pool, inst.sensing_budget, admissible,
                              [&](std::size_t n) { return fine_rank_key(level, inst.channels[n]); });
    };
    SetIteration it = iterate_sets(inst, coarse.sensing, level_of, select);

    OptResult r;
    r.method = Method::fine;
    r.initial = coarse.sensing;
    r.sensing = std::move(it.final_set);
    r.alloc = solve_waterfill(inst, r.sensing);
    r.lambda_min = coarse.lambda_min;
    r.iterations = it.iterations;
    r.cycled = it.cycled;
    r.trace = std::move(it.trace);
    r.certified_optimal = false;
    return r;
}

OptResult joint_optimize(const Instance& inst) {
    OptResult coarse = coarse_optimize(inst);
    OptResult fine = fine_optimize(inst, coarse);
    const bool certified = lemma1_certificate(inst, coarse);
    OptResult best = fine.alloc.capacity_nats > coarse.alloc.capacity_nats ? std::move(fine) : std::move(coarse);
    best.certified_optimal = certified;
    return best;
}

}  // namespace cogsel
