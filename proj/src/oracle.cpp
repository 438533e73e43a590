#include "cogsel/oracle.hpp"

#include "cogsel/waterfill.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace cogsel {

std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // acc * (n - k + i) / i stays integral at every step.
        acc = acc * (n - k + i) / i;
        if (acc > UINT64_MAX) return std::nullopt;
    }
    return static_cast<std::uint64_t>(acc);
}

SubsetRange::SubsetRange(int n, int k) : n_(n), k_(k), count_(0) {
    if (n < 0 || k < 0 || k > n) throw Error("subset size must satisfy 0 <= k <= n");
    auto c = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
    if (!c) throw CapExceededError("subset count overflows 64 bits");
    count_ = *c;
}

std::vector<std::size_t> SubsetRange::unrank(std::uint64_t rank) const {
    if (rank >= count_) throw Error("subset rank out of range");
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(k_));
    std::uint64_t c = 0;
    for (int i = 0; i < k_; ++i) {
        for (;; ++c) {
            // Subsets whose i-th element is c: choose the rest from (c, n).
            const std::uint64_t with_c = *binomial(static_cast<std::uint64_t>(n_) - 1 - c,
                                                   static_cast<std::uint64_t>(k_ - 1 - i));
            if (rank < with_c) break;
            rank -= with_c;
        }
        out.push_back(static_cast<std::size_t>(c));
        ++c;
    }
    return out;
}

bool SubsetRange::next(std::vector<std::size_t>& subset) const {
    const auto k = static_cast<std::size_t>(k_);
    const auto n = static_cast<std::size_t>(n_);
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (subset[i] < n - k + i) {
            ++subset[i];
            for (std::size_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::vector<std::size_t>> SubsetRange::all() const {
    std::vector<std::vector<std::size_t>> out;
    out.reserve(static_cast<std::size_t>(count_));
    for_each(0, count_, [&](const std::vector<std::size_t>& s) { out.push_back(s); });
    return out;
}

namespace {

struct Best {
    bool found = false;
    double capacity = 0.0;
    std::vector<std::size_t> subset;

    // Higher capacity wins; equal capacity goes to the lexicographically smaller set.
    void offer(double cap, const std::vector<std::size_t>& s) {
        if (!found || cap > capacity || (cap == capacity && s < subset)) {
            found = true;
            capacity = cap;
            subset = s;
        }
    }
    void merge(const Best& other) {
        if (other.found) offer(other.capacity, other.subset);
    }
};

}  // namespace

OptResult exhaustive_search(const Instance& inst, const ExhaustiveOptions& opts) {
    require_valid(inst);
    const SubsetRange range(static_cast<int>(inst.size()), inst.sensing_budget);
    if (range.count() > opts.enumeration_cap) {
        throw CapExceededError("enumeration cap exceeded: C(" + std::to_string(inst.size()) + ", " +
                               std::to_string(inst.sensing_budget) + ") = " + std::to_string(range.count()));
    }

    auto scan = [&](std::uint64_t first, std::uint64_t last) {
        Best best;
        range.for_each(first, last, [&](const std::vector<std::size_t>& s) {
            const bool has_width = std::any_of(s.begin(), s.end(), [&](std::size_t n) {
                return inst.channels[n].avail_prob > 0.0;
            });
            if (!has_width) return;
            best.offer(solve_waterfill(inst, SensingSet(s)).capacity_nats, s);
        });
        return best;
    };

    unsigned threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t total = range.count();
    const std::uint64_t chunk_count = std::min<std::uint64_t>(total, std::uint64_t{threads} * 8);
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunk_count));

    Best best;
    if (threads <= 1 || total < 2048) {
        best = scan(0, total);
    } else {
        std::vector<Best> partial(static_cast<std::size_t>(chunk_count));
        std::atomic<std::uint64_t> next_chunk{0};
        auto worker = [&] {
            for (std::uint64_t c; (c = next_chunk.fetch_add(1)) < chunk_count;) {
                partial[c] = scan(total * c / chunk_count, total * (c + 1) / chunk_count);
            }
        };
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        pool.clear();
        for (const auto& p : partial) best.merge(p);
    }
    if (!best.found) throw Error("no channel with positive availability");

    OptResult r;
    r.method = Method::exhaustive;
    r.sensing = SensingSet(best.subset);
    r.initial = r.sensing;
    r.alloc = solve_waterfill(inst, r.sensing);
    r.lambda_min = r.alloc.water_level;
    r.iterations = 0;
    r.certified_optimal = true;
    return r;
}

OptResult run_method(const Instance& inst, Method m, const ExhaustiveOptions& opts) {
    switch (m) {
        case Method::coarse: return coarse_optimize(inst);
        case Method::fine: return fine_optimize(inst, coarse_optimize(inst));
        case Method::exhaustive: return exhaustive_search(inst, opts);
    }
    throw Error("unknown method");
}

}  // namespace cogsel
