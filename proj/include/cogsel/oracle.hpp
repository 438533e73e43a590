#pragma once

#include "cogsel/model.hpp"
#include "cogsel/selector.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cogsel {

/// C(n, k), or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k);

/// The k-subsets of {0, ..., n-1} in lexicographic order, addressable by
/// rank so the range can be cut into chunks.
class SubsetRange {
public:
    /// Throws Error unless 0 <= k <= n and C(n, k) fits in 64 bits.
    SubsetRange(int n, int k);

    std::uint64_t count() const { return count_; }
    int n() const { return n_; }
    int k() const { return k_; }

    /// The subset at lexicographic position `rank` (combinatorial number system).
    std::vector<std::size_t> unrank(std::uint64_t rank) const;

    /// Advances `subset` to its lexicographic successor; false past the last one.
    bool next(std::vector<std::size_t>& subset) const;

    /// Visits ranks [first, last) in order.
    template <class Fn>
    void for_each(std::uint64_t first, std::uint64_t last, Fn&& fn) const {
        if (first >= last) return;
        auto cur = unrank(first);
        for (std::uint64_t r = first; r < last; ++r) {
            fn(static_cast<const std::vector<std::size_t>&>(cur));
            if (r + 1 < last) next(cur);
        }
    }

    /// All subsets, materialized. Intended for small ranges.
    std::vector<std::vector<std::size_t>> all() const;

private:
    int n_;
    int k_;
    std::uint64_t count_;
};

inline std::vector<std::vector<std::size_t>> subsets_of_size(int n, int k) {
    return SubsetRange(n, k).all();
}

struct ExhaustiveOptions {
    std::uint64_t enumeration_cap = 10'000'000;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Enumeration would exceed ExhaustiveOptions::enumeration_cap.
class CapExceededError : public Error {
public:
    using Error::Error;
};

/// Best size-L sensing set by brute force.
///
/// Size exactly L suffices: adding a channel to a set never lowers its
/// water-filled capacity, since the new channel can take zero power.
/// Ties go to the lexicographically smallest index set. Sets whose channels
/// all have zero width are skipped.
OptResult exhaustive_search(const Instance& inst, const ExhaustiveOptions& opts = {});

/// Dispatches to coarse_optimize, coarse + fine_optimize, or exhaustive_search.
OptResult run_method(const Instance& inst, Method m, const ExhaustiveOptions& opts = {});

}  // namespace cogsel
