#pragma once

#include "cogsel/oracle.hpp"
#include "cogsel/results.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cogsel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Bad flag value detected after parsing.
class UsageError : public Error {
public:
    using Error::Error;
};

/// "start:stop:step" (inclusive of both ends when reachable) or a single value.
std::vector<double> parse_snr_range(std::string_view text);

/// Comma-separated seeds and inclusive "a..b" ranges, e.g. "1..10,42".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Comma-separated method names.
std::vector<Method> parse_method_list(std::string_view text);

struct SweepConfig {
    int n = 16;
    int l = 8;
    int taps = 4;
    std::vector<double> snr_db;
    std::vector<std::uint64_t> seeds;
    std::vector<Method> methods;
    FineRanking fine_ranking = FineRanking::kkt_weighted;
    bool timing = true;
    unsigned threads = 0;
    std::uint64_t enumeration_cap = ExhaustiveOptions{}.enumeration_cap;
};

/// One record per (seed, snr, method), ordered by seed, then snr as listed,
/// then method as listed. Cells run in parallel.
std::vector<ResultRecord> run_sweep(const SweepConfig& cfg);

/// Full command line (argv[0] is the program name). Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cogsel::cli
