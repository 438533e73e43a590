#pragma once

#include "cogsel/selector.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cogsel {

/// One row of the results CSV.
struct ResultRecord {
    std::optional<std::uint64_t> seed;   // empty when solving a file
    std::optional<double> snr_db;
    int n = 0;
    int l = 0;
    Method method = Method::coarse;
    double capacity_nats = 0.0;
    double capacity_bits = 0.0;
    double lambda = 0.0;
    std::string selected_bitmask_hex = "0";
    int iterations = 0;
    bool certified_optimal = false;
    double wall_ms = 0.0;

    bool operator==(const ResultRecord&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "seed,snr_db,n,l,method,capacity_nats,capacity_bits,lambda,selected_bitmask_hex,iterations,"
    "certified_optimal,wall_ms";

ResultRecord make_record(const Instance& inst, const OptResult& r, double wall_ms,
                         std::optional<std::uint64_t> seed = std::nullopt,
                         std::optional<double> snr_db = std::nullopt);

/// Row without trailing newline. Reals use the shortest representation that
/// parses back to the same double.
std::string to_csv_row(const ResultRecord& rec);

/// Inverse of to_csv_row. Throws ParseError.
ResultRecord parse_csv_row(std::string_view line);

}  // namespace cogsel
