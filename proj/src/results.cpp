#include "cogsel/results.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace cogsel {

namespace {

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_real(std::string_view s, const char* what) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError(std::string("bad ") + what + " field: '" + std::string(s) + "'");
    }
    return v;
}

template <class Int>
Int parse_int(std::string_view s, const char* what) {
    Int v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError(std::string("bad ") + what + " field: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

ResultRecord make_record(const Instance& inst, const OptResult& r, double wall_ms,
                         std::optional<std::uint64_t> seed, std::optional<double> snr_db) {
    ResultRecord rec;
    rec.seed = seed;
    rec.snr_db = snr_db;
    rec.n = static_cast<int>(inst.size());
    rec.l = inst.sensing_budget;
    rec.method = r.method;
    rec.capacity_nats = r.alloc.capacity_nats;
    rec.capacity_bits = nats_to_bits(r.alloc.capacity_nats);
    rec.lambda = r.alloc.water_level;
    rec.selected_bitmask_hex = r.sensing.to_hex_mask();
    rec.iterations = r.iterations;
    rec.certified_optimal = r.certified_optimal;
    rec.wall_ms = wall_ms;
    return rec;
}

std::string to_csv_row(const ResultRecord& rec) {
    std::string row;
    row += rec.seed ? std::to_string(*rec.seed) : "";
    row += ',';
    row += rec.snr_db ? shortest(*rec.snr_db) : "";
    row += ',' + std::to_string(rec.n);
    row += ',' + std::to_string(rec.l);
    row += ',' + std::string(to_string(rec.method));
    row += ',' + shortest(rec.capacity_nats);
    row += ',' + shortest(rec.capacity_bits);
    row += ',' + shortest(rec.lambda);
    row += ',' + rec.selected_bitmask_hex;
    row += ',' + std::to_string(rec.iterations);
    row += rec.certified_optimal ? ",true" : ",false";
    row += ',' + shortest(rec.wall_ms);
    return row;
}

ResultRecord parse_csv_row(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (f.size() != 12) throw ParseError("expected 12 CSV fields, got " + std::to_string(f.size()));

    ResultRecord rec;
    if (!f[0].empty()) rec.seed = parse_int<std::uint64_t>(f[0], "seed");
    if (!f[1].empty()) rec.snr_db = parse_real(f[1], "snr_db");
    rec.n = parse_int<int>(f[2], "n");
    rec.l = parse_int<int>(f[3], "l");
    try {
        rec.method = parse_method(f[4]);
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    rec.capacity_nats = parse_real(f[5], "capacity_nats");
    rec.capacity_bits = parse_real(f[6], "capacity_bits");
    rec.lambda = parse_real(f[7], "lambda");
    rec.selected_bitmask_hex = std::string(f[8]);
    SensingSet::from_hex_mask(f[8]);  // validates the digits
    rec.iterations = parse_int<int>(f[9], "iterations");
    if (f[10] == "true") {
        rec.certified_optimal = true;
    } else if (f[10] == "false") {
        rec.certified_optimal = false;
    } else {
        throw ParseError("bad certified_optimal field: '" + std::string(f[10]) + "'");
    }
    rec.wall_ms = parse_real(f[11], "wall_ms");
    return rec;
}

}  // namespace cogsel
