#include "cogsel/model.hpp"

#include "cogsel/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cogsel {

namespace {

constexpr double kMinNoiseVar = 1e-6;
constexpr double kMaxNoiseVar = 1e6;

int hex_digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

SensingSet::SensingSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

bool SensingSet::contains(std::size_t n) const {
    return std::binary_search(indices_.begin(), indices_.end(), n);
}

std::string SensingSet::to_hex_mask() const {
    if (indices_.empty()) return "0";
    const std::size_t digits = indices_.back() / 4 + 1;
    std::string out(digits, '0');
    std::vector<int> nibbles(digits, 0);
    for (std::size_t n : indices_) nibbles[n / 4] |= 1 << (n % 4);
    static constexpr char kHex[] = "0123456789abcdef";
    for (std::size_t i = 0; i < digits; ++i) out[digits - 1 - i] = kHex[nibbles[i]];
    return out;
}

SensingSet SensingSet::from_hex_mask(std::string_view hex) {
    if (hex.empty()) throw ParseError("empty sensing bitmask");
    std::vector<std::size_t> idx;
    const std::size_t digits = hex.size();
    for (std::size_t i = 0; i < digits; ++i) {
        const int v = hex_digit_value(hex[digits - 1 - i]);
        if (v < 0) throw ParseError("bad hex digit in sensing bitmask");
        for (int b = 0; b < 4; ++b) {
            if (v & (1 << b)) idx.push_back(4 * i + static_cast<std::size_t>(b));
        }
    }
    return SensingSet(std::move(idx));
}

std::optional<std::string> validate_instance(const Instance& inst) {
    if (inst.channels.empty()) return "instance has no channels";
    if (!(inst.power_budget > 0.0) || !std::isfinite(inst.power_budget)) {
        return "power_budget must be positive and finite";
    }
    if (inst.sensing_budget < 1) return "sensing_budget must be >= 1";
    if (static_cast<std::size_t>(inst.sensing_budget) > inst.size()) {
        return "sensing_budget must be <= number of channels";
    }
    for (std::size_t n = 0; n < inst.size(); ++n) {
        const auto& ch = inst.channels[n];
        if (!(ch.avail_prob >= 0.0 && ch.avail_prob <= 1.0)) {
            return "channel " + std::to_string(n) + ": avail_prob out of range";
        }
        if (!(ch.noise_var > 0.0) || !std::isfinite(ch.noise_var)) {
            return "channel " + std::to_string(n) + ": noise_var must be positive and finite";
        }
    }
    return std::nullopt;
}

void require_valid(const Instance& inst) {
    if (auto err = validate_instance(inst)) throw ValidationError(*err);
}

void require_valid_sensing(const Instance& inst, const SensingSet& sensing) {
    if (sensing.size() > static_cast<std::size_t>(inst.sensing_budget)) {
        throw ValidationError("sensing set larger than sensing_budget");
    }
    if (!sensing.empty() && sensing.indices().back() >= inst.size()) {
        throw ValidationError("sensing index out of range");
    }
}

double channel_rate(const ChannelProfile& ch, double power) {
    return ch.avail_prob * 0.5 * std::log1p(power / ch.noise_var);
}

double capacity(const Instance& inst, const SensingSet& sensing, const Allocation& alloc) {
    double total = 0.0;
    for (std::size_t n : sensing) total += channel_rate(inst.channels[n], alloc.powers[n]);
    return total;
}

Instance generate_instance(std::uint64_t seed, int n, int l, double snr_db, int taps) {
    if (n < 1) throw ValidationError("n must be >= 1");
    if (l < 1 || l > n) throw ValidationError("l must satisfy 1 <= l <= n");
    if (taps < 1) throw ValidationError("taps must be >= 1");
    if (!std::isfinite(snr_db)) throw ValidationError("snr_db must be finite");

    Rng rng(seed);
    Instance inst;
    inst.channels.resize(static_cast<std::size_t>(n));
    for (auto& ch : inst.channels) ch.avail_prob = rng.uniform();

    // Standard complex Gaussian: E|h|^2 = 1.
    std::vector<std::complex<double>> h(static_cast<std::size_t>(taps));
    for (auto& tap : h) {
        auto [re, im] = rng.normal_pair();
        tap = {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    std::vector<double> gain(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (int t = 0; t < taps; ++t) {
            // Reduce k*t mod n before scaling so the phase stays exact for large products.
            const long long kt = (static_cast<long long>(k) * t) % n;
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(kt) / n;
            acc += h[static_cast<std::size_t>(t)] * std::polar(1.0, phase);
        }
        gain[static_cast<std::size_t>(k)] = std::norm(acc);
    }
    double mean_gain = 0.0;
    for (double g : gain) mean_gain += g;
    mean_gain /= n;

    for (int k = 0; k < n; ++k) {
        const double g = gain[static_cast<std::size_t>(k)];
        double var = (g > 0.0 && mean_gain > 0.0) ? mean_gain / g : kMaxNoiseVar;
        inst.channels[static_cast<std::size_t>(k)].noise_var = std::clamp(var, kMinNoiseVar, kMaxNoiseVar);
    }
    inst.power_budget = n * std::pow(10.0, snr_db / 10.0);
    inst.sensing_budget = l;
    return inst;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string write_instance(const Instance& inst) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"n\": " << inst.size() << ",\n";
    os << "  \"power_budget\": " << format_double(inst.power_budget) << ",\n";
    os << "  \"sensing_budget\": " << inst.sensing_budget << ",\n";
    os << "  \"channels\": [";
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& ch = inst.channels[i];
        os << (i == 0 ? "\n" : ",\n");
        os << "    {\"q\": " << format_double(ch.avail_prob)
           << ", \"noise_var\": " << format_double(ch.noise_var) << "}";
    }
    os << (inst.channels.empty() ? "]\n" : "\n  ]\n");
    os << "}\n";
    return os.str();
}

Instance read_instance(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed instance JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("instance document must be an object");

    auto field = [&](const char* key) -> const json& {
        auto it = doc.find(key);
        if (it == doc.end()) throw ParseError(std::string("missing field \"") + key + "\"");
        return *it;
    };
    auto number = [](const json& j, const char* what) {
        if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
        return j.get<double>();
    };
    auto integer = [](const json& j, const char* what) {
        if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
        return j.get<long long>();
    };

    Instance inst;
    const long long n = integer(field("n"), "n");
    inst.power_budget = number(field("power_budget"), "power_budget");
    const long long l = integer(field("sensing_budget"), "sensing_budget");
    if (l < -1'000'000'000 || l > 1'000'000'000) throw ValidationError("sensing_budget out of range");
    inst.sensing_budget = static_cast<int>(l);

    const json& chans = field("channels");
    if (!chans.is_array()) throw ParseError("channels must be an array");
    for (const auto& c : chans) {
        if (!c.is_object()) throw ParseError("channel entry must be an object");
        auto q = c.find("q");
        auto nv = c.find("noise_var");
        if (q == c.end()) throw ParseError("channel entry missing \"q\"");
        if (nv == c.end()) throw ParseError("channel entry missing \"noise_var\"");
        inst.channels.push_back({number(*q, "q"), number(*nv, "noise_var")});
    }
    if (n != static_cast<long long>(inst.size())) {
        throw ParseError("\"n\" does not match the number of channels");
    }
    require_valid(inst);
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_instance(buf.str());
}

void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << write_instance(inst);
    if (!out) throw Error("write failed: " + path);
}

}  // namespace cogsel
