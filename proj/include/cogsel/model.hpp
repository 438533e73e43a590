#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cogsel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Instance violates one of its invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed instance document.
class ParseError : public Error {
public:
    using Error::Error;
};

/// One licensed channel as seen by the secondary transmitter.
struct ChannelProfile {
    double avail_prob = 0.0;  // probability the channel is free in a slot
    double noise_var = 1.0;   // sigma^2, power units

    bool operator==(const ChannelProfile&) const = default;
};

struct Instance {
    std::vector<ChannelProfile> channels;
    double power_budget = 1.0;   // average power P
    int sensing_budget = 1;      // L, channels sensed per slot

    std::size_t size() const { return channels.size(); }
    bool operator==(const Instance&) const = default;
};

/// Channels the radio senses. Indices are kept sorted and unique.
class SensingSet {
public:
    SensingSet() = default;
    explicit SensingSet(std::vector<std::size_t> indices);

    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(std::size_t n) const;

    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    /// Lowercase hex bitmask with bit n set for every selected channel n.
    std::string to_hex_mask() const;
    static SensingSet from_hex_mask(std::string_view hex);

    bool operator==(const SensingSet&) const = default;
    /// Lexicographic order on the sorted index lists.
    auto operator<=>(const SensingSet&) const = default;

private:
    std::vector<std::size_t> indices_;
};

struct Allocation {
    double water_level = 0.0;
    std::vector<double> powers;   // length N, zero off the sensing set
    double capacity_nats = 0.0;
};

/// Returns nullopt when every invariant holds, otherwise a message naming
/// the first violation.
std::optional<std::string> validate_instance(const Instance& inst);

/// Throws ValidationError when validate_instance reports a violation.
void require_valid(const Instance& inst);

/// Checks |S| <= L and every index < N.
void require_valid_sensing(const Instance& inst, const SensingSet& sensing);

/// Ergodic rate sum over the sensing set of (q_n / 2) ln(1 + P_n / sigma_n^2).
double capacity(const Instance& inst, const SensingSet& sensing, const Allocation& alloc);

/// Per-channel term of the capacity sum.
double channel_rate(const ChannelProfile& ch, double power);

constexpr double kLn2 = 0.69314718055994530942;
inline double nats_to_bits(double nats) { return nats / kLn2; }

/// Random frequency-selective instance.
///
/// q_n ~ U[0,1] i.i.d.; a `taps`-tap impulse response with standard complex
/// Gaussian taps is transformed with an n-point DFT, normalized to unit mean
/// |H_k|^2, and sigma_k^2 = 1 / |H_k|^2 clamped to [1e-6, 1e6].
/// P = n * 10^(snr_db / 10).
///
/// Draw order from the seeded stream: n uniforms for q, then `taps` complex
/// taps (real, imaginary) via Box-Muller.
Instance generate_instance(std::uint64_t seed, int n, int l, double snr_db, int taps);

/// Serializes to the fixed-order instance JSON, floats with 17 significant digits.
std::string write_instance(const Instance& inst);

/// Parses and validates an instance document.
Instance read_instance(std::string_view text);

Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

/// "%.17g" formatting shared by the JSON and CSV writers.
std::string format_double(double v);

}  // namespace cogsel
