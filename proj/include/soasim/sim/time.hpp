#pragma once

#include <cstdint>
#include <string>

namespace soasim::sim {

/// Simulation time in integer nanoseconds.
using SimTime = std::uint64_t;

inline constexpr SimTime kNanosecond = 1;
inline constexpr SimTime kMicrosecond = 1'000;
inline constexpr SimTime kMillisecond = 1'000'000;
inline constexpr SimTime kSecond = 1'000'000'000;

constexpr SimTime microseconds(std::uint64_t us) { return us * kMicrosecond; }
constexpr SimTime milliseconds(std::uint64_t ms) { return ms * kMillisecond; }
constexpr SimTime seconds(std::uint64_t s) { return s * kSecond; }

/// Serialization delay of `bits` at `rate_bps`, rounded up to whole
/// nanoseconds. Exact whenever the rate divides 10^9 * bits.
__extension__ using Wide = unsigned __int128;

constexpr SimTime serialization_delay(std::uint64_t bits, std::uint64_t rate_bps) {
    const Wide num = static_cast<Wide>(bits) * kSecond;
    return static_cast<SimTime>((num + rate_bps - 1) / rate_bps);
}

/// "S.nnnnnnnnn" with exactly nine fractional digits.
std::string format_seconds(SimTime t);

}  // namespace soasim::sim
