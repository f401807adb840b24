#pragma once

#include <cstdint>

#include "soasim/sim/time.hpp"

namespace soasim::net {

/// One direction of a point-to-point link: frames serialize one at a time
/// in FIFO order, then propagate.
class TxQueue {
public:
    TxQueue() = default;
    TxQueue(std::uint64_t rate_bps, sim::SimTime propagation)
        : rate_bps_(rate_bps), propagation_(propagation) {}

    /// Reserves the transmitter for `bits` starting no earlier than `now`;
    /// returns the time the last bit arrives at the far end. Calls must come
    /// with non-decreasing `now`.
    sim::SimTime enqueue(sim::SimTime now, std::uint64_t bits) {
        const sim::SimTime start = now > busy_until_ ? now : busy_until_;
        busy_until_ = start + sim::serialization_delay(bits, rate_bps_);
        return busy_until_ + propagation_;
    }

    [[nodiscard]] sim::SimTime busy_until() const { return busy_until_; }
    [[nodiscard]] std::uint64_t rate_bps() const { return rate_bps_; }
    [[nodiscard]] sim::SimTime propagation() const { return propagation_; }

private:
    std::uint64_t rate_bps_{1'000'000'000};
    sim::SimTime propagation_{0};
    sim::SimTime busy_until_{0};
};

}  // namespace soasim::net
