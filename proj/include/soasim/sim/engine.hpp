#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "soasim/sim/time.hpp"

namespace soasim::sim {

class TimeTravelError : public std::logic_error {
public:
    TimeTravelError(SimTime requested, SimTime now);
};

struct Counters {
    std::uint64_t packet_ins{0};
    std::uint64_t flow_mods{0};
    std::uint64_t packet_outs{0};
    std::uint64_t frames_sent{0};
    std::uint64_t frames_received{0};
    std::uint64_t frames_dropped{0};
    std::uint64_t floods{0};
    std::uint64_t malformed{0};
    std::uint64_t positive_acks{0};
    std::uint64_t negative_acks{0};

    bool operator==(const Counters&) const = default;
};

/// Setup-time metric for one run. `setup_time` runs from the first producer
/// activity to delivery of the last positive SubscribeAck.
struct RunMetrics {
    SimTime setup_time{0};
    SimTime first_event_time{0};
    SimTime last_ack_time{0};
    SimTime end_time{0};
    std::uint64_t events_processed{0};
    bool quiescent{false};
    Counters counters;

    bool operator==(const RunMetrics&) const = default;
};

/// Raised when a run stops without reaching its completion goal.
class TimeoutError : public std::runtime_error {
public:
    TimeoutError(const std::string& what, RunMetrics partial)
        : std::runtime_error(what), partial_(partial) {}
    [[nodiscard]] const RunMetrics& partial() const { return partial_; }

private:
    RunMetrics partial_;
};

/// Single-threaded discrete-event core. Events run in (time, seq) order,
/// seq being the insertion counter, so equal-time events run FIFO.
class Simulator {
public:
    using Action = std::function<void()>;

    [[nodiscard]] SimTime now() const { return now_; }

    void schedule(SimTime at, Action action);
    void schedule_in(SimTime delay, Action action) { schedule(now_ + delay, std::move(action)); }

    [[nodiscard]] bool empty() const { return queue_.empty(); }
    [[nodiscard]] std::size_t pending() const { return queue_.size(); }

    /// Pops and runs one event; false if the queue is empty.
    bool step();

    /// Runs until the queue drains or the next event lies beyond `limit`.
    /// Throws TimeoutError unless `goal` holds afterwards.
    RunMetrics run_until_quiescent(SimTime limit, const std::function<bool()>& goal);

    Counters& counters() { return metrics_.counters; }
    [[nodiscard]] const RunMetrics& metrics() const { return metrics_; }

    void mark_first_activity(SimTime t);
    void mark_ack(SimTime t);

private:
    struct Entry {
        SimTime time;
        std::uint64_t seq;
        Action action;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    SimTime now_{0};
    std::uint64_t next_seq_{0};
    bool saw_first_activity_{false};
    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
    RunMetrics metrics_;
};

}  // namespace soasim::sim
