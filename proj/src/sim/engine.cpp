#include "soasim/sim/engine.hpp"

#include <cstdio>

namespace soasim::sim {

std::string format_seconds(SimTime t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu.%09llu", static_cast<unsigned long long>(t / kSecond),
                  static_cast<unsigned long long>(t % kSecond));
    return buf;
}

TimeTravelError::TimeTravelError(SimTime requested, SimTime now)
    : std::logic_error("event scheduled at " + format_seconds(requested) +
                       " s, before current time " + format_seconds(now) + " s") {}

void Simulator::schedule(SimTime at, Action action) {
    if (at < now_) throw TimeTravelError(at, now_);
    queue_.push(Entry{at, next_seq_++, std::move(action)});
}

bool Simulator::step() {
    if (queue_.empty()) return false;
    // priority_queue::top is const; the action is moved out before pop.
    Entry e = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    now_ = e.time;
    ++metrics_.events_processed;
    e.action();
    return true;
}

RunMetrics Simulator::run_until_quiescent(SimTime limit, const std::function<bool()>& goal) {
    while (!queue_.empty() && queue_.top().time <= limit) {
        step();
    }
    metrics_.quiescent = queue_.empty();
    metrics_.end_time = now_;
    metrics_.setup_time = metrics_.last_ack_time >= metrics_.first_event_time
                              ? metrics_.last_ack_time - metrics_.first_event_time
                              : 0;
    if (goal && !goal()) {
        throw TimeoutError(metrics_.quiescent ? "run quiesced with unfinished subscriptions"
                                              : "time limit reached before quiescence",
                           metrics_);
    }
    return metrics_;
}

void Simulator::mark_first_activity(SimTime t) {
    if (!saw_first_activity_ || t < metrics_.first_event_time) {
        metrics_.first_event_time = t;
        saw_first_activity_ = true;
    }
}

void Simulator::mark_ack(SimTime t) {
    ++metrics_.counters.positive_acks;
    if (t > metrics_.last_ack_time) metrics_.last_ack_time = t;
}

}  // namespace soasim::sim
