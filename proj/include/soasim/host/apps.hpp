#pragma once

#include <optional>
#include <set>
#include <vector>

#include "soasim/sd/message.hpp"
#include "soasim/sim/time.hpp"

namespace soasim::host {

/// An SD message a host hands to its network stack.
struct Outgoing {
    sd::Endpoint to;
    sd::SdMessage message;

    bool operator==(const Outgoing&) const = default;
};

/// Publisher side: offers one service instance and acknowledges subscribers.
class ProducerApp {
public:
    ProducerApp(sd::ServiceIdentity identity, sd::Endpoint service_endpoint,
                sd::Endpoint sd_endpoint, std::uint32_t offer_ttl = 3);

    /// Offer to the SD group on service activation.
    Outgoing activate(sim::SimTime now);
    std::optional<Outgoing> on_sd_message(const sd::SdMessage& msg, sim::SimTime now);
    /// Offer with ttl 0 to the SD group.
    Outgoing withdraw();

    [[nodiscard]] const sd::ServiceIdentity& identity() const { return identity_; }
    [[nodiscard]] const sd::Endpoint& sd_endpoint() const { return sd_endpoint_; }
    [[nodiscard]] const std::set<sd::Endpoint>& subscribers() const { return subscribers_; }

private:
    sd::SdMessage make(sd::SdKind kind, std::uint32_t ttl);

    sd::ServiceIdentity identity_;
    sd::Endpoint service_endpoint_;
    sd::Endpoint sd_endpoint_;
    std::uint32_t offer_ttl_;
    std::uint16_t session_{0};
    std::set<sd::Endpoint> subscribers_;
};

enum class QueryState : std::uint8_t { Idle, Finding, Subscribing, Subscribed, Nacked };

[[nodiscard]] const char* to_string(QueryState s);

/// Subscriber side: one find per wanted query, then one subscribe per
/// offered instance.
class ConsumerApp {
public:
    ConsumerApp(std::vector<sd::ServiceIdentity> wanted, sd::Endpoint sd_endpoint,
                sd::Endpoint event_endpoint, std::uint32_t find_ttl = 3,
                std::uint32_t subscribe_ttl = 3);

    std::vector<Outgoing> start(sim::SimTime now);
    std::optional<Outgoing> on_sd_message(const sd::SdMessage& msg, sim::SimTime now);

    [[nodiscard]] const std::vector<sd::ServiceIdentity>& wanted() const { return wanted_; }
    [[nodiscard]] QueryState state(std::size_t query) const { return states_.at(query); }
    [[nodiscard]] bool all_subscribed() const;
    /// (service, instance) pairs with a delivered positive ack.
    [[nodiscard]] const std::set<std::pair<std::uint16_t, std::uint16_t>>& subscribed() const {
        return subscribed_;
    }
    /// Time of the last positive ack, if any.
    [[nodiscard]] std::optional<sim::SimTime> completed_at() const { return completed_at_; }
    [[nodiscard]] std::uint64_t subscribes_sent() const { return subscribes_sent_; }

private:
    std::optional<std::size_t> query_for(const sd::ServiceIdentity& id) const;

    std::vector<sd::ServiceIdentity> wanted_;
    sd::Endpoint sd_endpoint_;
    sd::Endpoint event_endpoint_;
    std::uint32_t find_ttl_;
    std::uint32_t subscribe_ttl_;
    std::uint16_t session_{0};
    std::vector<QueryState> states_;
    std::set<std::pair<std::uint16_t, std::uint16_t>> requested_;
    std::set<std::pair<std::uint16_t, std::uint16_t>> subscribed_;
    std::optional<sim::SimTime> completed_at_;
    std::uint64_t subscribes_sent_{0};
};

}  // namespace soasim::host
