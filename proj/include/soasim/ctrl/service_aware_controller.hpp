#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "soasim/ctrl/actions.hpp"
#include "soasim/ctrl/topology.hpp"
#include "soasim/sd/message.hpp"
#include "soasim/sim/time.hpp"

namespace soasim::ctrl {

class UnattachedEndpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ServiceRegistryEntry {
    sd::ServiceIdentity identity;
    sd::Endpoint provider_endpoint;
    Attachment attachment;
    sim::SimTime expiry_time{0};
    /// Last offer seen; re-emitted when answering finds.
    sd::SdMessage offer;
};

struct FindCacheEntry {
    sd::ServiceIdentity query;
    sd::Endpoint requester;
    Attachment requester_attachment;
    sim::SimTime issued_at{0};
    sim::SimTime deadline{0};
};

enum class SubscriptionState : std::uint8_t { Requested, Active, Withdrawn };

[[nodiscard]] const char* to_string(SubscriptionState s);

struct InstalledHop {
    SwitchId switch_id{0};
    net::RuleId rule_id{0};
    PortId out_port{0};

    bool operator==(const InstalledHop&) const = default;
};

struct SubscriptionRecord {
    sd::ServiceIdentity identity;
    sd::Endpoint subscriber_endpoint;
    sd::Endpoint subscriber_sd;
    sd::Endpoint provider_endpoint;
    sd::Endpoint provider_sd;
    Attachment provider_attachment;
    SubscriptionState state{SubscriptionState::Requested};
    std::vector<InstalledHop> installed_rules;
};

/// Destination of a published event stream; the unit a data-path rule matches.
struct FlowSpec {
    sd::Endpoint destination;

    auto operator<=>(const FlowSpec&) const = default;
};

/// Event-stream destination for a service instance: 239.<service>.<instance
/// low byte> on the provider's port.
[[nodiscard]] FlowSpec event_flow_for(const sd::ServiceIdentity& identity,
                                      const sd::Endpoint& provider_endpoint);

/// Static highest-priority rule that punts every SD datagram to the controller.
[[nodiscard]] net::FlowRule sd_punt_rule();

inline constexpr net::RuleId kPuntRuleId = 1;
inline constexpr std::uint32_t kPuntPriority = 0xFFFF;
inline constexpr std::uint32_t kPathPriority = 100;

/// Controller address used as the source of controller-originated messages.
inline constexpr sd::Endpoint kControllerSdEndpoint{sd::Ipv4Address::from_octets(10, 255, 255, 254),
                                                    sd::kSdPort, sd::Transport::Udp};

/// SOME/IP-aware controller application. Keeps the service registry, find
/// cache and subscription registry; reacts to punted SD messages and programs
/// publisher-to-subscriber data paths.
class ServiceAwareController {
public:
    explicit ServiceAwareController(const Topology& topology) : topology_(&topology) {}

    /// Dispatches one decoded SD message punted at `ingress`.
    /// Throws UnattachedEndpointError if the sender is not in the topology.
    ControlActions handle_sd_message(const sd::SdMessage& msg, Attachment ingress,
                                     sim::SimTime now);

    /// Offer or Subscribe with ttl 0.
    ControlActions handle_withdrawal(const sd::SdMessage& msg, Attachment ingress,
                                     sim::SimTime now);

    /// Adds the provider-to-subscriber branch of `flow` and returns the
    /// flow-mods. Switches already carrying the flow get a Modify with their
    /// full output set; others get an Add. Throws NoPathError.
    std::vector<FlowMod> install_path(Attachment provider_at, Attachment subscriber_at,
                                      const FlowSpec& flow,
                                      std::vector<InstalledHop>* hops = nullptr);

    /// Non-expired registry entries matching `query`, by (service, instance).
    [[nodiscard]] std::vector<ServiceRegistryEntry> lookup_service(const sd::ServiceIdentity& query,
                                                                   sim::SimTime now) const;

    using ServiceKey = std::pair<std::uint16_t, std::uint16_t>;
    using SubscriptionKey = std::tuple<std::uint16_t, std::uint16_t, sd::Endpoint>;

    [[nodiscard]] const std::map<ServiceKey, ServiceRegistryEntry>& registry() const {
        return registry_;
    }
    [[nodiscard]] const std::vector<FindCacheEntry>& find_cache() const { return find_cache_; }
    [[nodiscard]] const std::map<SubscriptionKey, SubscriptionRecord>& subscriptions() const {
        return subscriptions_;
    }
    /// Dynamic rules currently believed installed, per switch.
    [[nodiscard]] std::size_t installed_rule_count() const;

private:
    struct TreeHop {
        net::RuleId rule_id{0};
        std::map<PortId, int> port_refs;
    };

    ControlActions on_find(const sd::SdMessage& msg, Attachment ingress, sim::SimTime now);
    ControlActions on_offer(const sd::SdMessage& msg, Attachment ingress, sim::SimTime now);
    ControlActions on_subscribe(const sd::SdMessage& msg, sim::SimTime now);
    ControlActions on_subscribe_ack(const sd::SdMessage& msg);

    ControlActions multicast(const sd::SdMessage& msg, Attachment ingress) const;
    void release_hops(const FlowSpec& flow, const std::vector<InstalledHop>& hops,
                      std::set<SwitchId>& touched);
    void emit_tree_updates(const FlowSpec& flow, const std::set<SwitchId>& touched,
                           ControlActions& out);
    ControlActions withdraw_subscription(SubscriptionRecord& record);
    net::FlowRule rule_for(const FlowSpec& flow, net::RuleId id, const TreeHop& hop) const;
    void expire_finds(sim::SimTime now);

    const Topology* topology_;
    std::map<ServiceKey, ServiceRegistryEntry> registry_;
    std::vector<FindCacheEntry> find_cache_;
    std::map<SubscriptionKey, SubscriptionRecord> subscriptions_;
    std::map<FlowSpec, std::map<SwitchId, TreeHop>> trees_;
    std::map<SwitchId, net::RuleId> next_rule_id_;
};

}  // namespace soasim::ctrl
