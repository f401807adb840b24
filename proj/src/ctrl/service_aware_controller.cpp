#include "soasim/ctrl/service_aware_controller.hpp"

#include <algorithm>

namespace soasim::ctrl {

using sd::SdKind;
using sd::SdMessage;

namespace {

constexpr net::RuleId kFirstDynamicRuleId = 100;

sim::SimTime ttl_deadline(sim::SimTime now, std::uint32_t ttl_seconds) {
    return now + sim::seconds(ttl_seconds);
}

bool is_live(SubscriptionState s) { return s != SubscriptionState::Withdrawn; }

}  // namespace

const char* to_string(SubscriptionState s) {
    switch (s) {
        case SubscriptionState::Requested: return "requested";
        case SubscriptionState::Active: return "active";
        case SubscriptionState::Withdrawn: return "withdrawn";
    }
    return "?";
}

FlowSpec event_flow_for(const sd::ServiceIdentity& identity,
                        const sd::Endpoint& provider_endpoint) {
    const auto group =
        sd::Ipv4Address::from_octets(239, static_cast<std::uint8_t>(identity.service_id >> 8),
                                     static_cast<std::uint8_t>(identity.service_id),
                                     static_cast<std::uint8_t>(identity.instance_id));
    return FlowSpec{sd::Endpoint{group, provider_endpoint.port, provider_endpoint.transport}};
}

net::FlowRule sd_punt_rule() {
    net::FlowRule rule;
    rule.id = kPuntRuleId;
    rule.priority = kPuntPriority;
    rule.match.dst_port = sd::kSdPort;
    rule.actions = {net::FlowAction::packet_in()};
    return rule;
}

ControlActions ServiceAwareController::handle_sd_message(const SdMessage& msg, Attachment ingress,
                                                         sim::SimTime now) {
    if (!topology_->attachment_of(msg.sender.address) &&
        msg.sender.address != kControllerSdEndpoint.address) {
        throw UnattachedEndpointError("SD message from unattached endpoint " +
                                      msg.sender.to_string());
    }
    expire_finds(now);
    if (msg.is_withdrawal()) return handle_withdrawal(msg, ingress, now);

    switch (msg.kind) {
        case SdKind::Find: return on_find(msg, ingress, now);
        case SdKind::Offer: return on_offer(msg, ingress, now);
        case SdKind::Subscribe: return on_subscribe(msg, now);
        case SdKind::SubscribeAck: return on_subscribe_ack(msg);
    }
    return {};
}

ControlActions ServiceAwareController::on_find(const SdMessage& msg, Attachment ingress,
                                               sim::SimTime now) {
    const auto known = lookup_service(msg.identity, now);
    if (known.empty()) {
        find_cache_.push_back(FindCacheEntry{msg.identity, msg.sender, ingress, now,
                                             ttl_deadline(now, msg.ttl_seconds)});
        return multicast(msg, ingress);
    }
    ControlActions out;
    for (const auto& entry : known) {
        out.emplace_back(SendSd{msg.sender, entry.offer});
    }
    return out;
}

ControlActions ServiceAwareController::on_offer(const SdMessage& msg, Attachment ingress,
                                                sim::SimTime now) {
    const ServiceKey key{msg.identity.service_id, msg.identity.instance_id};
    registry_[key] = ServiceRegistryEntry{msg.identity, *msg.provider_endpoint, ingress,
                                          ttl_deadline(now, msg.ttl_seconds), msg};

    ControlActions out;
    std::erase_if(find_cache_, [&](const FindCacheEntry& f) {
        if (!sd::matches(f.query, msg.identity)) return false;
        out.emplace_back(SendSd{f.requester, msg});
        return true;
    });
    if (out.empty()) return multicast(msg, ingress);
    return out;
}

ControlActions ServiceAwareController::on_subscribe(const SdMessage& msg, sim::SimTime now) {
    const ServiceKey key{msg.identity.service_id, msg.identity.instance_id};
    auto it = registry_.find(key);
    const bool known = it != registry_.end() && it->second.expiry_time > now &&
                       sd::matches(msg.identity, it->second.identity);
    if (!known) {
        SdMessage nack;
        nack.kind = SdKind::SubscribeAck;
        nack.identity = msg.identity;
        nack.ttl_seconds = 0;
        nack.consumer_endpoint = msg.consumer_endpoint;
        nack.sender = kControllerSdEndpoint;
        nack.session_id = msg.session_id;
        return {SendSd{msg.sender, nack}};
    }

    const auto& entry = it->second;
    const SubscriptionKey sub_key{key.first, key.second, *msg.consumer_endpoint};
    auto rec = subscriptions_.find(sub_key);
    if (rec == subscriptions_.end() || rec->second.state == SubscriptionState::Withdrawn) {
        subscriptions_[sub_key] = SubscriptionRecord{entry.identity,
                                                     *msg.consumer_endpoint,
                                                     msg.sender,
                                                     entry.provider_endpoint,
                                                     entry.offer.sender,
                                                     entry.attachment,
                                                     SubscriptionState::Requested,
                                                     {}};
    }
    return {SendSd{entry.offer.sender, msg}};
}

ControlActions ServiceAwareController::on_subscribe_ack(const SdMessage& msg) {
    const SubscriptionKey key{msg.identity.service_id, msg.identity.instance_id,
                              *msg.consumer_endpoint};
    auto it = subscriptions_.find(key);
    if (it == subscriptions_.end() || !is_live(it->second.state)) return {};

    auto& record = it->second;
    ControlActions out;
    if (msg.is_nack()) {
        out = withdraw_subscription(record);
    } else if (record.state == SubscriptionState::Requested) {
        const auto subscriber_at = topology_->attachment_of(record.subscriber_endpoint.address);
        if (!subscriber_at) {
            throw UnattachedEndpointError("subscriber " + record.subscriber_endpoint.to_string() +
                                          " is not attached");
        }
        record.state = SubscriptionState::Active;
        const auto mods = install_path(record.provider_attachment, *subscriber_at,
                                       event_flow_for(record.identity, record.provider_endpoint),
                                       &record.installed_rules);
        out.assign(mods.begin(), mods.end());
    }
    // Rules go out first; the channel is FIFO so they land before the ack.
    out.emplace_back(SendSd{record.subscriber_sd, msg});
    return out;
}

ControlActions ServiceAwareController::handle_withdrawal(const SdMessage& msg, Attachment ingress,
                                                         sim::SimTime now) {
    (void)now;
    const ServiceKey key{msg.identity.service_id, msg.identity.instance_id};
    ControlActions out;

    if (msg.kind == SdKind::Offer) {
        registry_.erase(key);
        std::map<FlowSpec, std::set<SwitchId>> touched;
        for (auto& [k, record] : subscriptions_) {
            if (std::get<0>(k) != key.first || std::get<1>(k) != key.second) continue;
            if (!is_live(record.state)) continue;
            record.state = SubscriptionState::Withdrawn;
            const auto flow = event_flow_for(record.identity, record.provider_endpoint);
            release_hops(flow, record.installed_rules, touched[flow]);
            record.installed_rules.clear();
        }
        for (const auto& [flow, switches] : touched) emit_tree_updates(flow, switches, out);
        auto mc = multicast(msg, ingress);
        out.insert(out.end(), mc.begin(), mc.end());
        return out;
    }

    if (msg.kind == SdKind::Subscribe && msg.consumer_endpoint) {
        std::optional<sd::Endpoint> provider_sd;
        if (auto reg = registry_.find(key); reg != registry_.end()) {
            provider_sd = reg->second.offer.sender;
        }
        const SubscriptionKey sub_key{key.first, key.second, *msg.consumer_endpoint};
        if (auto it = subscriptions_.find(sub_key); it != subscriptions_.end()) {
            provider_sd = it->second.provider_sd;
            if (is_live(it->second.state)) out = withdraw_subscription(it->second);
        }
        if (provider_sd) out.emplace_back(SendSd{*provider_sd, msg});
    }
    return out;
}

ControlActions ServiceAwareController::withdraw_subscription(SubscriptionRecord& record) {
    ControlActions out;
    record.state = SubscriptionState::Withdrawn;
    if (record.installed_rules.empty()) return out;
    const auto flow = event_flow_for(record.identity, record.provider_endpoint);
    std::set<SwitchId> touched;
    release_hops(flow, record.installed_rules, touched);
    record.installed_rules.clear();
    emit_tree_updates(flow, touched, out);
    return out;
}

std::vector<FlowMod> ServiceAwareController::install_path(Attachment provider_at,
                                                          Attachment subscriber_at,
                                                          const FlowSpec& flow,
                                                          std::vector<InstalledHop>* hops) {
    const auto path = topology_->shortest_path(provider_at.switch_id, subscriber_at.switch_id);
    auto& tree = trees_[flow];
    std::vector<FlowMod> mods;
    mods.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        const SwitchId sw = path[i];
        const PortId out_port =
            i + 1 < path.size() ? topology_->port_towards(sw, path[i + 1]) : subscriber_at.port;
        auto it = tree.find(sw);
        net::FlowModOp op = net::FlowModOp::Modify;
        if (it == tree.end()) {
            auto& next = next_rule_id_.try_emplace(sw, kFirstDynamicRuleId).first->second;
            it = tree.emplace(sw, TreeHop{next++, {}}).first;
            op = net::FlowModOp::Add;
        }
        ++it->second.port_refs[out_port];
        mods.push_back(FlowMod{sw, rule_for(flow, it->second.rule_id, it->second), op});
        if (hops != nullptr) hops->push_back(InstalledHop{sw, it->second.rule_id, out_port});
    }
    return mods;
}

void ServiceAwareController::release_hops(const FlowSpec& flow,
                                          const std::vector<InstalledHop>& hops,
                                          std::set<SwitchId>& touched) {
    auto tree = trees_.find(flow);
    if (tree == trees_.end()) return;
    for (const auto& hop : hops) {
        auto node = tree->second.find(hop.switch_id);
        if (node == tree->second.end()) continue;
        auto ref = node->second.port_refs.find(hop.out_port);
        if (ref != node->second.port_refs.end() && --ref->second <= 0) {
            node->second.port_refs.erase(ref);
        }
        touched.insert(hop.switch_id);
    }
}

void ServiceAwareController::emit_tree_updates(const FlowSpec& flow,
                                               const std::set<SwitchId>& touched,
                                               ControlActions& out) {
    auto tree = trees_.find(flow);
    if (tree == trees_.end()) return;
    for (SwitchId sw : touched) {
        auto node = tree->second.find(sw);
        if (node == tree->second.end()) continue;
        const auto rule = rule_for(flow, node->second.rule_id, node->second);
        if (node->second.port_refs.empty()) {
            out.emplace_back(FlowMod{sw, rule, net::FlowModOp::Remove});
            tree->second.erase(node);
        } else {
            out.emplace_back(FlowMod{sw, rule, net::FlowModOp::Modify});
        }
    }
    if (tree->second.empty()) trees_.erase(tree);
}

net::FlowRule ServiceAwareController::rule_for(const FlowSpec& flow, net::RuleId id,
                                               const TreeHop& hop) const {
    net::FlowRule rule;
    rule.id = id;
    rule.priority = kPathPriority;
    rule.match.dst_address = flow.destination.address;
    rule.match.dst_port = flow.destination.port;
    for (const auto& [port, refs] : hop.port_refs) {
        rule.actions.push_back(net::FlowAction::output(port));
    }
    return rule;
}

std::vector<ServiceRegistryEntry> ServiceAwareController::lookup_service(
    const sd::ServiceIdentity& query, sim::SimTime now) const {
    std::vector<ServiceRegistryEntry> out;
    for (const auto& [key, entry] : registry_) {
        if (entry.expiry_time > now && sd::matches(query, entry.identity)) out.push_back(entry);
    }
    return out;
}

std::size_t ServiceAwareController::installed_rule_count() const {
    std::size_t n = 0;
    for (const auto& [flow, tree] : trees_) n += tree.size();
    return n;
}

ControlActions ServiceAwareController::multicast(const SdMessage& msg, Attachment ingress) const {
    ControlActions out;
    net::FramePtr frame = topology_->sd_frame(msg, sd::kSdMulticast);
    for (SwitchId sw = 1; sw <= topology_->switch_count(); ++sw) {
        auto ports = topology_->host_ports(sw);
        if (sw == ingress.switch_id) std::erase(ports, ingress.port);
        if (!ports.empty()) out.emplace_back(PacketOut{sw, std::move(ports), frame});
    }
    return out;
}

void ServiceAwareController::expire_finds(sim::SimTime now) {
    std::erase_if(find_cache_, [now](const FindCacheEntry& f) { return f.deadline <= now; });
}

}  // namespace soasim::ctrl
