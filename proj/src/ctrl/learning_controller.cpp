#include "soasim/ctrl/learning_controller.hpp"

namespace soasim::ctrl {

namespace {

constexpr net::RuleId kFirstLearnedRuleId = 1000;

net::FlowRule unicast_rule(net::RuleId id, net::MacAddress dst, PortId out) {
    net::FlowRule rule;
    rule.id = id;
    rule.priority = kLearnedPriority;
    rule.match.dst_mac = dst;
    rule.actions = {net::FlowAction::output(out)};
    return rule;
}

}  // namespace

std::optional<PortId> LearningController::learned_port(SwitchId sw, net::MacAddress mac) const {
    auto it = macs_.find({sw, mac});
    if (it == macs_.end()) return std::nullopt;
    return it->second;
}

net::RuleId LearningController::rule_id(SwitchId sw, net::MacAddress mac, PortId in_port) {
    auto [it, inserted] = rule_ids_.try_emplace({sw, mac, in_port}, 0);
    if (inserted) {
        auto& next = next_rule_id_.try_emplace(sw, kFirstLearnedRuleId).first->second;
        it->second = next++;
    }
    return it->second;
}

std::vector<PortId> LearningController::flood_ports(SwitchId sw, PortId ingress) const {
    std::vector<PortId> ports;
    for (PortId p = 1; p <= topology_->port_count(sw); ++p) {
        if (p != ingress) ports.push_back(p);
    }
    return ports;
}

ControlActions LearningController::handle_packet_in(const net::FramePtr& frame,
                                                    Attachment ingress) {
    const SwitchId sw = ingress.switch_id;
    macs_[{sw, frame->src_mac}] = ingress.port;
    if (topology_->is_host_port(ingress)) edges_[frame->src_mac] = ingress;

    ControlActions out;
    if (frame->dst_mac.is_group()) {
        auto ports = flood_ports(sw, ingress.port);
        if (options_.flood_rules) {
            net::FlowRule rule;
            rule.id = rule_id(sw, frame->dst_mac, ingress.port);
            rule.priority = kFloodPriority;
            rule.match.dst_mac = frame->dst_mac;
            rule.match.in_port = ingress.port;
            for (PortId p : ports) rule.actions.push_back(net::FlowAction::output(p));
            out.emplace_back(FlowMod{sw, std::move(rule), net::FlowModOp::Add});
        }
        out.emplace_back(PacketOut{sw, std::move(ports), frame});
        return out;
    }

    const auto port = learned_port(sw, frame->dst_mac);
    if (!port) {
        // unknown unicast: flood this frame only, nothing to install yet
        out.emplace_back(PacketOut{sw, flood_ports(sw, ingress.port), frame});
        return out;
    }
    if (*port == ingress.port) return out;

    out.emplace_back(FlowMod{sw,
                             unicast_rule(rule_id(sw, frame->dst_mac, 0), frame->dst_mac, *port),
                             net::FlowModOp::Add});
    if (options_.scope == LearningScope::PathWide) program_path(sw, frame->dst_mac, out);
    out.emplace_back(PacketOut{sw, {*port}, frame});
    return out;
}

void LearningController::program_path(SwitchId from, net::MacAddress dst, ControlActions& out) {
    auto edge = edges_.find(dst);
    if (edge == edges_.end()) return;
    const auto path = topology_->shortest_path(from, edge->second.switch_id);
    for (std::size_t i = 1; i < path.size(); ++i) {
        const SwitchId sw = path[i];
        const PortId port =
            i + 1 < path.size() ? topology_->port_towards(sw, path[i + 1]) : edge->second.port;
        macs_[{sw, dst}] = port;
        out.emplace_back(
            FlowMod{sw, unicast_rule(rule_id(sw, dst, 0), dst, port), net::FlowModOp::Add});
    }
}

}  // namespace soasim::ctrl
