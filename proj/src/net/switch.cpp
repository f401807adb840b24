#include "soasim/net/switch.hpp"

namespace soasim::net {

SwitchModel::SwitchModel(SwitchId id, PortId port_count, SwitchMode mode,
                         sim::SimTime forwarding_delay)
    : id_(id), port_count_(port_count), mode_(mode), forwarding_delay_(forwarding_delay) {}

std::vector<PortId> SwitchModel::flood_ports(PortId ingress) const {
    std::vector<PortId> ports;
    ports.reserve(port_count_);
    for (PortId p = 1; p <= port_count_; ++p) {
        if (p != ingress) ports.push_back(p);
    }
    return ports;
}

ForwardResult SwitchModel::forward(const Frame& frame, PortId ingress, sim::SimTime now) {
    ForwardResult result;
    result.egress_at = now + forwarding_delay_;

    if (mode_ == SwitchMode::Learning) {
        if (!frame.src_mac.is_group()) macs_[frame.src_mac] = ingress;
        if (!frame.dst_mac.is_group()) {
            if (auto it = macs_.find(frame.dst_mac); it != macs_.end()) {
                // Destination behind the ingress port: filter.
                if (it->second == ingress) {
                    result.dropped = true;
                } else {
                    result.egress.push_back(it->second);
                }
                return result;
            }
        }
        result.egress = flood_ports(ingress);
        result.flooded = true;
        return result;
    }

    const FlowRule* rule = table_.lookup(frame, ingress);
    if (rule == nullptr) {
        result.packet_in = true;
        return result;
    }
    for (const auto& a : rule->actions) {
        switch (a.kind) {
            case FlowAction::Kind::Output:
                if (a.port != ingress) result.egress.push_back(a.port);
                break;
            case FlowAction::Kind::PacketIn: result.packet_in = true; break;
            case FlowAction::Kind::Drop:
                result.dropped = true;
                result.egress.clear();
                return result;
        }
    }
    if (result.egress.empty() && !result.packet_in) result.dropped = true;
    return result;
}

FlowModResult SwitchModel::apply_flow_mod(const FlowRule& rule, FlowModOp op) {
    switch (op) {
        case FlowModOp::Add: table_.add(rule); return FlowModResult::Applied;
        case FlowModOp::Modify:
            if (table_.modify(rule)) return FlowModResult::Applied;
            // OpenFlow semantics: modify of a missing rule behaves like add.
            table_.add(rule);
            return FlowModResult::ModifiedNonexistent;
        case FlowModOp::Remove:
            return table_.remove(rule.id) ? FlowModResult::Applied
                                          : FlowModResult::RemovedNonexistent;
    }
    return FlowModResult::Applied;
}

}  // namespace soasim::net
