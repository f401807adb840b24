#include "soasim/net/flow_table.hpp"

#include <algorithm>
#include <cstdio>

namespace soasim::net {

namespace {

bool precedes(const FlowRule& a, const FlowRule& b) {
    return a.priority != b.priority ? a.priority > b.priority : a.id < b.id;
}

}  // namespace

std::string MacAddress::to_string() const {
    char buf[18];
    std::snprintf(
        buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x",
        static_cast<unsigned>((value >> 40) & 0xFF), static_cast<unsigned>((value >> 32) & 0xFF),
        static_cast<unsigned>((value >> 24) & 0xFF), static_cast<unsigned>((value >> 16) & 0xFF),
        static_cast<unsigned>((value >> 8) & 0xFF), static_cast<unsigned>(value & 0xFF));
    return buf;
}

std::vector<PortId> FlowRule::output_ports() const {
    std::vector<PortId> ports;
    for (const auto& a : actions) {
        if (a.kind == FlowAction::Kind::Output) ports.push_back(a.port);
    }
    return ports;
}

std::string FlowRule::to_string() const {
    std::string s = "id=" + std::to_string(id) + " prio=" + std::to_string(priority) + " match[";
    if (match.dst_mac) s += " mac=" + match.dst_mac->to_string();
    if (match.dst_address) s += " ip=" + match.dst_address->to_string();
    if (match.dst_port) s += " port=" + std::to_string(*match.dst_port);
    if (match.in_port) s += " in=" + std::to_string(*match.in_port);
    s += " ] actions[";
    for (const auto& a : actions) {
        switch (a.kind) {
            case FlowAction::Kind::Output: s += " out:" + std::to_string(a.port); break;
            case FlowAction::Kind::PacketIn: s += " packet-in"; break;
            case FlowAction::Kind::Drop: s += " drop"; break;
        }
    }
    return s + " ]";
}

const char* to_string(FlowModOp op) {
    switch (op) {
        case FlowModOp::Add: return "add";
        case FlowModOp::Modify: return "modify";
        case FlowModOp::Remove: return "remove";
    }
    return "?";
}

void FlowTable::add(FlowRule rule) {
    remove(rule.id);
    const auto pos = std::lower_bound(rules_.begin(), rules_.end(), rule, precedes);
    rules_.insert(pos, std::move(rule));
}

bool FlowTable::modify(const FlowRule& rule) {
    auto it = std::find_if(rules_.begin(), rules_.end(),
                           [&](const FlowRule& r) { return r.id == rule.id; });
    if (it == rules_.end()) return false;
    if (it->priority == rule.priority) {
        *it = rule;
    } else {
        rules_.erase(it);
        add(rule);
    }
    return true;
}

bool FlowTable::remove(RuleId id) {
    auto it =
        std::find_if(rules_.begin(), rules_.end(), [&](const FlowRule& r) { return r.id == id; });
    if (it == rules_.end()) return false;
    rules_.erase(it);
    return true;
}

const FlowRule* FlowTable::lookup(const Frame& frame, PortId ingress) const {
    for (const auto& r : rules_) {
        if (r.match.matches(frame, ingress)) return &r;
    }
    return nullptr;
}

const FlowRule* FlowTable::find(RuleId id) const {
    for (const auto& r : rules_) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

}  // namespace soasim::net
