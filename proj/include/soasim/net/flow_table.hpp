#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soasim/net/frame.hpp"

namespace soasim::net {

using RuleId = std::uint32_t;

struct FlowMatch {
    std::optional<MacAddress> dst_mac;
    std::optional<sd::Ipv4Address> dst_address;
    std::optional<std::uint16_t> dst_port;
    std::optional<PortId> in_port;

    [[nodiscard]] bool matches(const Frame& frame, PortId ingress) const {
        return (!dst_mac || *dst_mac == frame.dst_mac) &&
               (!dst_address || *dst_address == frame.dst.address) &&
               (!dst_port || *dst_port == frame.dst.port) && (!in_port || *in_port == ingress);
    }

    bool operator==(const FlowMatch&) const = default;
};

struct FlowAction {
    enum class Kind : std::uint8_t { Output, PacketIn, Drop };
    Kind kind{Kind::Output};
    PortId port{0};

    static FlowAction output(PortId p) { return {Kind::Output, p}; }
    static FlowAction packet_in() { return {Kind::PacketIn, 0}; }
    static FlowAction drop() { return {Kind::Drop, 0}; }

    bool operator==(const FlowAction&) const = default;
};

struct FlowRule {
    RuleId id{0};
    std::uint32_t priority{0};
    FlowMatch match;
    std::vector<FlowAction> actions;

    [[nodiscard]] std::vector<PortId> output_ports() const;
    [[nodiscard]] std::string to_string() const;

    bool operator==(const FlowRule&) const = default;
};

enum class FlowModOp : std::uint8_t { Add, Modify, Remove };

[[nodiscard]] const char* to_string(FlowModOp op);

/// Rules kept ordered by (priority desc, id asc); lookup returns the first
/// match in that order.
class FlowTable {
public:
    /// Adds or overwrites the rule with the same id.
    void add(FlowRule rule);
    /// Replaces actions of an existing rule; false if the id is unknown.
    bool modify(const FlowRule& rule);
    /// False if the id is unknown.
    bool remove(RuleId id);

    [[nodiscard]] const FlowRule* lookup(const Frame& frame, PortId ingress) const;
    [[nodiscard]] const FlowRule* find(RuleId id) const;
    [[nodiscard]] const std::vector<FlowRule>& rules() const { return rules_; }
    [[nodiscard]] std::size_t size() const { return rules_.size(); }

private:
    std::vector<FlowRule> rules_;
};

}  // namespace soasim::net
