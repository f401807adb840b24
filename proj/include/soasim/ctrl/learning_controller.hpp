#pragma once

#include <map>
#include <tuple>

#include "soasim/ctrl/actions.hpp"
#include "soasim/ctrl/topology.hpp"

namespace soasim::ctrl {

/// How far a learned unicast destination is programmed on a packet-in.
enum class LearningScope : std::uint8_t {
    HopByHop,  // only the switch that raised the packet-in
    PathWide,  // every switch from there to the destination's host port
};

struct LearningControllerOptions {
    LearningScope scope{LearningScope::HopByHop};
    /// Install per-(destination MAC, in_port) flood rules for group traffic.
    bool flood_rules{true};
};

inline constexpr std::uint32_t kLearnedPriority = 10;
inline constexpr std::uint32_t kFloodPriority = 5;

/// SD-unaware reactive L2 application. Learns source MACs per switch from
/// packet-ins; never looks at payloads.
class LearningController {
public:
    explicit LearningController(const Topology& topology, LearningControllerOptions options = {})
        : topology_(&topology), options_(options) {}

    ControlActions handle_packet_in(const net::FramePtr& frame, Attachment ingress);

    /// Learned port of `mac` on `sw`, if any.
    [[nodiscard]] std::optional<PortId> learned_port(SwitchId sw, net::MacAddress mac) const;
    [[nodiscard]] const LearningControllerOptions& options() const { return options_; }

private:
    net::RuleId rule_id(SwitchId sw, net::MacAddress mac, PortId in_port);
    std::vector<PortId> flood_ports(SwitchId sw, PortId ingress) const;
    void program_path(SwitchId from, net::MacAddress dst, ControlActions& out);

    const Topology* topology_;
    LearningControllerOptions options_;
    std::map<std::pair<SwitchId, net::MacAddress>, PortId> macs_;
    // where each MAC sits at the edge (learned on a host port)
    std::map<net::MacAddress, Attachment> edges_;
    std::map<std::tuple<SwitchId, net::MacAddress, PortId>, net::RuleId> rule_ids_;
    std::map<SwitchId, net::RuleId> next_rule_id_;
};

}  // namespace soasim::ctrl
