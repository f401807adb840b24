#pragma once

#include <string>
#include <variant>
#include <vector>

#include "soasim/net/flow_table.hpp"
#include "soasim/net/frame.hpp"
#include "soasim/sd/message.hpp"

namespace soasim::ctrl {

/// Emit `frame` on `ports` of switch `switch_id`, bypassing its flow table.
struct PacketOut {
    net::SwitchId switch_id{0};
    std::vector<net::PortId> ports;
    net::FramePtr frame;

    bool operator==(const PacketOut& o) const {
        return switch_id == o.switch_id && ports == o.ports &&
               (frame == o.frame || (frame && o.frame && *frame == *o.frame));
    }
};

struct FlowMod {
    net::SwitchId switch_id{0};
    net::FlowRule rule;
    net::FlowModOp op{net::FlowModOp::Add};

    bool operator==(const FlowMod&) const = default;
};

/// Deliver an SD message to a unicast endpoint; the network realizes it as a
/// packet-out on the endpoint's attachment port.
struct SendSd {
    sd::Endpoint to;
    sd::SdMessage message;

    bool operator==(const SendSd&) const = default;
};

using ControlAction = std::variant<PacketOut, FlowMod, SendSd>;
using ControlActions = std::vector<ControlAction>;

/// "action switch detail" (no timestamp), as written to traces.
[[nodiscard]] std::string describe(const ControlAction& action);

}  // namespace soasim::ctrl
