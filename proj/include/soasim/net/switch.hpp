#pragma once

#include <map>
#include <vector>

#include "soasim/net/flow_table.hpp"
#include "soasim/net/frame.hpp"
#include "soasim/sim/time.hpp"

namespace soasim::net {

enum class SwitchMode : std::uint8_t {
    Learning,  // plain Ethernet bridge with a MAC table
    OpenFlow,  // flow table programmed by a controller
};

struct ForwardResult {
    std::vector<PortId> egress;
    sim::SimTime egress_at{0};
    bool packet_in{false};
    bool flooded{false};
    bool dropped{false};
};

enum class FlowModResult : std::uint8_t { Applied, RemovedNonexistent, ModifiedNonexistent };

/// Store-and-forward switch with ports numbered 1..port_count.
class SwitchModel {
public:
    SwitchModel(SwitchId id, PortId port_count, SwitchMode mode, sim::SimTime forwarding_delay);

    [[nodiscard]] SwitchId id() const { return id_; }
    [[nodiscard]] PortId port_count() const { return port_count_; }
    [[nodiscard]] SwitchMode mode() const { return mode_; }
    [[nodiscard]] sim::SimTime forwarding_delay() const { return forwarding_delay_; }

    /// Decides what happens to a frame fully received on `ingress` at `now`.
    /// Egress and packet-in both happen at now + forwarding delay.
    ForwardResult forward(const Frame& frame, PortId ingress, sim::SimTime now);

    /// Applies a flow-mod immediately; callers schedule it at completion time.
    FlowModResult apply_flow_mod(const FlowRule& rule, FlowModOp op);

    [[nodiscard]] const FlowTable& flow_table() const { return table_; }
    FlowTable& flow_table() { return table_; }
    [[nodiscard]] const std::map<MacAddress, PortId>& mac_table() const { return macs_; }

    /// All ports except `ingress`, ascending.
    [[nodiscard]] std::vector<PortId> flood_ports(PortId ingress) const;

private:
    SwitchId id_;
    PortId port_count_;
    SwitchMode mode_;
    sim::SimTime forwarding_delay_;
    FlowTable table_;
    std::map<MacAddress, PortId> macs_;
};

}  // namespace soasim::net
