#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "soasim/net/frame.hpp"
#include "soasim/sim/time.hpp"

namespace soasim::ctrl {

using net::Attachment;
using net::PortId;
using net::SwitchId;

/// Source MAC for frames the controller originates.
inline constexpr net::MacAddress kControllerMac{0x02FFFFFFFFFEULL};

class NoPathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HostInfo {
    std::string name;
    sd::Ipv4Address address;
    net::MacAddress mac;
    Attachment attachment;
};

struct SwitchLink {
    Attachment a;
    Attachment b;
};

/// Switches, inter-switch links and host attachments. Switch ids start at 1;
/// each switch numbers its ports from 1 in the order they are allocated.
class Topology {
public:
    explicit Topology(std::uint64_t link_rate_bps = 1'000'000'000, sim::SimTime propagation = 0)
        : link_rate_bps_(link_rate_bps), propagation_(propagation) {}

    SwitchId add_switch();
    /// Connects two switches with a new port on each.
    SwitchLink connect(SwitchId a, SwitchId b);
    /// Attaches a host on a new port of `sw`.
    const HostInfo& attach_host(std::string name, sd::Ipv4Address address, net::MacAddress mac,
                                SwitchId sw);

    [[nodiscard]] std::size_t switch_count() const { return ports_.size(); }
    [[nodiscard]] PortId port_count(SwitchId sw) const;
    [[nodiscard]] const std::vector<SwitchLink>& links() const { return links_; }
    [[nodiscard]] const std::vector<HostInfo>& hosts() const { return hosts_; }
    [[nodiscard]] std::uint64_t link_rate_bps() const { return link_rate_bps_; }
    [[nodiscard]] sim::SimTime propagation() const { return propagation_; }

    [[nodiscard]] const HostInfo* host_by_address(sd::Ipv4Address address) const;
    [[nodiscard]] std::optional<Attachment> attachment_of(sd::Ipv4Address address) const;
    [[nodiscard]] bool is_host_port(Attachment at) const;
    /// Host-facing ports of `sw`, ascending.
    [[nodiscard]] std::vector<PortId> host_ports(SwitchId sw) const;
    /// Peer of an inter-switch port, if `at` is one.
    [[nodiscard]] std::optional<Attachment> peer_of(Attachment at) const;

    /// Shortest switch sequence from `from` to `to` by hop count; among
    /// equal-length paths the lexicographically smallest id sequence wins.
    /// Throws NoPathError.
    [[nodiscard]] std::vector<SwitchId> shortest_path(SwitchId from, SwitchId to) const;
    /// Port on `sw` leading to neighbouring switch `next`.
    [[nodiscard]] PortId port_towards(SwitchId sw, SwitchId next) const;

    [[nodiscard]] bool is_connected() const;

    /// Builds the frame carrying `msg` from its sender to `to` (unicast or
    /// the SD group). Throws std::out_of_range for an unknown unicast target.
    [[nodiscard]] net::FramePtr sd_frame(const sd::SdMessage& msg, const sd::Endpoint& to) const;

private:
    std::uint64_t link_rate_bps_;
    sim::SimTime propagation_;
    std::vector<PortId> ports_;  // allocated port count, index = id - 1
    std::vector<SwitchLink> links_;
    std::vector<HostInfo> hosts_;
    std::map<sd::Ipv4Address, std::size_t> host_index_;
    std::map<Attachment, Attachment> peers_;
    std::map<Attachment, std::size_t> host_ports_;
};

}  // namespace soasim::ctrl
