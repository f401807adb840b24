#pragma once

#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "soasim/ctrl/learning_controller.hpp"
#include "soasim/ctrl/service_aware_controller.hpp"
#include "soasim/ctrl/topology.hpp"
#include "soasim/host/apps.hpp"
#include "soasim/net/switch.hpp"
#include "soasim/net/tx_queue.hpp"
#include "soasim/scenario/config.hpp"
#include "soasim/sim/engine.hpp"

namespace soasim::scenario {

/// Chain S1..SS; producers on S1, consumers on SS. Host i (0-based, producers
/// first) gets MAC for_host(i + 1).
[[nodiscard]] ctrl::Topology build_topology(const ScenarioConfig& config);

/// One simulated vehicle network: switches, links, hosts and, in SDN modes,
/// the controller with one dedicated channel per switch.
class Network {
public:
    explicit Network(ScenarioConfig config, std::ostream* trace = nullptr);
    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;

    /// Schedules the cold start: every producer and consumer at t = 0.
    void start();
    /// Runs to quiescence. Throws sim::TimeoutError unless every consumer
    /// query ends Subscribed.
    sim::RunMetrics run();
    /// Every producer multicasts an Offer with ttl 0 now; then runs to
    /// quiescence without a goal.
    void withdraw_all_offers();

    [[nodiscard]] const ScenarioConfig& config() const { return config_; }
    [[nodiscard]] const ctrl::Topology& topology() const { return topology_; }
    [[nodiscard]] const std::vector<net::SwitchModel>& switches() const { return switches_; }
    [[nodiscard]] const ctrl::ServiceAwareController* aware_controller() const {
        return aware_.get();
    }
    [[nodiscard]] const ctrl::LearningController* learning_controller() const {
        return learning_.get();
    }
    [[nodiscard]] const std::vector<host::ProducerApp>& producers() const { return producers_; }
    [[nodiscard]] const std::vector<host::ConsumerApp>& consumers() const { return consumers_; }
    sim::Simulator& simulator() { return sim_; }
    [[nodiscard]] bool all_subscribed() const;

private:
    struct HostSlot {
        bool producer{false};
        std::size_t app{0};
        net::TxQueue uplink;
    };

    void host_send(std::size_t host, const host::Outgoing& out);
    void host_receive(std::size_t host, const net::FramePtr& frame);
    void switch_receive(net::SwitchId sw, net::PortId port, const net::FramePtr& frame);
    void transmit(net::SwitchId sw, net::PortId port, const net::FramePtr& frame);
    void packet_in(net::SwitchId sw, net::PortId port, const net::FramePtr& frame);
    void controller_handle(net::SwitchId sw, net::PortId port, const net::FramePtr& frame);
    void dispatch(const ctrl::ControlAction& action);
    void to_switch(net::SwitchId sw, std::function<void()> on_done);
    void trace(const std::string& node, const char* kind, const std::string& detail);
    net::TxQueue& port_queue(net::SwitchId sw, net::PortId port);

    ScenarioConfig config_;
    std::ostream* trace_;
    ctrl::Topology topology_;
    sim::Simulator sim_;
    std::vector<net::SwitchModel> switches_;
    std::vector<std::vector<net::TxQueue>> port_queues_;
    std::vector<net::TxQueue> control_up_;
    std::vector<net::TxQueue> control_down_;
    std::vector<HostSlot> hosts_;
    std::map<net::Attachment, std::size_t> host_at_;
    std::vector<host::ProducerApp> producers_;
    std::vector<host::ConsumerApp> consumers_;
    std::unique_ptr<ctrl::ServiceAwareController> aware_;
    std::unique_ptr<ctrl::LearningController> learning_;
};

/// Problems found when checking each Active subscription's installed hops
/// against the topology and the switches' flow tables; empty when all paths
/// are complete.
[[nodiscard]] std::vector<std::string> check_paths(const Network& network);

/// Rules on all switches except the static SD punt rules.
[[nodiscard]] std::size_t dynamic_rule_count(const Network& network);

}  // namespace soasim::scenario
