#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "soasim/ctrl/learning_controller.hpp"
#include "soasim/net/switch.hpp"
#include "soasim/scenario/network.hpp"

using namespace soasim;
using namespace soasim::ctrl;

namespace {

// S1 -- S2; provider on S1:2, consumer on S2:2, spare host on S2:3
struct Fixture {
    Topology topo;
    const net::MacAddress prov = net::MacAddress::for_host(1);
    const net::MacAddress cons = net::MacAddress::for_host(2);
    const net::MacAddress group = net::MacAddress::for_multicast(sd::kSdMulticast.address);

    Fixture() {
        topo.add_switch();
        topo.add_switch();
        topo.connect(1, 2);
        topo.attach_host("p", sd::Ipv4Address::from_octets(10, 0, 1, 1), prov, 1);
        topo.attach_host("c", sd::Ipv4Address::from_octets(10, 0, 2, 1), cons, 2);
        topo.attach_host("x", sd::Ipv4Address::from_octets(10, 0, 2, 2),
                         net::MacAddress::for_host(3), 2);
    }

    static net::FramePtr frame(net::MacAddress src, net::MacAddress dst) {
        auto f = std::make_shared<net::Frame>();
        f->src_mac = src;
        f->dst_mac = dst;
        f->payload.resize(32);
        return f;
    }
};

}  // namespace

TEST_CASE("first multicast frame installs a flood rule and is flooded") {
    Fixture f;
    LearningController ctl(f.topo);
    const auto frame = Fixture::frame(f.prov, f.group);
    const auto actions = ctl.handle_packet_in(frame, {1, 2});

    net::FlowRule flood;
    flood.id = 1000;
    flood.priority = kFloodPriority;
    flood.match.dst_mac = f.group;
    flood.match.in_port = 2;
    flood.actions = {net::FlowAction::output(1)};
    const ControlActions expected{FlowMod{1, flood, net::FlowModOp::Add}, PacketOut{1, {1}, frame}};
    CHECK(actions == expected);
    CHECK(ctl.learned_port(1, f.prov) == PortId{2});
}

TEST_CASE("flood rules can be switched off") {
    Fixture f;
    LearningController ctl(f.topo, {LearningScope::HopByHop, false});
    const auto frame = Fixture::frame(f.prov, f.group);
    const auto actions = ctl.handle_packet_in(frame, {2, 1});
    CHECK(actions == ControlActions{PacketOut{2, {2, 3}, frame}});
}

TEST_CASE("unknown unicast is flooded without a rule") {
    Fixture f;
    LearningController ctl(f.topo);
    const auto frame = Fixture::frame(f.cons, f.prov);
    CHECK(ctl.handle_packet_in(frame, {2, 2}) == ControlActions{PacketOut{2, {1, 3}, frame}});
}

TEST_CASE("unicast after learning installs rules; replay causes no packet-in") {
    Fixture f;
    LearningController ctl(f.topo);
    std::vector<net::SwitchModel> sw;
    sw.emplace_back(1, f.topo.port_count(1), net::SwitchMode::OpenFlow, sim::microseconds(8));
    sw.emplace_back(2, f.topo.port_count(2), net::SwitchMode::OpenFlow, sim::microseconds(8));
    auto apply = [&](const ControlActions& actions) {
        for (const auto& a : actions) {
            if (const auto* fm = std::get_if<FlowMod>(&a)) {
                sw[fm->switch_id - 1].apply_flow_mod(fm->rule, fm->op);
            }
        }
    };

    // provider's offer teaches both switches where the provider is
    apply(ctl.handle_packet_in(Fixture::frame(f.prov, f.group), {1, 2}));
    apply(ctl.handle_packet_in(Fixture::frame(f.prov, f.group), {2, 1}));

    const auto sub = Fixture::frame(f.cons, f.prov);
    auto r = sw[1].forward(*sub, 2, 0);
    REQUIRE(r.packet_in);
    auto actions = ctl.handle_packet_in(sub, {2, 2});
    REQUIRE(actions.size() == 2);
    CHECK(std::get<FlowMod>(actions[0]).rule.output_ports() == std::vector<PortId>{1});
    CHECK(std::get<PacketOut>(actions[1]).ports == std::vector<PortId>{1});
    apply(actions);

    r = sw[0].forward(*sub, 1, 0);
    REQUIRE(r.packet_in);
    actions = ctl.handle_packet_in(sub, {1, 1});
    CHECK(std::get<FlowMod>(actions[0]).rule.output_ports() == std::vector<PortId>{2});
    apply(actions);

    // replay the same frame along the path: no further packet-ins
    CHECK_FALSE(sw[1].forward(*sub, 2, 10).packet_in);
    CHECK(sw[1].forward(*sub, 2, 10).egress == std::vector<PortId>{1});
    CHECK_FALSE(sw[0].forward(*sub, 1, 10).packet_in);
    CHECK(sw[0].forward(*sub, 1, 10).egress == std::vector<PortId>{2});
}

TEST_CASE("path-wide scope programs the remaining hops at once") {
    Fixture f;
    LearningController ctl(f.topo, {LearningScope::PathWide, true});
    ctl.handle_packet_in(Fixture::frame(f.prov, f.group), {1, 2});
    ctl.handle_packet_in(Fixture::frame(f.prov, f.group), {2, 1});
    const auto actions = ctl.handle_packet_in(Fixture::frame(f.cons, f.prov), {2, 2});
    REQUIRE(actions.size() == 3);
    CHECK(std::get<FlowMod>(actions[0]).switch_id == 2);
    CHECK(std::get<FlowMod>(actions[1]).switch_id == 1);
    CHECK(std::get<FlowMod>(actions[1]).rule.output_ports() == std::vector<PortId>{2});
}

TEST_CASE("second offer to the group stays in the data plane") {
    scenario::ScenarioConfig cfg;
    cfg.mode = scenario::Mode::SdnVanilla;
    cfg.switches = 2;
    scenario::Network net(cfg);
    net.start();
    net.run();
    const auto before = net.simulator().counters().packet_ins;
    const auto recv_before = net.simulator().counters().frames_received;
    net.withdraw_all_offers();
    CHECK(net.simulator().counters().packet_ins == before);
    CHECK(net.simulator().counters().frames_received > recv_before);
    // registries stay empty: the vanilla controller never parses SD
    CHECK(net.aware_controller() == nullptr);
}
