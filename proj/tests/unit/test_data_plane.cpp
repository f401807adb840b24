#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "soasim/net/switch.hpp"
#include "soasim/net/tx_queue.hpp"

using namespace soasim;
using namespace soasim::net;

namespace {

constexpr sim::SimTime k8us = sim::microseconds(8);

Frame frame_to(MacAddress src, MacAddress dst, std::size_t payload = 32) {
    Frame f;
    f.src_mac = src;
    f.dst_mac = dst;
    f.dst = {sd::Ipv4Address::from_octets(10, 0, 0, 9), 30490, sd::Transport::Udp};
    f.payload.resize(payload);
    return f;
}

FlowRule out_rule(RuleId id, std::uint32_t prio, std::vector<PortId> ports) {
    FlowRule r;
    r.id = id;
    r.priority = prio;
    for (auto p : ports) r.actions.push_back(FlowAction::output(p));
    return r;
}

}  // namespace

TEST_CASE("transmit: bits over rate plus propagation") {
    TxQueue q(1'000'000'000, 0);
    CHECK(q.enqueue(0, 1000) == sim::kMicrosecond);

    TxQueue min(1'000'000'000, 0);
    Frame tiny = frame_to(MacAddress::for_host(1), MacAddress::for_host(2), 0);
    CHECK(tiny.length_bits() == 512);
    CHECK(min.enqueue(0, tiny.length_bits()) == 512);

    TxQueue prop(1'000'000'000, 250);
    CHECK(prop.enqueue(1000, 1000) == 1000 + 1000 + 250);
}

TEST_CASE("transmit: FIFO serialization on one port") {
    TxQueue q(1'000'000'000, 0);
    const auto first = q.enqueue(0, 1000);
    const auto second = q.enqueue(0, 1000);
    CHECK(second == first + sim::kMicrosecond);
    // an idle gap resets to the enqueue time
    CHECK(q.enqueue(10'000, 1000) == 11'000);
}

TEST_CASE("frame length counts headers and pads to 64 bytes") {
    const auto f = frame_to(MacAddress::for_host(1), MacAddress::for_host(2), 32);
    CHECK(f.length_bits() == 8 * (62 + 32));
}

TEST_CASE("learning switch floods unknown, then forwards learned") {
    SwitchModel sw(1, 4, SwitchMode::Learning, k8us);
    const auto a = MacAddress::for_host(1);
    const auto b = MacAddress::for_host(2);

    auto r = sw.forward(frame_to(a, b), 1, 0);
    CHECK(r.flooded);
    CHECK(r.egress == std::vector<PortId>{2, 3, 4});
    CHECK(r.egress_at == k8us);
    CHECK(sw.mac_table().at(a) == 1);

    r = sw.forward(frame_to(b, a), 3, 100);
    CHECK_FALSE(r.flooded);
    CHECK(r.egress == std::vector<PortId>{1});

    r = sw.forward(frame_to(a, b), 1, 200);
    CHECK(r.egress == std::vector<PortId>{3});

    // destination on the ingress segment is filtered
    r = sw.forward(frame_to(MacAddress::for_host(5), b), 3, 300);
    CHECK(r.dropped);
    CHECK(r.egress.empty());
}

TEST_CASE("learning switch floods group destinations") {
    SwitchModel sw(1, 3, SwitchMode::Learning, k8us);
    const auto group = MacAddress::for_multicast(sd::kSdMulticast.address);
    CHECK(group.is_group());
    const auto r = sw.forward(frame_to(MacAddress::for_host(1), group), 2, 0);
    CHECK(r.flooded);
    CHECK(r.egress == std::vector<PortId>{1, 3});
}

TEST_CASE("openflow switch: miss raises a packet-in only") {
    SwitchModel sw(1, 4, SwitchMode::OpenFlow, k8us);
    const auto r = sw.forward(frame_to(MacAddress::for_host(1), MacAddress::for_host(2)), 1, 50);
    CHECK(r.packet_in);
    CHECK(r.egress.empty());
    CHECK(r.egress_at == 50 + k8us);
    CHECK(sw.mac_table().empty());
}

TEST_CASE("openflow switch: multicast rule with three outputs") {
    SwitchModel sw(1, 4, SwitchMode::OpenFlow, k8us);
    sw.apply_flow_mod(out_rule(10, 100, {2, 3, 4}), FlowModOp::Add);
    const auto r = sw.forward(frame_to(MacAddress::for_host(1), MacAddress::for_host(2)), 1, 0);
    CHECK(r.egress == std::vector<PortId>{2, 3, 4});
    CHECK(r.egress_at == k8us);
    CHECK_FALSE(r.packet_in);
}

TEST_CASE("flow-mod semantics") {
    SwitchModel sw(1, 4, SwitchMode::OpenFlow, k8us);
    auto rule = out_rule(10, 100, {2});
    CHECK(sw.apply_flow_mod(rule, FlowModOp::Add) == FlowModResult::Applied);

    rule.actions.push_back(FlowAction::output(3));
    CHECK(sw.apply_flow_mod(rule, FlowModOp::Modify) == FlowModResult::Applied);
    const auto r = sw.forward(frame_to(MacAddress::for_host(1), MacAddress::for_host(2)), 1, 0);
    CHECK(r.egress == std::vector<PortId>{2, 3});

    CHECK(sw.apply_flow_mod(out_rule(99, 1, {}), FlowModOp::Remove) ==
          FlowModResult::RemovedNonexistent);
    CHECK(sw.flow_table().size() == 1);
    CHECK(sw.apply_flow_mod(rule, FlowModOp::Remove) == FlowModResult::Applied);
    CHECK(sw.flow_table().size() == 0);
}

TEST_CASE("drop action and rule without actions") {
    SwitchModel sw(1, 2, SwitchMode::OpenFlow, k8us);
    FlowRule drop;
    drop.id = 1;
    drop.priority = 10;
    drop.actions = {FlowAction::output(2), FlowAction::drop()};
    sw.apply_flow_mod(drop, FlowModOp::Add);
    auto r = sw.forward(frame_to(MacAddress::for_host(1), MacAddress::for_host(2)), 1, 0);
    CHECK(r.dropped);
    CHECK(r.egress.empty());
}

TEST_CASE("lookup equals brute-force precedence scan") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int round = 0; round < 300; ++round) {
        FlowTable table;
        std::vector<FlowRule> all;
        for (int i = 0; i < 12; ++i) {
            FlowRule r;
            r.id = static_cast<RuleId>(pick(rng) * 10 + i);
            r.priority = static_cast<std::uint32_t>(pick(rng));
            if (pick(rng) == 0) r.match.in_port = static_cast<PortId>(pick(rng) + 1);
            if (pick(rng) == 0)
                r.match.dst_mac = MacAddress::for_host(static_cast<std::uint32_t>(pick(rng)));
            if (pick(rng) == 0) r.match.dst_port = static_cast<std::uint16_t>(30490 + pick(rng));
            r.actions = {FlowAction::output(1)};
            table.add(r);
            std::erase_if(all, [&](const FlowRule& x) { return x.id == r.id; });
            all.push_back(r);
        }
        for (int probe = 0; probe < 20; ++probe) {
            Frame f = frame_to(MacAddress::for_host(9),
                               MacAddress::for_host(static_cast<std::uint32_t>(pick(rng))));
            f.dst.port = static_cast<std::uint16_t>(30490 + pick(rng));
            const PortId in = static_cast<PortId>(pick(rng) + 1);
            const FlowRule* best = nullptr;
            for (const auto& r : all) {
                if (!r.match.matches(f, in)) continue;
                if (best == nullptr || r.priority > best->priority ||
                    (r.priority == best->priority && r.id < best->id)) {
                    best = &r;
                }
            }
            const auto* got = table.lookup(f, in);
            REQUIRE((got == nullptr) == (best == nullptr));
            if (got != nullptr) CHECK(got->id == best->id);
        }
    }
}
