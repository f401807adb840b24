#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "soasim/ctrl/topology.hpp"
#include "soasim/sd/codec.hpp"

using namespace soasim;
using namespace soasim::ctrl;

namespace {

// Shortest path by enumerating every simple path; ties go to the
// lexicographically smallest switch sequence.
std::vector<SwitchId> brute_force_path(const Topology& t, SwitchId from, SwitchId to) {
    std::map<SwitchId, std::vector<SwitchId>> adj;
    for (const auto& l : t.links()) {
        adj[l.a.switch_id].push_back(l.b.switch_id);
        adj[l.b.switch_id].push_back(l.a.switch_id);
    }
    std::vector<SwitchId> best;
    std::vector<SwitchId> cur{from};
    std::function<void(SwitchId)> dfs = [&](SwitchId u) {
        if (u == to) {
            if (best.empty() || cur.size() < best.size() ||
                (cur.size() == best.size() && cur < best)) {
                best = cur;
            }
            return;
        }
        for (SwitchId v : adj[u]) {
            if (std::find(cur.begin(), cur.end(), v) != cur.end()) continue;
            cur.push_back(v);
            dfs(v);
            cur.pop_back();
        }
    };
    dfs(from);
    return best;
}

}  // namespace

TEST_CASE("ports are allocated in order") {
    Topology t;
    const auto s1 = t.add_switch();
    const auto s2 = t.add_switch();
    CHECK(s1 == 1);
    CHECK(s2 == 2);
    const auto link = t.connect(1, 2);
    CHECK(link.a == Attachment{1, 1});
    CHECK(link.b == Attachment{2, 1});
    const auto& h = t.attach_host("h", sd::Ipv4Address::from_octets(10, 0, 0, 1),
                                  net::MacAddress::for_host(1), 2);
    CHECK(h.attachment == Attachment{2, 2});
    CHECK(t.port_count(2) == 2);
    CHECK(t.is_host_port({2, 2}));
    CHECK_FALSE(t.is_host_port({2, 1}));
    CHECK(t.peer_of({1, 1}) == Attachment{2, 1});
    CHECK_FALSE(t.peer_of({2, 2}).has_value());
    CHECK(t.host_ports(2) == std::vector<PortId>{2});
    CHECK(t.host_ports(1).empty());
    CHECK(t.is_connected());
}

TEST_CASE("chain shortest path visits every switch") {
    Topology t;
    for (int i = 0; i < 5; ++i) t.add_switch();
    for (SwitchId s = 1; s < 5; ++s) t.connect(s, s + 1);
    CHECK(t.shortest_path(1, 5) == brute_force_path(t, 1, 5));
    CHECK(t.shortest_path(1, 5).size() == 5);
    CHECK(t.shortest_path(3, 3) == std::vector<SwitchId>{3});
    CHECK(t.port_towards(2, 3) == 2);
    CHECK(t.port_towards(2, 1) == 1);
}

TEST_CASE("shortest path matches brute force on random graphs") {
    std::mt19937 rng(5);
    for (int round = 0; round < 200; ++round) {
        Topology t;
        const int n = 2 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) t.add_switch();
        for (SwitchId s = 2; s <= static_cast<SwitchId>(n); ++s) {
            t.connect(static_cast<SwitchId>(1 + rng() % (s - 1)), s);  // spanning tree
        }
        for (int extra = 0; extra < 3; ++extra) {
            const auto a = static_cast<SwitchId>(1 + rng() % n);
            const auto b = static_cast<SwitchId>(1 + rng() % n);
            if (a != b) t.connect(a, b);
        }
        for (SwitchId a = 1; a <= static_cast<SwitchId>(n); ++a) {
            for (SwitchId b = 1; b <= static_cast<SwitchId>(n); ++b) {
                REQUIRE(t.shortest_path(a, b) == brute_force_path(t, a, b));
            }
        }
    }
}

TEST_CASE("disconnected and unknown switches") {
    Topology t;
    t.add_switch();
    t.add_switch();
    CHECK_FALSE(t.is_connected());
    CHECK_THROWS_AS((void)t.shortest_path(1, 2), NoPathError);
    CHECK_THROWS_AS((void)t.shortest_path(1, 7), NoPathError);
    CHECK_THROWS_AS((void)t.port_towards(1, 2), NoPathError);
    CHECK_THROWS_AS(t.connect(1, 1), std::invalid_argument);
}

TEST_CASE("sd_frame addresses unicast and group") {
    Topology t;
    t.add_switch();
    const auto a = sd::Ipv4Address::from_octets(10, 0, 0, 1);
    const auto b = sd::Ipv4Address::from_octets(10, 0, 0, 2);
    t.attach_host("a", a, net::MacAddress::for_host(1), 1);
    t.attach_host("b", b, net::MacAddress::for_host(2), 1);

    sd::SdMessage find;
    find.kind = sd::SdKind::Find;
    find.identity = sd::ServiceIdentity::any_instance_of(0x42);
    find.ttl_seconds = 3;
    find.sender = {a, sd::kSdPort, sd::Transport::Udp};

    const auto group = t.sd_frame(find, sd::kSdMulticast);
    CHECK(group->src_mac == net::MacAddress::for_host(1));
    CHECK(group->dst_mac == net::MacAddress::for_multicast(sd::kSdMulticast.address));
    CHECK(*sd::decode(group->payload).message == find);

    const auto uni = t.sd_frame(find, {b, sd::kSdPort, sd::Transport::Udp});
    CHECK(uni->dst_mac == net::MacAddress::for_host(2));
    CHECK_THROWS_AS(
        (void)t.sd_frame(find, {sd::Ipv4Address::from_octets(1, 2, 3, 4), 1, sd::Transport::Udp}),
        std::out_of_range);
}
