#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "soasim/ctrl/service_aware_controller.hpp"
#include "soasim/host/apps.hpp"

using namespace soasim;
using namespace soasim::host;
using sd::SdKind;

namespace {

const auto kProvAddr = sd::Ipv4Address::from_octets(10, 0, 1, 1);
const auto kConsAddr = sd::Ipv4Address::from_octets(10, 0, 2, 1);
const sd::Endpoint kProvSd{kProvAddr, sd::kSdPort, sd::Transport::Udp};
const sd::Endpoint kProvSvc{kProvAddr, 30501, sd::Transport::Udp};
const sd::Endpoint kConsSd{kConsAddr, sd::kSdPort, sd::Transport::Udp};
const sd::Endpoint kConsEvt{kConsAddr, 30601, sd::Transport::Udp};
const sd::ServiceIdentity kId{0x1234, 1, 1, 0};

ProducerApp producer() { return ProducerApp(kId, kProvSvc, kProvSd, 3); }

ConsumerApp consumer(std::vector<sd::ServiceIdentity> wanted = {
                         sd::ServiceIdentity::any_instance_of(0x1234)}) {
    return ConsumerApp(std::move(wanted), kConsSd, kConsEvt, 3, 3);
}

}  // namespace

TEST_CASE("producer offers to the SD group on activation") {
    auto p = producer();
    const auto out = p.activate(0);
    CHECK(out.to == sd::kSdMulticast);
    CHECK(out.message.kind == SdKind::Offer);
    CHECK(out.message.identity == kId);
    CHECK(out.message.ttl_seconds == 3);
    CHECK(out.message.provider_endpoint == kProvSvc);
    CHECK(out.message.sender == kProvSd);
    CHECK(out.message.is_well_formed());
}

TEST_CASE("producer answers finds and subscribes") {
    auto p = producer();
    auto c = consumer();
    const auto finds = c.start(0);
    REQUIRE(finds.size() == 1);

    const auto offer = p.on_sd_message(finds[0].message, 1);
    REQUIRE(offer);
    CHECK(offer->to == kConsSd);
    CHECK(offer->message.kind == SdKind::Offer);

    sd::SdMessage other = finds[0].message;
    other.identity = sd::ServiceIdentity::any_instance_of(0x4444);
    CHECK_FALSE(p.on_sd_message(other, 1));

    const auto sub = c.on_sd_message(offer->message, 2);
    REQUIRE(sub);
    const auto ack = p.on_sd_message(sub->message, 3);
    REQUIRE(ack);
    CHECK(ack->to == kConsSd);
    CHECK(ack->message.kind == SdKind::SubscribeAck);
    CHECK(ack->message.ttl_seconds == sub->message.ttl_seconds);
    CHECK(ack->message.consumer_endpoint == kConsEvt);
    CHECK(p.subscribers().contains(kConsEvt));

    auto stop = sub->message;
    stop.ttl_seconds = 0;
    CHECK_FALSE(p.on_sd_message(stop, 4));
    CHECK(p.subscribers().empty());
}

TEST_CASE("consumer finds every wanted service at start") {
    std::vector<sd::ServiceIdentity> wanted;
    for (std::uint16_t s = 1; s <= 50; ++s)
        wanted.push_back(sd::ServiceIdentity::any_instance_of(s));
    auto c = consumer(wanted);
    const auto out = c.start(0);
    CHECK(out.size() == 50);
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].to == sd::kSdMulticast);
        CHECK(out[i].message.kind == SdKind::Find);
        CHECK(c.state(i) == QueryState::Finding);
    }
    CHECK(consumer({}).start(0).empty());
}

TEST_CASE("consumer subscribes once per instance and completes on ack") {
    auto p = producer();
    auto c = consumer();
    c.start(0);
    const auto offer = p.activate(0).message;

    const auto sub = c.on_sd_message(offer, 1);
    REQUIRE(sub);
    CHECK(sub->to == kProvSd);
    CHECK(sub->message.kind == SdKind::Subscribe);
    CHECK(sub->message.consumer_endpoint == kConsEvt);
    CHECK(c.state(0) == QueryState::Subscribing);
    CHECK_FALSE(c.on_sd_message(offer, 2));  // duplicate offer
    CHECK(c.subscribes_sent() == 1);

    const auto ack = p.on_sd_message(sub->message, 3)->message;
    CHECK_FALSE(c.on_sd_message(ack, 4));
    CHECK(c.state(0) == QueryState::Subscribed);
    CHECK(c.all_subscribed());
    CHECK(c.completed_at() == sim::SimTime{4});
    CHECK_FALSE(c.on_sd_message(offer, 5));
    CHECK(c.subscribes_sent() == 1);
}

TEST_CASE("controller nack for an unknown service leaves the query nacked") {
    ctrl::Topology topo;
    topo.add_switch();
    topo.attach_host("c", kConsAddr, net::MacAddress::for_host(1), 1);
    topo.attach_host("p", kProvAddr, net::MacAddress::for_host(2), 1);
    ctrl::ServiceAwareController ctl(topo);

    auto c = consumer({sd::ServiceIdentity::any_instance_of(0x9999)});
    c.start(0);
    // an offer that bypassed the controller, so the registry never saw it
    sd::SdMessage stray;
    stray.kind = SdKind::Offer;
    stray.identity = {0x9999, 1, 1, 0};
    stray.ttl_seconds = 3;
    stray.provider_endpoint = kProvSvc;
    stray.sender = kProvSd;
    const auto sub = c.on_sd_message(stray, 1);
    REQUIRE(sub);

    const auto actions = ctl.handle_sd_message(sub->message, *topo.attachment_of(kConsAddr), 1);
    REQUIRE(actions.size() == 1);
    const auto& nack = std::get<ctrl::SendSd>(actions[0]);
    CHECK(nack.to == kConsSd);
    CHECK_FALSE(c.on_sd_message(nack.message, 2));
    CHECK(c.state(0) == QueryState::Nacked);
    CHECK_FALSE(c.all_subscribed());
    // no retry on a later offer
    CHECK_FALSE(c.on_sd_message(stray, 3));
}
