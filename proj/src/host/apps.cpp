#include "soasim/host/apps.hpp"

#include <algorithm>

namespace soasim::host {

using sd::SdKind;
using sd::SdMessage;

ProducerApp::ProducerApp(sd::ServiceIdentity identity, sd::Endpoint service_endpoint,
                         sd::Endpoint sd_endpoint, std::uint32_t offer_ttl)
    : identity_(identity),
      service_endpoint_(service_endpoint),
      sd_endpoint_(sd_endpoint),
      offer_ttl_(offer_ttl) {}

SdMessage ProducerApp::make(SdKind kind, std::uint32_t ttl) {
    SdMessage m;
    m.kind = kind;
    m.identity = identity_;
    m.ttl_seconds = ttl;
    m.sender = sd_endpoint_;
    m.session_id = ++session_;
    return m;
}

Outgoing ProducerApp::activate(sim::SimTime) {
    auto offer = make(SdKind::Offer, offer_ttl_);
    offer.provider_endpoint = service_endpoint_;
    return {sd::kSdMulticast, offer};
}

Outgoing ProducerApp::withdraw() {
    auto offer = make(SdKind::Offer, 0);
    offer.provider_endpoint = service_endpoint_;
    subscribers_.clear();
    return {sd::kSdMulticast, offer};
}

std::optional<Outgoing> ProducerApp::on_sd_message(const SdMessage& msg, sim::SimTime) {
    switch (msg.kind) {
        case SdKind::Find: {
            if (!sd::matches(msg.identity, identity_)) return std::nullopt;
            auto offer = make(SdKind::Offer, offer_ttl_);
            offer.provider_endpoint = service_endpoint_;
            return Outgoing{msg.sender, offer};
        }
        case SdKind::Subscribe: {
            if (!sd::matches(msg.identity, identity_) || !msg.consumer_endpoint) {
                return std::nullopt;
            }
            if (msg.ttl_seconds == 0) {
                subscribers_.erase(*msg.consumer_endpoint);
                return std::nullopt;
            }
            subscribers_.insert(*msg.consumer_endpoint);
            auto ack = make(SdKind::SubscribeAck, msg.ttl_seconds);
            ack.consumer_endpoint = msg.consumer_endpoint;
            ack.session_id = msg.session_id;
            return Outgoing{msg.sender, ack};
        }
        default: return std::nullopt;
    }
}

const char* to_string(QueryState s) {
    switch (s) {
        case QueryState::Idle: return "idle";
        case QueryState::Finding: return "finding";
        case QueryState::Subscribing: return "subscribing";
        case QueryState::Subscribed: return "subscribed";
        case QueryState::Nacked: return "nacked";
    }
    return "?";
}

ConsumerApp::ConsumerApp(std::vector<sd::ServiceIdentity> wanted, sd::Endpoint sd_endpoint,
                         sd::Endpoint event_endpoint, std::uint32_t find_ttl,
                         std::uint32_t subscribe_ttl)
    : wanted_(std::move(wanted)),
      sd_endpoint_(sd_endpoint),
      event_endpoint_(event_endpoint),
      find_ttl_(find_ttl),
      subscribe_ttl_(subscribe_ttl),
      states_(wanted_.size(), QueryState::Idle) {}

std::vector<Outgoing> ConsumerApp::start(sim::SimTime) {
    std::vector<Outgoing> out;
    for (std::size_t i = 0; i < wanted_.size(); ++i) {
        SdMessage find;
        find.kind = SdKind::Find;
        find.identity = wanted_[i];
        find.ttl_seconds = find_ttl_;
        find.sender = sd_endpoint_;
        find.session_id = ++session_;
        states_[i] = QueryState::Finding;
        out.push_back({sd::kSdMulticast, find});
    }
    return out;
}

std::optional<std::size_t> ConsumerApp::query_for(const sd::ServiceIdentity& id) const {
    for (std::size_t i = 0; i < wanted_.size(); ++i) {
        if (sd::matches(wanted_[i], id)) return i;
    }
    return std::nullopt;
}

std::optional<Outgoing> ConsumerApp::on_sd_message(const SdMessage& msg, sim::SimTime now) {
    const auto q = query_for(msg.identity);
    if (!q) return std::nullopt;
    const std::pair key{msg.identity.service_id, msg.identity.instance_id};

    if (msg.kind == SdKind::Offer) {
        if (msg.is_withdrawal() || requested_.contains(key)) return std::nullopt;
        if (states_[*q] == QueryState::Nacked) return std::nullopt;
        requested_.insert(key);
        if (states_[*q] == QueryState::Finding) states_[*q] = QueryState::Subscribing;
        SdMessage sub;
        sub.kind = SdKind::Subscribe;
        sub.identity = msg.identity;
        sub.ttl_seconds = subscribe_ttl_;
        sub.consumer_endpoint = event_endpoint_;
        sub.sender = sd_endpoint_;
        sub.session_id = ++session_;
        ++subscribes_sent_;
        return Outgoing{msg.sender, sub};
    }

    if (msg.kind == SdKind::SubscribeAck) {
        if (msg.consumer_endpoint != event_endpoint_ || !requested_.contains(key)) {
            return std::nullopt;
        }
        if (msg.is_nack()) {
            if (!subscribed_.contains(key)) states_[*q] = QueryState::Nacked;
        } else if (subscribed_.insert(key).second) {
            states_[*q] = QueryState::Subscribed;
            completed_at_ = now;
        }
    }
    return std::nullopt;
}

bool ConsumerApp::all_subscribed() const {
    return std::all_of(states_.begin(), states_.end(),
                       [](QueryState s) { return s == QueryState::Subscribed; });
}

}  // namespace soasim::host
