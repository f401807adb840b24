#include "soasim/scenario/network.hpp"

#include <algorithm>

#include "soasim/sd/codec.hpp"

namespace soasim::scenario {

using net::FramePtr;
using net::PortId;
using net::SwitchId;

namespace {

constexpr std::uint16_t kServicePort = 30501;
constexpr std::uint16_t kEventPort = 30601;

std::string frame_detail(const net::Frame& f) {
    std::string s = f.src.to_string() + "->" + f.dst.to_string();
    if (auto d = sd::decode(f.payload); d.ok()) s += " " + d.message->to_string();
    return s;
}

std::string sw_name(SwitchId sw) { return "S" + std::to_string(sw); }

}  // namespace

ctrl::Topology build_topology(const ScenarioConfig& config) {
    config.validate();
    ctrl::Topology topo(config.timing.link_rate_bps, config.timing.propagation);
    for (std::uint32_t s = 0; s < config.switches; ++s) topo.add_switch();
    for (SwitchId s = 1; s < config.switches; ++s) topo.connect(s, s + 1);

    std::uint32_t index = 0;
    for (std::uint32_t i = 1; i <= config.producers; ++i) {
        topo.attach_host("P" + std::to_string(i),
                         sd::Ipv4Address::from_octets(10, 0, 1, static_cast<std::uint8_t>(i)),
                         net::MacAddress::for_host(++index), 1);
    }
    for (std::uint32_t j = 1; j <= config.consumers; ++j) {
        topo.attach_host("C" + std::to_string(j),
                         sd::Ipv4Address::from_octets(10, 0, 2, static_cast<std::uint8_t>(j)),
                         net::MacAddress::for_host(++index), config.switches);
    }
    return topo;
}

Network::Network(ScenarioConfig config, std::ostream* trace)
    : config_(std::move(config)), trace_(trace), topology_(build_topology(config_)) {
    const auto& t = config_.timing;
    const bool sdn = config_.mode != Mode::Ethernet;

    for (SwitchId s = 1; s <= topology_.switch_count(); ++s) {
        switches_.emplace_back(s, topology_.port_count(s),
                               sdn ? net::SwitchMode::OpenFlow : net::SwitchMode::Learning,
                               t.forwarding_delay);
        port_queues_.emplace_back(topology_.port_count(s),
                                  net::TxQueue(t.link_rate_bps, t.propagation));
        control_up_.emplace_back(t.control_link_rate_bps, 0);
        control_down_.emplace_back(t.control_link_rate_bps, 0);
    }

    std::vector<sd::ServiceIdentity> wanted;
    for (std::uint32_t i = 1; i <= config_.producers; ++i) {
        wanted.push_back(sd::ServiceIdentity::any_instance_of(service_id_for(i)));
    }
    for (auto svc : config_.unoffered_services) {
        wanted.push_back(sd::ServiceIdentity::any_instance_of(svc));
    }

    const auto& hosts = topology_.hosts();
    for (std::size_t h = 0; h < hosts.size(); ++h) {
        const auto addr = hosts[h].address;
        const sd::Endpoint sd_ep{addr, sd::kSdPort, sd::Transport::Udp};
        HostSlot slot;
        slot.uplink = net::TxQueue(t.link_rate_bps, t.propagation);
        if (h < config_.producers) {
            slot.producer = true;
            slot.app = producers_.size();
            const sd::ServiceIdentity id{service_id_for(static_cast<std::uint32_t>(h + 1)), 1, 1,
                                         0};
            producers_.emplace_back(id, sd::Endpoint{addr, kServicePort, sd::Transport::Udp}, sd_ep,
                                    config_.offer_ttl);
        } else {
            slot.app = consumers_.size();
            consumers_.emplace_back(wanted, sd_ep,
                                    sd::Endpoint{addr, kEventPort, sd::Transport::Udp},
                                    config_.find_ttl, config_.subscribe_ttl);
        }
        hosts_.push_back(slot);
        host_at_[hosts[h].attachment] = h;
    }

    if (config_.mode == Mode::SdnOptimized) {
        aware_ = std::make_unique<ctrl::ServiceAwareController>(topology_);
        for (auto& sw : switches_) sw.apply_flow_mod(ctrl::sd_punt_rule(), net::FlowModOp::Add);
    } else if (config_.mode == Mode::SdnVanilla) {
        learning_ = std::make_unique<ctrl::LearningController>(topology_, config_.vanilla);
    }
}

void Network::trace(const std::string& node, const char* kind, const std::string& detail) {
    if (trace_ == nullptr) return;
    *trace_ << sim::format_seconds(sim_.now()) << ' ' << node << ' ' << kind << ' ' << detail
            << '\n';
}

net::TxQueue& Network::port_queue(SwitchId sw, PortId port) {
    return port_queues_.at(sw - 1).at(port - 1);
}

void Network::start() {
    sim_.schedule(0, [this] {
        for (std::size_t h = 0; h < hosts_.size(); ++h) {
            if (!hosts_[h].producer) continue;
            sim_.mark_first_activity(sim_.now());
            host_send(h, producers_[hosts_[h].app].activate(sim_.now()));
        }
        for (std::size_t h = 0; h < hosts_.size(); ++h) {
            if (hosts_[h].producer) continue;
            for (const auto& out : consumers_[hosts_[h].app].start(sim_.now())) host_send(h, out);
        }
    });
}

sim::RunMetrics Network::run() {
    return sim_.run_until_quiescent(config_.limit, [this] { return all_subscribed(); });
}

void Network::withdraw_all_offers() {
    sim_.schedule(sim_.now(), [this] {
        for (std::size_t h = 0; h < hosts_.size(); ++h) {
            if (hosts_[h].producer) host_send(h, producers_[hosts_[h].app].withdraw());
        }
    });
    sim_.run_until_quiescent(sim_.now() + config_.limit, nullptr);
}

bool Network::all_subscribed() const {
    for (const auto& c : consumers_) {
        if (!c.all_subscribed()) return false;
    }
    return true;
}

void Network::host_send(std::size_t h, const host::Outgoing& out) {
    const auto& info = topology_.hosts()[h];
    FramePtr frame = topology_.sd_frame(out.message, out.to);
    const auto arrival = hosts_[h].uplink.enqueue(sim_.now(), frame->length_bits());
    ++sim_.counters().frames_sent;
    trace(info.name, "send", frame_detail(*frame));
    const auto at = info.attachment;
    sim_.schedule(arrival, [this, at, frame] { switch_receive(at.switch_id, at.port, frame); });
}

void Network::switch_receive(SwitchId sw, PortId port, const FramePtr& frame) {
    ++sim_.counters().frames_received;
    auto r = switches_[sw - 1].forward(*frame, port, sim_.now());
    if (r.flooded) ++sim_.counters().floods;
    if (r.dropped && !r.packet_in) {
        ++sim_.counters().frames_dropped;
        trace(sw_name(sw), "drop", "in=" + std::to_string(port));
    }
    if (r.packet_in) {
        sim_.schedule(r.egress_at, [this, sw, port, frame] { packet_in(sw, port, frame); });
    }
    if (!r.egress.empty()) {
        sim_.schedule(r.egress_at, [this, sw, frame, ports = std::move(r.egress)] {
            for (PortId p : ports) transmit(sw, p, frame);
        });
    }
}

void Network::transmit(SwitchId sw, PortId port, const FramePtr& frame) {
    const auto arrival = port_queue(sw, port).enqueue(sim_.now(), frame->length_bits());
    ++sim_.counters().frames_sent;
    if (auto peer = topology_.peer_of({sw, port})) {
        sim_.schedule(arrival,
                      [this, p = *peer, frame] { switch_receive(p.switch_id, p.port, frame); });
        return;
    }
    auto host = host_at_.find({sw, port});
    if (host == host_at_.end()) {
        throw std::logic_error(sw_name(sw) + " port " + std::to_string(port) + " is unconnected");
    }
    sim_.schedule(arrival, [this, h = host->second, frame] { host_receive(h, frame); });
}

void Network::packet_in(SwitchId sw, PortId port, const FramePtr& frame) {
    ++sim_.counters().packet_ins;
    trace(sw_name(sw), "packet-in", "in=" + std::to_string(port) + " " + frame_detail(*frame));
    const auto bits = 8ULL * config_.timing.control_frame_bytes;
    const auto arrival = control_up_[sw - 1].enqueue(sim_.now(), bits);
    sim_.schedule(arrival + config_.timing.controller_processing,
                  [this, sw, port, frame] { controller_handle(sw, port, frame); });
}

void Network::controller_handle(SwitchId sw, PortId port, const FramePtr& frame) {
    ctrl::ControlActions actions;
    if (aware_) {
        auto decoded = sd::decode(frame->payload);
        if (!decoded.ok()) {
            ++sim_.counters().malformed;
            trace("controller", "malformed", sd::to_string(decoded.error));
            return;
        }
        actions = aware_->handle_sd_message(*decoded.message, {sw, port}, sim_.now());
    } else if (learning_) {
        actions = learning_->handle_packet_in(frame, {sw, port});
    }
    for (const auto& a : actions) dispatch(a);
}

void Network::to_switch(SwitchId sw, std::function<void()> on_done) {
    const auto bits = 8ULL * config_.timing.control_frame_bytes;
    const auto arrival = control_down_[sw - 1].enqueue(sim_.now(), bits);
    sim_.schedule(arrival + config_.timing.switch_processing, std::move(on_done));
}

void Network::dispatch(const ctrl::ControlAction& action) {
    trace("controller", "action", ctrl::describe(action));
    if (const auto* fm = std::get_if<ctrl::FlowMod>(&action)) {
        ++sim_.counters().flow_mods;
        to_switch(fm->switch_id, [this, fm = *fm] {
            const auto r = switches_[fm.switch_id - 1].apply_flow_mod(fm.rule, fm.op);
            if (r == net::FlowModResult::RemovedNonexistent) {
                trace(sw_name(fm.switch_id), "warn",
                      "remove of unknown rule " + std::to_string(fm.rule.id));
            }
        });
    } else if (const auto* po = std::get_if<ctrl::PacketOut>(&action)) {
        ++sim_.counters().packet_outs;
        to_switch(po->switch_id, [this, po = *po] {
            for (PortId p : po.ports) transmit(po.switch_id, p, po.frame);
        });
    } else if (const auto* send = std::get_if<ctrl::SendSd>(&action)) {
        const auto at = topology_.attachment_of(send->to.address);
        if (!at) throw ctrl::UnattachedEndpointError("no host at " + send->to.to_string());
        dispatch(ctrl::PacketOut{
            at->switch_id, {at->port}, topology_.sd_frame(send->message, send->to)});
    }
}

void Network::host_receive(std::size_t h, const FramePtr& frame) {
    ++sim_.counters().frames_received;
    const auto& info = topology_.hosts()[h];
    if (!frame->dst_mac.is_group() && frame->dst_mac != info.mac) return;
    auto decoded = sd::decode(frame->payload);
    if (!decoded.ok()) {
        ++sim_.counters().malformed;
        return;
    }
    const auto& msg = *decoded.message;
    trace(info.name, "recv", frame_detail(*frame));

    std::optional<host::Outgoing> reply;
    auto& slot = hosts_[h];
    if (slot.producer) {
        reply = producers_[slot.app].on_sd_message(msg, sim_.now());
    } else {
        auto& app = consumers_[slot.app];
        const auto before = app.subscribed().size();
        reply = app.on_sd_message(msg, sim_.now());
        if (app.subscribed().size() > before) sim_.mark_ack(sim_.now());
        if (msg.is_nack()) ++sim_.counters().negative_acks;
    }
    if (reply) host_send(h, *reply);
}

std::vector<std::string> check_paths(const Network& network) {
    std::vector<std::string> problems;
    const auto* ctl = network.aware_controller();
    if (ctl == nullptr) return problems;
    const auto& topo = network.topology();

    for (const auto& [key, rec] : ctl->subscriptions()) {
        if (rec.state != ctrl::SubscriptionState::Active) continue;
        const std::string who =
            rec.identity.to_string() + " -> " + rec.subscriber_endpoint.to_string();
        const auto flow = ctrl::event_flow_for(rec.identity, rec.provider_endpoint);
        const auto sub_at = topo.attachment_of(rec.subscriber_endpoint.address);
        if (rec.installed_rules.empty() || !sub_at) {
            problems.push_back(who + ": no hops");
            continue;
        }
        SwitchId cur = rec.provider_attachment.switch_id;
        for (std::size_t i = 0; i < rec.installed_rules.size(); ++i) {
            const auto& hop = rec.installed_rules[i];
            if (hop.switch_id != cur) {
                problems.push_back(who + ": hop " + std::to_string(i) + " on " +
                                   sw_name(hop.switch_id) + ", expected " + sw_name(cur));
                break;
            }
            const auto* rule = network.switches()[cur - 1].flow_table().find(hop.rule_id);
            net::Frame probe;
            probe.dst = flow.destination;
            if (rule == nullptr || !rule->match.matches(probe, 0)) {
                problems.push_back(who + ": rule missing on " + sw_name(cur));
                break;
            }
            const auto outs = rule->output_ports();
            if (std::find(outs.begin(), outs.end(), hop.out_port) == outs.end()) {
                problems.push_back(who + ": " + sw_name(cur) + " lacks output " +
                                   std::to_string(hop.out_port));
                break;
            }
            if (i + 1 == rec.installed_rules.size()) {
                if (net::Attachment{cur, hop.out_port} != *sub_at) {
                    problems.push_back(who + ": path ends away from subscriber");
                }
                break;
            }
            const auto peer = topo.peer_of({cur, hop.out_port});
            if (!peer) {
                problems.push_back(who + ": " + sw_name(cur) + " output leads to a host");
                break;
            }
            cur = peer->switch_id;
        }
    }
    return problems;
}

std::size_t dynamic_rule_count(const Network& network) {
    std::size_t n = 0;
    for (const auto& sw : network.switches()) {
        for (const auto& rule : sw.flow_table().rules()) {
            if (rule.id != ctrl::kPuntRuleId) ++n;
        }
    }
    return n;
}

}  // namespace soasim::scenario
