#include "soasim/ctrl/topology.hpp"

#include <algorithm>
#include <deque>

#include "soasim/sd/codec.hpp"

namespace soasim::ctrl {

SwitchId Topology::add_switch() {
    ports_.push_back(0);
    return static_cast<SwitchId>(ports_.size());
}

PortId Topology::port_count(SwitchId sw) const {
    if (sw == 0 || sw > ports_.size()) throw std::out_of_range("unknown switch");
    return ports_[sw - 1];
}

SwitchLink Topology::connect(SwitchId a, SwitchId b) {
    if (a == b) throw std::invalid_argument("self link");
    const SwitchLink link{{a, ++ports_.at(a - 1)}, {b, ++ports_.at(b - 1)}};
    links_.push_back(link);
    peers_[link.a] = link.b;
    peers_[link.b] = link.a;
    return link;
}

const HostInfo& Topology::attach_host(std::string name, sd::Ipv4Address address,
                                      net::MacAddress mac, SwitchId sw) {
    if (host_index_.contains(address)) throw std::invalid_argument("duplicate host address");
    const Attachment at{sw, ++ports_.at(sw - 1)};
    host_index_[address] = hosts_.size();
    host_ports_[at] = hosts_.size();
    hosts_.push_back(HostInfo{std::move(name), address, mac, at});
    return hosts_.back();
}

const HostInfo* Topology::host_by_address(sd::Ipv4Address address) const {
    auto it = host_index_.find(address);
    return it == host_index_.end() ? nullptr : &hosts_[it->second];
}

std::optional<Attachment> Topology::attachment_of(sd::Ipv4Address address) const {
    if (const auto* h = host_by_address(address)) return h->attachment;
    return std::nullopt;
}

bool Topology::is_host_port(Attachment at) const { return host_ports_.contains(at); }

std::vector<PortId> Topology::host_ports(SwitchId sw) const {
    std::vector<PortId> out;
    for (auto it = host_ports_.lower_bound(Attachment{sw, 0});
         it != host_ports_.end() && it->first.switch_id == sw; ++it) {
        out.push_back(it->first.port);
    }
    return out;
}

std::optional<Attachment> Topology::peer_of(Attachment at) const {
    auto it = peers_.find(at);
    if (it == peers_.end()) return std::nullopt;
    return it->second;
}

std::vector<SwitchId> Topology::shortest_path(SwitchId from, SwitchId to) const {
    const std::size_t n = ports_.size();
    if (from == 0 || to == 0 || from > n || to > n) throw NoPathError("unknown switch");

    // Neighbour lists sorted ascending so BFS discovers the smallest
    // predecessor first.
    std::vector<std::vector<SwitchId>> adj(n + 1);
    for (const auto& l : links_) {
        adj[l.a.switch_id].push_back(l.b.switch_id);
        adj[l.b.switch_id].push_back(l.a.switch_id);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());

    // BFS from the destination gives distances; then walk greedily from the
    // source picking the lowest-id neighbour that is one step closer.
    std::vector<int> dist(n + 1, -1);
    std::deque<SwitchId> q{to};
    dist[to] = 0;
    while (!q.empty()) {
        const SwitchId u = q.front();
        q.pop_front();
        for (SwitchId v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    if (dist[from] < 0) {
        throw NoPathError("no path from S" + std::to_string(from) + " to S" + std::to_string(to));
    }

    std::vector<SwitchId> path{from};
    SwitchId cur = from;
    while (cur != to) {
        for (SwitchId v : adj[cur]) {
            if (dist[v] == dist[cur] - 1) {
                cur = v;
                break;
            }
        }
        path.push_back(cur);
    }
    return path;
}

PortId Topology::port_towards(SwitchId sw, SwitchId next) const {
    PortId best = 0;
    for (const auto& l : links_) {
        if (l.a.switch_id == sw && l.b.switch_id == next && (best == 0 || l.a.port < best)) {
            best = l.a.port;
        }
        if (l.b.switch_id == sw && l.a.switch_id == next && (best == 0 || l.b.port < best)) {
            best = l.b.port;
        }
    }
    if (best == 0) {
        throw NoPathError("S" + std::to_string(sw) + " has no link to S" + std::to_string(next));
    }
    return best;
}

bool Topology::is_connected() const {
    if (ports_.empty()) return false;
    for (SwitchId s = 2; s <= ports_.size(); ++s) {
        try {
            (void)shortest_path(1, s);
        } catch (const NoPathError&) {
            return false;
        }
    }
    return true;
}

net::FramePtr Topology::sd_frame(const sd::SdMessage& msg, const sd::Endpoint& to) const {
    auto frame = std::make_shared<net::Frame>();
    const auto* src = host_by_address(msg.sender.address);
    frame->src_mac = src != nullptr ? src->mac : kControllerMac;
    if (to.address.is_multicast()) {
        frame->dst_mac = net::MacAddress::for_multicast(to.address);
    } else {
        const auto* dst = host_by_address(to.address);
        if (dst == nullptr) throw std::out_of_range("no host with address " + to.to_string());
        frame->dst_mac = dst->mac;
    }
    frame->src = msg.sender;
    frame->dst = to;
    frame->payload = sd::encode(msg);
    return frame;
}

}  // namespace soasim::ctrl
