#include "soasim/sd/message.hpp"

#include <cstdio>

namespace soasim::sd {

std::string Ipv4Address::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", (value >> 24) & 0xFF, (value >> 16) & 0xFF,
                  (value >> 8) & 0xFF, value & 0xFF);
    return buf;
}

std::string Endpoint::to_string() const {
    return address.to_string() + ":" + std::to_string(port) +
           (transport == Transport::Tcp ? "/tcp" : "/udp");
}

std::string ServiceIdentity::to_string() const {
    char buf[64];
    auto field = [](std::uint32_t v, std::uint32_t any, char* out, std::size_t n, bool hex) {
        if (v == any) {
            std::snprintf(out, n, "*");
        } else {
            std::snprintf(out, n, hex ? "0x%04x" : "%u", v);
        }
    };
    char inst[12], maj[12], min[12];
    field(instance_id, kAnyInstance, inst, sizeof inst, true);
    field(major_version, kAnyMajor, maj, sizeof maj, false);
    field(minor_version, kAnyMinor, min, sizeof min, false);
    std::snprintf(buf, sizeof buf, "0x%04x/%s v%s.%s", service_id, inst, maj, min);
    return buf;
}

const char* to_string(SdKind kind) {
    switch (kind) {
        case SdKind::Find: return "find";
        case SdKind::Offer: return "offer";
        case SdKind::Subscribe: return "subscribe";
        case SdKind::SubscribeAck: return "subscribeAck";
    }
    return "?";
}

bool SdMessage::is_well_formed() const {
    if (ttl_seconds > kMaxTtl || sender.port == 0) return false;
    if (identity.service_id == 0xFFFF) return false;
    switch (kind) {
        case SdKind::Find: return !provider_endpoint && !consumer_endpoint;
        case SdKind::Offer:
            return identity.is_concrete() && provider_endpoint && provider_endpoint->port > 0 &&
                   !consumer_endpoint;
        case SdKind::Subscribe:
        case SdKind::SubscribeAck:
            return identity.is_concrete() && consumer_endpoint && consumer_endpoint->port > 0 &&
                   !provider_endpoint;
    }
    return false;
}

std::string SdMessage::to_string() const {
    std::string s = sd::to_string(kind);
    s += " ";
    s += identity.to_string();
    s += " ttl=" + std::to_string(ttl_seconds);
    if (provider_endpoint) s += " provider=" + provider_endpoint->to_string();
    if (consumer_endpoint) s += " consumer=" + consumer_endpoint->to_string();
    s += " from=" + sender.to_string();
    return s;
}

}  // namespace soasim::sd
