#include "soasim/sd/codec.hpp"

#include <array>

namespace soasim::sd {

namespace {

constexpr std::uint8_t kFlagEndpoint = 0x01;
constexpr std::uint8_t kProtoUdp = 0x11;
constexpr std::uint8_t kProtoTcp = 0x06;

class Writer {
public:
    explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }
    void u24(std::uint32_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 16));
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }
    void u32(std::uint32_t v) {
        u16(static_cast<std::uint16_t>(v >> 16));
        u16(static_cast<std::uint16_t>(v));
    }
    void endpoint(const Endpoint& ep) {
        u32(ep.address.value);
        u16(ep.port);
        u8(ep.transport == Transport::Tcp ? kProtoTcp : kProtoUdp);
    }
    void zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }

private:
    std::vector<std::uint8_t>& out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint8_t u8() { return in_[pos_++]; }
    std::uint16_t u16() {
        const auto hi = u8();
        return static_cast<std::uint16_t>((hi << 8) | u8());
    }
    std::uint32_t u24() {
        std::uint32_t v = u8();
        v = (v << 8) | u8();
        return (v << 8) | u8();
    }
    std::uint32_t u32() {
        const std::uint32_t hi = u16();
        return (hi << 16) | u16();
    }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_{0};
};

bool kind_uses_endpoint(SdKind kind) { return kind != SdKind::Find; }

std::optional<SdKind> kind_from_tag(std::uint8_t tag) {
    switch (tag) {
        case 0x00: return SdKind::Find;
        case 0x01: return SdKind::Offer;
        case 0x06: return SdKind::Subscribe;
        case 0x07: return SdKind::SubscribeAck;
        default: return std::nullopt;
    }
}

std::optional<Transport> transport_from_proto(std::uint8_t proto) {
    if (proto == kProtoUdp) return Transport::Udp;
    if (proto == kProtoTcp) return Transport::Tcp;
    return std::nullopt;
}

DecodeResult fail(DecodeError e) { return DecodeResult{std::nullopt, e}; }

}  // namespace

const char* to_string(DecodeError error) {
    switch (error) {
        case DecodeError::None: return "none";
        case DecodeError::WrongLength: return "wrong length";
        case DecodeError::UnknownKind: return "unknown kind";
        case DecodeError::ReservedBitsSet: return "reserved bits set";
        case DecodeError::BadTransport: return "bad transport";
        case DecodeError::InconsistentEndpoint: return "inconsistent endpoint";
    }
    return "?";
}

std::vector<std::uint8_t> encode(const SdMessage& msg) {
    std::vector<std::uint8_t> out;
    out.reserve(kEncodedSize);
    Writer w(out);

    const std::optional<Endpoint>& ep =
        msg.kind == SdKind::Offer ? msg.provider_endpoint : msg.consumer_endpoint;
    const bool has_ep = kind_uses_endpoint(msg.kind) && ep.has_value();

    w.u8(static_cast<std::uint8_t>(msg.kind));
    w.u8(has_ep ? kFlagEndpoint : 0);
    w.u16(msg.identity.service_id);
    w.u16(msg.identity.instance_id);
    w.u8(msg.identity.major_version);
    w.u24(msg.ttl_seconds & kMaxTtl);
    w.u32(msg.identity.minor_version);
    if (has_ep) {
        w.endpoint(*ep);
    } else {
        w.zeros(7);
    }
    w.endpoint(msg.sender);
    w.u16(msg.session_id);
    w.zeros(2);
    return out;
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kEncodedSize) return fail(DecodeError::WrongLength);

    Reader r(bytes);
    const auto kind = kind_from_tag(r.u8());
    if (!kind) return fail(DecodeError::UnknownKind);

    const std::uint8_t flags = r.u8();
    if ((flags & ~kFlagEndpoint) != 0) return fail(DecodeError::ReservedBitsSet);
    const bool has_ep = (flags & kFlagEndpoint) != 0;
    if (has_ep != kind_uses_endpoint(*kind)) return fail(DecodeError::InconsistentEndpoint);

    SdMessage msg;
    msg.kind = *kind;
    msg.identity.service_id = r.u16();
    msg.identity.instance_id = r.u16();
    msg.identity.major_version = r.u8();
    msg.ttl_seconds = r.u24();
    msg.identity.minor_version = r.u32();

    Endpoint ep;
    ep.address.value = r.u32();
    ep.port = r.u16();
    const std::uint8_t ep_proto = r.u8();
    if (has_ep) {
        const auto t = transport_from_proto(ep_proto);
        if (!t) return fail(DecodeError::BadTransport);
        ep.transport = *t;
        if (msg.kind == SdKind::Offer) {
            msg.provider_endpoint = ep;
        } else {
            msg.consumer_endpoint = ep;
        }
    } else if (ep.address.value != 0 || ep.port != 0 || ep_proto != 0) {
        return fail(DecodeError::ReservedBitsSet);
    }

    msg.sender.address.value = r.u32();
    msg.sender.port = r.u16();
    const auto sender_t = transport_from_proto(r.u8());
    if (!sender_t) return fail(DecodeError::BadTransport);
    msg.sender.transport = *sender_t;
    msg.session_id = r.u16();
    if (r.u16() != 0) return fail(DecodeError::ReservedBitsSet);

    return DecodeResult{msg, DecodeError::None};
}

}  // namespace soasim::sd
