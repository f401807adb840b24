#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace soasim::sd {

/// IPv4 address in host byte order.
struct Ipv4Address {
    std::uint32_t value{0};

    static constexpr Ipv4Address from_octets(std::uint8_t a, std::uint8_t b, std::uint8_t c,
                                             std::uint8_t d) {
        return Ipv4Address{(std::uint32_t{a} << 24) | (std::uint32_t{b} << 16) |
                           (std::uint32_t{c} << 8) | std::uint32_t{d}};
    }

    [[nodiscard]] constexpr bool is_multicast() const { return (value >> 28) == 0xE; }
    [[nodiscard]] std::string to_string() const;

    auto operator<=>(const Ipv4Address&) const = default;
};

enum class Transport : std::uint8_t { Udp, Tcp };

struct Endpoint {
    Ipv4Address address;
    std::uint16_t port{0};
    Transport transport{Transport::Udp};

    [[nodiscard]] std::string to_string() const;

    auto operator<=>(const Endpoint&) const = default;
};

/// SD port and multicast group shared by every host.
inline constexpr std::uint16_t kSdPort = 30490;
inline constexpr Endpoint kSdMulticast{Ipv4Address::from_octets(239, 255, 0, 1), kSdPort,
                                       Transport::Udp};

inline constexpr std::uint16_t kAnyInstance = 0xFFFF;
inline constexpr std::uint8_t kAnyMajor = 0xFF;
inline constexpr std::uint32_t kAnyMinor = 0xFFFFFFFF;

/// A SOME/IP service identity. Instance and version fields may hold the
/// all-ones wildcard; the service id never does.
struct ServiceIdentity {
    std::uint16_t service_id{0};
    std::uint16_t instance_id{kAnyInstance};
    std::uint8_t major_version{kAnyMajor};
    std::uint32_t minor_version{kAnyMinor};

    static constexpr ServiceIdentity any_instance_of(std::uint16_t service) {
        return ServiceIdentity{service, kAnyInstance, kAnyMajor, kAnyMinor};
    }

    [[nodiscard]] constexpr bool is_concrete() const {
        return instance_id != kAnyInstance && major_version != kAnyMajor &&
               minor_version != kAnyMinor;
    }
    [[nodiscard]] std::string to_string() const;

    auto operator<=>(const ServiceIdentity&) const = default;
};

/// True iff `candidate` satisfies `query`: equal service id and every other
/// field either wildcarded in the query or equal.
[[nodiscard]] constexpr bool matches(const ServiceIdentity& query,
                                     const ServiceIdentity& candidate) {
    return query.service_id == candidate.service_id &&
           (query.instance_id == kAnyInstance || query.instance_id == candidate.instance_id) &&
           (query.major_version == kAnyMajor || query.major_version == candidate.major_version) &&
           (query.minor_version == kAnyMinor || query.minor_version == candidate.minor_version);
}

// Entry type tags follow the AUTOSAR SD entry type codes.
enum class SdKind : std::uint8_t {
    Find = 0x00,
    Offer = 0x01,
    Subscribe = 0x06,
    SubscribeAck = 0x07,
};

[[nodiscard]] const char* to_string(SdKind kind);

inline constexpr std::uint32_t kMaxTtl = 0xFFFFFF;

/// One SD entry. `provider_endpoint` is set for Offer; `consumer_endpoint`
/// is set for Subscribe and SubscribeAck (the subscriber being acknowledged).
/// A zero TTL means withdrawal (Offer, Subscribe) or negative acknowledgement
/// (SubscribeAck).
struct SdMessage {
    SdKind kind{SdKind::Find};
    ServiceIdentity identity;
    std::uint32_t ttl_seconds{0};
    std::optional<Endpoint> provider_endpoint;
    std::optional<Endpoint> consumer_endpoint;
    Endpoint sender;
    std::uint16_t session_id{0};

    [[nodiscard]] bool is_withdrawal() const {
        return ttl_seconds == 0 && (kind == SdKind::Offer || kind == SdKind::Subscribe);
    }
    [[nodiscard]] bool is_nack() const { return ttl_seconds == 0 && kind == SdKind::SubscribeAck; }
    /// Checks the structural invariants the codec relies on.
    [[nodiscard]] bool is_well_formed() const;
    [[nodiscard]] std::string to_string() const;

    bool operator==(const SdMessage&) const = default;
};

}  // namespace soasim::sd
