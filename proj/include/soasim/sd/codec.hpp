#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "soasim/sd/message.hpp"

namespace soasim::sd {

// Fixed 32-byte big-endian record, see docs/sd-wire-format.md.
//
//  off  size  field
//    0     1  kind (entry type)
//    1     1  flags (bit 0: endpoint present; bits 1..7 reserved, zero)
//    2     2  service id
//    4     2  instance id
//    6     1  major version
//    7     3  ttl (seconds)
//   10     4  minor version
//   14     4  endpoint address
//   18     2  endpoint port
//   20     1  endpoint L4 protocol (0x11 UDP, 0x06 TCP)
//   21     4  sender address
//   25     2  sender port
//   27     1  sender L4 protocol
//   28     2  session id
//   30     2  padding, zero
inline constexpr std::size_t kEncodedSize = 32;

enum class DecodeError : std::uint8_t {
    None,
    WrongLength,
    UnknownKind,
    ReservedBitsSet,
    BadTransport,
    InconsistentEndpoint,
};

[[nodiscard]] const char* to_string(DecodeError error);

struct DecodeResult {
    std::optional<SdMessage> message;
    DecodeError error{DecodeError::None};

    [[nodiscard]] bool ok() const { return message.has_value(); }
};

/// Encoded size for a message kind. Every kind currently shares one layout.
[[nodiscard]] constexpr std::size_t encoded_size(SdKind) { return kEncodedSize; }

/// Serializes a well-formed message. Behaviour on malformed input is
/// unspecified (the endpoint slot keeps whichever endpoint the kind uses).
[[nodiscard]] std::vector<std::uint8_t> encode(const SdMessage& msg);

[[nodiscard]] DecodeResult decode(std::span<const std::uint8_t> bytes);

}  // namespace soasim::sd
