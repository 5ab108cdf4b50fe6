#pragma once

// Message envelope exchanged between clients and the coordinator:
//
//   {"msg_type": "register|broadcast|update|complete",
//    "payload": {...}, "round_index": n, "version": 1}
//
// encoded as canonical JSON. On a byte stream each envelope is preceded by
// a 4-byte big-endian length (see framing.hpp).

#include <optional>
#include <string>
#include <string_view>

#include "fedscreen/canonical_json.hpp"
#include "fedscreen/federation.hpp"

namespace fedscreen {

inline constexpr int kProtocolVersion = 1;

enum class MessageType { kRegister, kBroadcast, kUpdate, kComplete };

std::string_view to_string(MessageType type);

struct Envelope {
  int version = kProtocolVersion;
  MessageType type = MessageType::kUpdate;
  int round_index = 0;
  Json payload = Json::object();

  bool operator==(const Envelope&) const = default;
};

std::string encode_message(const Envelope& envelope);

// Throws ProtocolError carrying the byte offset of the problem: the parser
// position for syntax errors, the start of the payload for payload errors.
Envelope decode_message(std::string_view bytes);

// ---- typed payloads --------------------------------------------------------

struct Broadcast {
  std::optional<ModelParams> global;
  Standardization standardization;
  std::uint64_t total_samples = 0;
  int local_epochs = 0;

  bool operator==(const Broadcast&) const = default;
};

Json to_json(const ClientUpdate& update);
ClientUpdate client_update_from_json(const Json& j);

Json to_json(const Registration& registration);
Registration registration_from_json(const Json& j);

Json to_json(const Broadcast& broadcast);
Broadcast broadcast_from_json(const Json& j);

// Whole-message helpers. The decoders check msg_type and translate payload
// errors into ProtocolError at the payload offset.
std::string encode_update(const ClientUpdate& update, int round_index);
ClientUpdate decode_update(std::string_view bytes);

std::string encode_registration(const Registration& registration);
Registration decode_registration(std::string_view bytes);

std::string encode_broadcast(const Broadcast& broadcast, int round_index);
Broadcast decode_broadcast(std::string_view bytes);

std::string encode_complete(const GlobalModel& model, int round_index);
GlobalModel decode_complete(std::string_view bytes);

}  // namespace fedscreen
