#include "fedscreen/wire.hpp"

#include <algorithm>

#include "fedscreen/errors.hpp"

namespace fedscreen {
namespace {

std::size_t key_offset(std::string_view bytes, std::string_view key) {
  const std::string needle = "\"" + std::string(key) + "\":";
  const auto pos = bytes.find(needle);
  return pos == std::string_view::npos ? 0 : pos;
}

std::optional<MessageType> parse_message_type(std::string_view text) {
  for (MessageType t : {MessageType::kRegister, MessageType::kBroadcast, MessageType::kUpdate,
                        MessageType::kComplete}) {
    if (text == to_string(t)) return t;
  }
  return std::nullopt;
}

SourceId source_from_json(const Json& j) {
  const auto id = parse_source_id(j.get<std::string>());
  if (!id) throw ProtocolError(0, "unknown client id '" + j.get<std::string>() + "'");
  return *id;
}

// Decodes an envelope of the expected type and runs `read` on its payload,
// reporting payload problems at the payload's offset.
template <typename Read>
auto decode_typed(std::string_view bytes, MessageType expected, Read read) {
  const Envelope envelope = decode_message(bytes);
  if (envelope.type != expected) {
    throw ProtocolError(key_offset(bytes, "msg_type"),
                        "expected " + std::string(to_string(expected)) + " message, got " +
                            std::string(to_string(envelope.type)));
  }
  try {
    return read(envelope.payload);
  } catch (const ProtocolError& e) {
    throw ProtocolError(key_offset(bytes, "payload"), e.what());
  } catch (const Json::exception& e) {
    throw ProtocolError(key_offset(bytes, "payload"), std::string("bad payload: ") + e.what());
  } catch (const Error& e) {
    throw ProtocolError(key_offset(bytes, "payload"), e.what());
  }
}

}  // namespace

std::string_view to_string(MessageType type) {
  switch (type) {
    case MessageType::kRegister:
      return "register";
    case MessageType::kBroadcast:
      return "broadcast";
    case MessageType::kUpdate:
      return "update";
    case MessageType::kComplete:
      return "complete";
  }
  return "unknown";
}

std::string encode_message(const Envelope& envelope) {
  return canonical_dump({{"msg_type", std::string(to_string(envelope.type))},
                         {"payload", envelope.payload},
                         {"round_index", envelope.round_index},
                         {"version", envelope.version}});
}

Envelope decode_message(std::string_view bytes) {
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and runs one past the end on truncated input.
    const std::size_t at = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, bytes.size());
    throw ProtocolError(at, "malformed JSON");
  }
  if (!j.is_object()) throw ProtocolError(0, "message is not a JSON object");
  for (const char* key : {"msg_type", "payload", "round_index", "version"}) {
    if (!j.contains(key)) throw ProtocolError(0, std::string("missing field '") + key + "'");
  }
  Envelope envelope;
  const Json& version = j.at("version");
  if (!version.is_number_integer() || version.get<long long>() != kProtocolVersion) {
    throw ProtocolError(key_offset(bytes, "version"),
                        "unsupported protocol version " + version.dump());
  }
  const Json& type = j.at("msg_type");
  const auto parsed = type.is_string() ? parse_message_type(type.get<std::string>()) : std::nullopt;
  if (!parsed) throw ProtocolError(key_offset(bytes, "msg_type"), "unknown msg_type " + type.dump());
  envelope.type = *parsed;
  const Json& round = j.at("round_index");
  if (!round.is_number_integer() || round.get<long long>() < 0) {
    throw ProtocolError(key_offset(bytes, "round_index"), "round_index must be a non-negative integer");
  }
  envelope.round_index = round.get<int>();
  envelope.payload = j.at("payload");
  if (!envelope.payload.is_object()) {
    throw ProtocolError(key_offset(bytes, "payload"), "payload must be an object");
  }
  return envelope;
}

// ---- payloads --------------------------------------------------------------

Json to_json(const ClientUpdate& update) {
  return {{"client_id", std::string(to_string(update.client_id))},
          {"params", to_json(update.params)},
          {"n_samples", update.n_samples},
          {"local_validation_accuracy", update.local_validation_accuracy},
          {"received_hinge_sum",
           update.received_hinge_sum ? Json(*update.received_hinge_sum) : Json(nullptr)}};
}

ClientUpdate client_update_from_json(const Json& j) {
  ClientUpdate u{source_from_json(j.at("client_id")), model_params_from_json(j.at("params")),
                 j.at("n_samples").get<std::uint64_t>(),
                 j.at("local_validation_accuracy").get<double>(), std::nullopt};
  const Json& hinge = j.at("received_hinge_sum");
  if (!hinge.is_null()) u.received_hinge_sum = hinge.get<double>();
  if (u.local_validation_accuracy < 0.0 || u.local_validation_accuracy > 1.0) {
    throw ProtocolError(0, "validation accuracy outside [0, 1]");
  }
  return u;
}

Json to_json(const Registration& registration) {
  return {{"client_id", std::string(to_string(registration.client_id))},
          {"n_samples", registration.n_samples},
          {"stats",
           {{"count", registration.stats.count()},
            {"sums", registration.stats.sums()},
            {"sum_squares", registration.stats.sum_squares()}}}};
}

Registration registration_from_json(const Json& j) {
  const Json& stats = j.at("stats");
  return {source_from_json(j.at("client_id")), j.at("n_samples").get<std::uint64_t>(),
          SufficientStats::from_parts(stats.at("count").get<std::uint64_t>(),
                                      stats.at("sums").get<std::vector<double>>(),
                                      stats.at("sum_squares").get<std::vector<double>>())};
}

Json to_json(const Broadcast& broadcast) {
  return {{"global", broadcast.global ? to_json(*broadcast.global) : Json(nullptr)},
          {"standardization",
           {{"means", broadcast.standardization.means},
            {"scales", broadcast.standardization.scales}}},
          {"total_samples", broadcast.total_samples},
          {"local_epochs", broadcast.local_epochs}};
}

Broadcast broadcast_from_json(const Json& j) {
  Broadcast b;
  const Json& global = j.at("global");
  if (!global.is_null()) b.global = model_params_from_json(global);
  const Json& s = j.at("standardization");
  b.standardization.means = s.at("means").get<std::vector<double>>();
  b.standardization.scales = s.at("scales").get<std::vector<double>>();
  if (b.standardization.means.size() != b.standardization.scales.size()) {
    throw ProtocolError(0, "standardization vectors differ in length");
  }
  b.total_samples = j.at("total_samples").get<std::uint64_t>();
  b.local_epochs = j.at("local_epochs").get<int>();
  if (b.local_epochs < 0) throw ProtocolError(0, "local_epochs must be non-negative");
  return b;
}

// ---- whole messages --------------------------------------------------------

std::string encode_update(const ClientUpdate& update, int round_index) {
  return encode_message({kProtocolVersion, MessageType::kUpdate, round_index, to_json(update)});
}

ClientUpdate decode_update(std::string_view bytes) {
  return decode_typed(bytes, MessageType::kUpdate, client_update_from_json);
}

std::string encode_registration(const Registration& registration) {
  return encode_message({kProtocolVersion, MessageType::kRegister, 0, to_json(registration)});
}

Registration decode_registration(std::string_view bytes) {
  return decode_typed(bytes, MessageType::kRegister, registration_from_json);
}

std::string encode_broadcast(const Broadcast& broadcast, int round_index) {
  return encode_message(
      {kProtocolVersion, MessageType::kBroadcast, round_index, to_json(broadcast)});
}

Broadcast decode_broadcast(std::string_view bytes) {
  return decode_typed(bytes, MessageType::kBroadcast, broadcast_from_json);
}

std::string encode_complete(const GlobalModel& model, int round_index) {
  return encode_message({kProtocolVersion, MessageType::kComplete, round_index, model.to_json()});
}

GlobalModel decode_complete(std::string_view bytes) {
  return decode_typed(bytes, MessageType::kComplete, GlobalModel::from_json);
}

}  // namespace fedscreen
