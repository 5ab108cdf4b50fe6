#include "fedscreen/framing.hpp"

#include <algorithm>

#include "fedscreen/errors.hpp"

namespace fedscreen {

std::string frame_message(std::string_view message) {
  if (message.size() > kMaxFrameBytes) {
    throw ProtocolError(0, "message of " + std::to_string(message.size()) +
                               " bytes exceeds the frame limit");
  }
  const auto n = static_cast<std::uint32_t>(message.size());
  std::string out;
  out.reserve(message.size() + 4);
  for (int shift = 24; shift >= 0; shift -= 8) out += static_cast<char>((n >> shift) & 0xffu);
  out += message;
  return out;
}

void FrameDecoder::feed(std::string_view bytes) { buffer_.append(bytes); }

std::optional<std::string> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<unsigned char>(buffer_[static_cast<std::size_t>(i)]);
  if (n > kMaxFrameBytes) {
    throw ProtocolError(consumed_, "declared frame length " + std::to_string(n) +
                                       " exceeds the limit");
  }
  if (buffer_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
  std::string message = buffer_.substr(4, n);
  buffer_.erase(0, 4 + static_cast<std::size_t>(n));
  consumed_ += 4 + static_cast<std::size_t>(n);
  return message;
}

std::string LoopbackStream::read(std::size_t max_bytes) {
  const std::size_t n = std::min(max_bytes, bytes_.size());
  std::string out(bytes_.begin(), bytes_.begin() + static_cast<std::ptrdiff_t>(n));
  bytes_.erase(bytes_.begin(), bytes_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

}  // namespace fedscreen
