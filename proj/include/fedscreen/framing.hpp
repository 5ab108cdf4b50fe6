#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>

namespace fedscreen {

inline constexpr std::size_t kMaxFrameBytes = 64u << 20;

// 4-byte big-endian length prefix followed by the bytes.
std::string frame_message(std::string_view message);

// Incremental decoder for a stream of frames. Throws ProtocolError when a
// declared length exceeds kMaxFrameBytes.
class FrameDecoder {
 public:
  void feed(std::string_view bytes);
  std::optional<std::string> next();
  std::size_t buffered() const noexcept { return buffer_.size(); }

 private:
  std::string buffer_;
  std::size_t consumed_ = 0;  // total bytes handed out, for error offsets
};

// In-memory byte pipe standing in for a socket: writes append, reads drain
// at most `max_bytes` from the front.
class LoopbackStream {
 public:
  void write(std::string_view bytes) { bytes_.insert(bytes_.end(), bytes.begin(), bytes.end()); }
  std::string read(std::size_t max_bytes);
  bool empty() const noexcept { return bytes_.empty(); }

 private:
  std::deque<char> bytes_;
};

}  // namespace fedscreen
