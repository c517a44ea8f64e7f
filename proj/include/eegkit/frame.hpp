#pragma once

#include "eegkit/recording.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace eegkit {

// Wire layout (little-endian): magic 0x45 0x47, kind u8, len u16, payload,
// crc32 u32 over kind+len+payload. Kinds: 1 header, 2 samples, 3 marker,
// 4 end (empty payload, 9 bytes total).

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadMagicError : ProtocolError { using ProtocolError::ProtocolError; };
struct BadChecksumError : ProtocolError { using ProtocolError::ProtocolError; };
struct TruncationError : ProtocolError { using ProtocolError::ProtocolError; };
struct UnknownKindError : ProtocolError { using ProtocolError::ProtocolError; };
struct PayloadError : ProtocolError { using ProtocolError::ProtocolError; };
struct OversizeError : ProtocolError { using ProtocolError::ProtocolError; };

struct StreamHeader {
  uint32_t rate{0};  // Hz
  std::vector<std::string> channels;
  std::string session_id;

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

// One chunk of samples, packed channel-major per time point:
// data[t * n_channels + c] is channel c at absolute sample first_sample + t.
// The channel count is carried by the session's header frame, not here.
struct SamplesChunk {
  uint64_t first_sample{0};
  std::vector<float> data;

  friend bool operator==(const SamplesChunk&, const SamplesChunk&) = default;
};

struct EndFrame {
  friend bool operator==(const EndFrame&, const EndFrame&) = default;
};

using Frame = std::variant<StreamHeader, SamplesChunk, EventMarker, EndFrame>;

// CRC-32 (IEEE 802.3, reflected). crc32("123456789") == 0xCBF43926.
uint32_t crc32(const uint8_t* data, size_t n);

std::vector<uint8_t> encode_frame(const Frame& f);  // throws OversizeError

// Decodes one frame from the start of the buffer; sets `consumed` to the
// bytes it used. Throws a distinct ProtocolError subclass per failure and
// never reads past the declared frame length.
Frame decode_frame(const uint8_t* data, size_t n, size_t& consumed);

// Incremental decoder for a byte stream arriving in arbitrary pieces.
class StreamDecoder {
public:
  void feed(const uint8_t* data, size_t n) { buf_.insert(buf_.end(), data, data + n); }

  // Next complete frame, or false if more bytes are needed. Throws like
  // decode_frame on corrupt input.
  bool next(Frame& out);

  size_t buffered() const { return buf_.size() - pos_; }

private:
  std::vector<uint8_t> buf_;
  size_t pos_{0};
};

} // namespace eegkit
