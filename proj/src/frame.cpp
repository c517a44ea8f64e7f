#include "eegkit/frame.hpp"

#include <array>
#include <cstring>

namespace eegkit {

namespace {

constexpr uint8_t kMagic0 = 0x45;
constexpr uint8_t kMagic1 = 0x47;

std::array<uint32_t, 256> make_crc_table() {
  std::array<uint32_t, 256> table{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint32_t c = i;
    for (int k = 0; k < 8; ++k)
      c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    table[i] = c;
  }
  return table;
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::vector<uint8_t>& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

// Bounds-checked little-endian payload reader.
struct Cursor {
  const uint8_t* p;
  size_t n;
  size_t at{0};

  void need(size_t k) const {
    if (at + k > n) throw PayloadError("decode_frame: payload shorter than declared fields");
  }
  uint8_t u8() { need(1); return p[at++]; }
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(p[at] | (p[at + 1] << 8));
    at += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[at + i]) << (8 * i);
    at += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[at + i]) << (8 * i);
    at += 8;
    return v;
  }
  float f32() {
    const uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  std::string str(size_t len) {
    need(len);
    std::string s(reinterpret_cast<const char*>(p + at), len);
    at += len;
    return s;
  }
};

std::vector<uint8_t> encode_payload(const Frame& f, uint8_t& kind) {
  std::vector<uint8_t> pl;
  if (const auto* h = std::get_if<StreamHeader>(&f)) {
    kind = 1;
    put_u32(pl, h->rate);
    if (h->channels.size() > 255)
      throw OversizeError("encode_frame: more than 255 channels");
    pl.push_back(static_cast<uint8_t>(h->channels.size()));
    for (const auto& ch : h->channels) {
      if (ch.size() > 255) throw OversizeError("encode_frame: channel label too long");
      pl.push_back(static_cast<uint8_t>(ch.size()));
      pl.insert(pl.end(), ch.begin(), ch.end());
    }
    if (h->session_id.size() > 255)
      throw OversizeError("encode_frame: session id too long");
    pl.push_back(static_cast<uint8_t>(h->session_id.size()));
    pl.insert(pl.end(), h->session_id.begin(), h->session_id.end());
  } else if (const auto* s = std::get_if<SamplesChunk>(&f)) {
    kind = 2;
    put_u64(pl, s->first_sample);
    pl.reserve(8 + 4 * s->data.size());
    for (float v : s->data) put_f32(pl, v);
  } else if (const auto* m = std::get_if<EventMarker>(&f)) {
    kind = 3;
    put_u64(pl, m->sample);
    put_u16(pl, m->code);
    if (m->label.size() > 255) throw OversizeError("encode_frame: marker label too long");
    pl.push_back(static_cast<uint8_t>(m->label.size()));
    pl.insert(pl.end(), m->label.begin(), m->label.end());
  } else {
    kind = 4;
  }
  if (pl.size() > 65535) throw OversizeError("encode_frame: payload exceeds 65535 bytes");
  return pl;
}

} // namespace

uint32_t crc32(const uint8_t* data, size_t n) {
  static const auto table = make_crc_table();
  uint32_t c = 0xFFFFFFFFu;
  for (size_t i = 0; i < n; ++i) c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

std::vector<uint8_t> encode_frame(const Frame& f) {
  uint8_t kind = 0;
  const auto payload = encode_payload(f, kind);
  std::vector<uint8_t> out;
  out.reserve(9 + payload.size());
  out.push_back(kMagic0);
  out.push_back(kMagic1);
  out.push_back(kind);
  put_u16(out, static_cast<uint16_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  // CRC covers kind + len + payload (everything after the magic)
  put_u32(out, crc32(out.data() + 2, out.size() - 2));
  return out;
}

Frame decode_frame(const uint8_t* data, size_t n, size_t& consumed) {
  consumed = 0;
  if (n < 2) throw TruncationError("decode_frame: buffer shorter than magic");
  if (data[0] != kMagic0 || data[1] != kMagic1)
    throw BadMagicError("decode_frame: bad magic bytes");
  if (n < 5) throw TruncationError("decode_frame: buffer ends inside frame header");
  const uint8_t kind = data[2];
  const uint16_t len = static_cast<uint16_t>(data[3] | (data[4] << 8));
  const size_t total = 2 + 1 + 2 + static_cast<size_t>(len) + 4;
  if (n < total) throw TruncationError("decode_frame: buffer ends inside frame body");

  uint32_t stored = 0;
  for (int i = 0; i < 4; ++i)
    stored |= static_cast<uint32_t>(data[5 + len + i]) << (8 * i);
  if (crc32(data + 2, 3 + len) != stored)
    throw BadChecksumError("decode_frame: checksum mismatch");

  Cursor cur{data + 5, len};
  Frame out;
  switch (kind) {
    case 1: {
      StreamHeader h;
      h.rate = cur.u32();
      const uint8_t n_ch = cur.u8();
      h.channels.reserve(n_ch);
      for (unsigned i = 0; i < n_ch; ++i) h.channels.push_back(cur.str(cur.u8()));
      h.session_id = cur.str(cur.u8());
      out = std::move(h);
      break;
    }
    case 2: {
      SamplesChunk s;
      s.first_sample = cur.u64();
      const size_t rest = len - cur.at;
      if (rest % 4 != 0)
        throw PayloadError("decode_frame: samples payload not a multiple of 4 bytes");
      s.data.reserve(rest / 4);
      while (cur.at < len) s.data.push_back(cur.f32());
      out = std::move(s);
      break;
    }
    case 3: {
      EventMarker m;
      m.sample = cur.u64();
      m.code = cur.u16();
      m.label = cur.str(cur.u8());
      out = std::move(m);
      break;
    }
    case 4:
      out = EndFrame{};
      break;
    default:
      throw UnknownKindError("decode_frame: unknown frame kind " + std::to_string(kind));
  }
  if (kind != 2 && cur.at != len)
    throw PayloadError("decode_frame: trailing bytes in payload");
  consumed = total;
  return out;
}

bool StreamDecoder::next(Frame& out) {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  if (buf_.size() == pos_) return false;
  size_t consumed = 0;
  try {
    out = decode_frame(buf_.data() + pos_, buf_.size() - pos_, consumed);
  } catch (const TruncationError&) {
    return false;  // wait for more bytes
  }
  pos_ += consumed;
  return true;
}

} // namespace eegkit
