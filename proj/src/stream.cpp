#include "eegkit/stream.hpp"

#include "eegkit/frame.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace eegkit {

namespace {

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

bool send_all(int fd, const uint8_t* data, size_t n) {
  size_t sent = 0;
  while (sent < n) {
    const ssize_t k = ::send(fd, data + sent, n - sent, MSG_NOSIGNAL);
    if (k <= 0) return false;
    sent += static_cast<size_t>(k);
  }
  return true;
}

} // namespace

void parse_endpoint(const std::string& endpoint, std::string& host, uint16_t& port) {
  const size_t colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0)
    throw std::runtime_error("parse_endpoint: expected host:port, got '" + endpoint + "'");
  host = endpoint.substr(0, colon);
  const std::string port_str = endpoint.substr(colon + 1);
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(port_str.data(), port_str.data() + port_str.size(), v);
  if (ec != std::errc() || ptr != port_str.data() + port_str.size() || v > 65535)
    throw std::runtime_error("parse_endpoint: bad port in '" + endpoint + "'");
  port = static_cast<uint16_t>(v);
}

std::string resolve_endpoint(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kEndpointEnvVar); env && *env) return env;
  return kDefaultEndpoint;
}

StreamServer::StreamServer(Recording rec, ServeOptions opt)
    : rec_(std::move(rec)), opt_(std::move(opt)) {
  rec_.validate();
  if (opt_.realtime_factor < 0.0)
    throw std::runtime_error("StreamServer: realtime_factor must be >= 0");
  if (opt_.chunk_samples == 0)
    throw std::runtime_error("StreamServer: chunk_samples must be positive");
}

StreamServer::~StreamServer() { stop(); }

void StreamServer::start() {
  std::string host;
  uint16_t port = 0;
  parse_endpoint(opt_.endpoint, host, port);

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("StreamServer: socket() failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    close_fd(listen_fd_);
    throw std::runtime_error("StreamServer: bad host address '" + host + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    close_fd(listen_fd_);
    throw std::runtime_error("StreamServer: cannot bind " + opt_.endpoint + ": " +
                             std::strerror(errno));
  }
  if (::listen(listen_fd_, 16) != 0) {
    close_fd(listen_fd_);
    throw std::runtime_error("StreamServer: listen() failed");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void StreamServer::stop() {
  if (!running_.exchange(false)) {
    if (accept_thread_.joinable()) accept_thread_.join();
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  close_fd(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();
  for (auto& t : client_threads_)
    if (t.joinable()) t.join();
  client_threads_.clear();
}

void StreamServer::wait_for_sessions(int n) {
  while (sessions_done_.load() < n)
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
}

void StreamServer::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) break;  // listener closed by stop()
    if (opt_.max_sessions > 0 && sessions_started_.load() >= opt_.max_sessions) {
      ::close(fd);
      continue;
    }
    sessions_started_.fetch_add(1);
    client_threads_.emplace_back([this, fd] { serve_client(fd); });
    if (opt_.max_sessions > 0 && sessions_started_.load() >= opt_.max_sessions) break;
  }
}

void StreamServer::serve_client(int fd) {
  const size_t n_samples = rec_.n_samples();
  const size_t n_channels = rec_.n_channels();

  StreamHeader header;
  header.rate = static_cast<uint32_t>(rec_.rate);
  header.channels = rec_.channels;
  header.session_id = rec_.meta.count("session_id") ? rec_.meta.at("session_id") : "eegkit";

  bool alive = true;
  auto send_frame = [&](const Frame& f) {
    if (!alive) return;
    const auto bytes = encode_frame(f);
    if (!send_all(fd, bytes.data(), bytes.size())) {
      std::fprintf(stderr, "serve: client disconnected mid-stream\n");
      alive = false;
    }
  };

  send_frame(header);

  const auto chunk_period =
      opt_.realtime_factor > 0.0
          ? std::chrono::duration<double>(static_cast<double>(opt_.chunk_samples) /
                                          (rec_.rate * opt_.realtime_factor))
          : std::chrono::duration<double>(0.0);
  auto next_deadline = std::chrono::steady_clock::now();

  size_t marker_at = 0;
  for (size_t start = 0; start < n_samples && alive && running_; start += opt_.chunk_samples) {
    const size_t end = std::min(n_samples, start + opt_.chunk_samples);
    while (marker_at < rec_.markers.size() && rec_.markers[marker_at].sample < end) {
      send_frame(rec_.markers[marker_at]);
      ++marker_at;
    }
    SamplesChunk chunk;
    chunk.first_sample = start;
    chunk.data.reserve((end - start) * n_channels);
    for (size_t s = start; s < end; ++s)
      for (size_t c = 0; c < n_channels; ++c) chunk.data.push_back(rec_.data[c][s]);
    send_frame(chunk);

    if (opt_.realtime_factor > 0.0) {
      next_deadline += std::chrono::duration_cast<std::chrono::steady_clock::duration>(chunk_period);
      std::this_thread::sleep_until(next_deadline);
    }
  }
  // markers at/after the final sample index (e.g. empty recording edge)
  while (alive && marker_at < rec_.markers.size()) {
    send_frame(rec_.markers[marker_at]);
    ++marker_at;
  }
  send_frame(EndFrame{});
  ::close(fd);
  sessions_done_.fetch_add(1);
}

RecordResult record_stream(const std::string& endpoint) {
  std::string host;
  uint16_t port = 0;
  parse_endpoint(endpoint, host, port);

  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("record: socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw std::runtime_error("record: bad host address '" + host + "'");
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string why = std::strerror(errno);
    ::close(fd);
    throw std::runtime_error("record: cannot connect to " + endpoint + ": " + why);
  }
  timeval tv{30, 0};
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));

  RecordResult result;
  StreamDecoder decoder;
  bool have_header = false;
  bool done = false;
  size_t n_channels = 0;
  uint8_t buf[65536];

  try {
    while (!done) {
      const ssize_t k = ::recv(fd, buf, sizeof(buf), 0);
      if (k <= 0) break;  // disconnect or timeout: incomplete unless end seen
      decoder.feed(buf, static_cast<size_t>(k));
      Frame f;
      while (!done && decoder.next(f)) {
        if (const auto* h = std::get_if<StreamHeader>(&f)) {
          result.rec.rate = h->rate;
          result.rec.channels = h->channels;
          result.rec.meta["session_id"] = h->session_id;
          n_channels = h->channels.size();
          result.rec.data.assign(n_channels, {});
          have_header = true;
        } else if (const auto* s = std::get_if<SamplesChunk>(&f)) {
          if (!have_header)
            throw ProtocolError("record: samples frame before header");
          if (n_channels == 0 || s->data.size() % n_channels != 0)
            throw PayloadError("record: samples frame not divisible by channel count");
          if (s->first_sample != result.rec.n_samples())
            throw ProtocolError("record: out-of-order samples frame");
          const size_t points = s->data.size() / n_channels;
          for (size_t t = 0; t < points; ++t)
            for (size_t c = 0; c < n_channels; ++c)
              result.rec.data[c].push_back(s->data[t * n_channels + c]);
        } else if (const auto* m = std::get_if<EventMarker>(&f)) {
          result.rec.markers.push_back(*m);
        } else {
          result.complete = true;
          done = true;
        }
      }
    }
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  if (!have_header) throw ProtocolError("record: stream ended before a header frame");
  if (!result.complete) result.rec.meta["incomplete"] = "true";
  return result;
}

} // namespace eegkit
