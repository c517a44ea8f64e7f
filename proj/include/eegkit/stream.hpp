#pragma once

#include "eegkit/recording.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

namespace eegkit {

inline constexpr const char* kDefaultEndpoint = "127.0.0.1:8372";
inline constexpr const char* kEndpointEnvVar = "EEGKIT_ENDPOINT";

// "host:port" -> parts; throws on malformed input.
void parse_endpoint(const std::string& endpoint, std::string& host, uint16_t& port);

// Flag value, else EEGKIT_ENDPOINT, else the default.
std::string resolve_endpoint(const std::string& flag_value);

struct ServeOptions {
  std::string endpoint{kDefaultEndpoint};
  double realtime_factor{0.0};  // 0 = stream as fast as possible
  size_t chunk_samples{100};
  int max_sessions{0};  // stop accepting after this many completed sessions; 0 = no limit
};

// Replays one recording to any number of concurrent clients, each with its
// own cursor: header frame, then sample chunks in order with marker frames
// sent just before the chunk containing their sample, then an end frame.
class StreamServer {
public:
  StreamServer(Recording rec, ServeOptions opt);
  ~StreamServer();

  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  void start();  // bind + listen + accept thread; throws on bind failure
  void stop();   // stops accepting, joins all session threads

  uint16_t port() const { return port_; }  // actual port, useful with ":0"
  int sessions_served() const { return sessions_done_.load(); }

  // Block until n sessions have completed (for max_sessions-driven use).
  void wait_for_sessions(int n);

private:
  void accept_loop();
  void serve_client(int fd);

  Recording rec_;
  ServeOptions opt_;
  int listen_fd_{-1};
  uint16_t port_{0};
  std::atomic<bool> running_{false};
  std::atomic<int> sessions_started_{0};
  std::atomic<int> sessions_done_{0};
  std::thread accept_thread_;
  std::vector<std::thread> client_threads_;
};

struct RecordResult {
  Recording rec;
  bool complete{false};  // end frame seen before the connection closed
};

// Connects to a serving endpoint and rebuilds the streamed recording.
// Throws on connection failure or protocol corruption; a clean disconnect
// before the end frame yields complete == false.
RecordResult record_stream(const std::string& endpoint);

} // namespace eegkit
