#include "eegkit/recording_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace eegkit {

namespace fs = std::filesystem;

void write_text_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

std::string format_float(float v) {
  char buf[32];
  // 9 significant digits round-trips any float32
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& s, const std::string& file, size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("load_recording: malformed number '" + s + "' in " + file +
                             " line " + std::to_string(line_no));
  return v;
}

uint64_t parse_u64(const std::string& s, const std::string& file, size_t line_no) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("load_recording: malformed integer '" + s + "' in " + file +
                             " line " + std::to_string(line_no));
  return v;
}

} // namespace

void save_recording(const Recording& rec, const std::filesystem::path& dir) {
  rec.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("save_recording: cannot create " + dir.string());

  nlohmann::json meta;
  meta["rate"] = rec.rate;
  meta["channels"] = rec.channels;
  meta["meta"] = rec.meta;
  write_text_atomic(dir / "meta.json", meta.dump(2) + "\n");

  std::string signals;
  signals.reserve(rec.n_samples() * (rec.n_channels() + 1) * 12 + 64);
  signals += "sample";
  for (const auto& ch : rec.channels) {
    signals += ',';
    signals += ch;
  }
  signals += '\n';
  const size_t n = rec.n_samples();
  for (size_t s = 0; s < n; ++s) {
    signals += std::to_string(s);
    for (size_t c = 0; c < rec.n_channels(); ++c) {
      signals += ',';
      signals += format_float(rec.data[c][s]);
    }
    signals += '\n';
  }
  write_text_atomic(dir / "signals.csv", signals);

  std::string markers = "sample,code,label\n";
  for (const auto& m : rec.markers) {
    markers += std::to_string(m.sample);
    markers += ',';
    markers += std::to_string(m.code);
    markers += ',';
    markers += m.label;
    markers += '\n';
  }
  write_text_atomic(dir / "markers.csv", markers);
}

Recording load_recording(const std::filesystem::path& dir) {
  for (const char* name : {"meta.json", "signals.csv", "markers.csv"})
    if (!fs::exists(dir / name))
      throw std::runtime_error("load_recording: missing file " + (dir / name).string());

  Recording rec;
  {
    std::ifstream in(dir / "meta.json");
    nlohmann::json meta;
    try {
      in >> meta;
    } catch (const std::exception& e) {
      throw std::runtime_error("load_recording: bad meta.json in " + dir.string() + ": " + e.what());
    }
    rec.rate = meta.at("rate").get<double>();
    rec.channels = meta.at("channels").get<std::vector<std::string>>();
    if (meta.contains("meta"))
      rec.meta = meta.at("meta").get<std::map<std::string, std::string>>();
  }

  {
    std::ifstream in(dir / "signals.csv");
    std::string line;
    if (!std::getline(in, line))
      throw std::runtime_error("load_recording: empty signals.csv in " + dir.string());
    const auto header = split_csv(line);
    if (header.size() != rec.channels.size() + 1 || header[0] != "sample")
      throw std::runtime_error("load_recording: signals.csv header does not match channel list");
    for (size_t c = 0; c < rec.channels.size(); ++c)
      if (header[c + 1] != rec.channels[c])
        throw std::runtime_error("load_recording: signals.csv header does not match channel list");

    rec.data.assign(rec.channels.size(), {});
    size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto cells = split_csv(line);
      if (cells.size() != rec.channels.size() + 1)
        throw std::runtime_error("load_recording: ragged row in signals.csv line " +
                                 std::to_string(line_no));
      for (size_t c = 0; c < rec.channels.size(); ++c)
        rec.data[c].push_back(
            static_cast<float>(parse_number(cells[c + 1], "signals.csv", line_no)));
    }
  }

  {
    std::ifstream in(dir / "markers.csv");
    std::string line;
    if (!std::getline(in, line) || split_csv(line).size() != 3)
      throw std::runtime_error("load_recording: bad markers.csv header in " + dir.string());
    size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto cells = split_csv(line);
      if (cells.size() != 3)
        throw std::runtime_error("load_recording: ragged row in markers.csv line " +
                                 std::to_string(line_no));
      EventMarker m;
      m.sample = parse_u64(cells[0], "markers.csv", line_no);
      const uint64_t code = parse_u64(cells[1], "markers.csv", line_no);
      if (code > UINT16_MAX)
        throw std::runtime_error("load_recording: marker code out of range in markers.csv line " +
                                 std::to_string(line_no));
      m.code = static_cast<uint16_t>(code);
      m.label = cells[2];
      rec.markers.push_back(std::move(m));
    }
  }

  try {
    rec.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error("load_recording: " + dir.string() + ": " + e.what());
  }
  return rec;
}

} // namespace eegkit
