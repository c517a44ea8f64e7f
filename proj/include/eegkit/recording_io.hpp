#pragma once

#include "eegkit/recording.hpp"

#include <filesystem>

namespace eegkit {

// On-disk layout of a recording directory:
//   meta.json    {"rate": <hz>, "channels": [...], "meta": {...}}
//   signals.csv  header "sample,<ch1>,...", one row per sample, uV
//   markers.csv  header "sample,code,label"
// Text is UTF-8, LF line endings, '.' decimal separator. Amplitudes are
// written with enough digits to round-trip their float32 value exactly.
void save_recording(const Recording& rec, const std::filesystem::path& dir);

// Throws std::runtime_error with a distinct message per failure mode:
// missing file, malformed row (with line number), duplicate labels,
// marker out of range.
Recording load_recording(const std::filesystem::path& dir);

// Write-to-temp-then-rename, so concurrent readers never see a torn file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace eegkit
