#pragma once

// Output plumbing: atomic file writes (full temp file, then rename, so a
// crashed run never leaves a half-written result) and shortest round-trip
// double formatting for the CSV emitters.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "cwpcn/rate_region.hpp"

namespace cwpcn {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shortest decimal string that parses back to exactly the same double.
inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string default_output_dir() {
  const char* env = std::getenv("CWPCN_OUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("rename failed: " + path.string());
  }
}

inline std::string to_csv(const RateRegionFrontier& frontier) {
  std::string out = "param,r_primary,r_secondary\n";
  for (const RatePoint& pt : frontier.points) {
    out += fmt_double(pt.param);
    out += ',';
    out += fmt_double(pt.r_primary);
    out += ',';
    out += fmt_double(pt.r_secondary);
    out += '\n';
  }
  return out;
}

}  // namespace cwpcn
