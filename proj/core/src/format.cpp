#include "bkf/format.hpp"

#include <cfenv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "bkf/errors.hpp"
#include "bkf/rng.hpp"

namespace bkf {

std::string format_fixed2(double x) {
  // nearbyint under the default FE_TONEAREST mode ties to even.
  double scaled = std::nearbyint(x * 100.0);
  if (scaled == 0.0) scaled = 0.0;  // normalize -0
  const long long cents = static_cast<long long>(scaled);
  const long long mag = cents < 0 ? -cents : cents;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", cents < 0 ? "-" : "", mag / 100, mag % 100);
  return buf;
}

std::string format_percent(double x, bool force_sign) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), force_sign ? "%+.1f%%" : "%.1f%%", x);
  return buf;
}

std::string hash_file_fnv1a64(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto n = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (in.eof()) break;
  }
  char out[32];
  std::snprintf(out, sizeof(out), "%016" PRIx64, h);
  return out;
}

}  // namespace bkf
