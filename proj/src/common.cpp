#include <charconv>
#include <cstdio>

#include "pdrwm/types.hpp"

namespace pdrwm {

std::string digest(std::string_view description) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : description) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace pdrwm
