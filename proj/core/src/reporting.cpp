#include "zsl/reporting.hpp"

#include <charconv>
#include <cstdio>

namespace zsl {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

double round_tripped(double value) {
  const std::string s = format_number(value);
  double out = value;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace zsl
