#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace zsl {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Canonical number formatting for reports: 9 significant digits, and the
/// value the string parses back to. Writing the round-tripped value into
/// every output format keeps TSV and JSON reports numerically identical.
std::string format_number(double value);
double round_tripped(double value);

}  // namespace zsl
