#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace catnav {

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

/// FNV-1a 64-bit, used for request digests and grid fingerprints.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

/// Little-endian IEEE-754 byte image of a double array.
std::string pack_doubles(std::span<const double> values);
std::vector<double> unpack_doubles(std::string_view bytes);

}  // namespace catnav
