#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latwalk/lattice_walk.hpp"

namespace latwalk {

// Path records are a single text line: "<d> <n> <base64 of packed steps>".
// Packed steps hold 2 bits per step (least significant first) in d = 2 and one
// byte per step otherwise; direction k moves along axis k/2, negatively if k is odd.

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Standard alphabet with '=' padding; throws FormatError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string encode_path_record(const LatticePath& path);
LatticePath decode_path_record(std::string_view record);

}  // namespace latwalk
