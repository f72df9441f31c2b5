#include "latwalk/path_codec.hpp"

#include <array>
#include <charconv>
#include <string>

#include "latwalk/error.hpp"

namespace latwalk {

namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<std::int8_t, 256> make_reverse_table() {
  std::array<std::int8_t, 256> table{};
  for (auto& v : table) v = -1;
  for (std::size_t i = 0; i < kAlphabet.size(); ++i) {
    table[static_cast<unsigned char>(kAlphabet[i])] = static_cast<std::int8_t>(i);
  }
  return table;
}

constexpr auto kReverse = make_reverse_table();

template <class Int>
Int parse_field(std::string_view field, const char* what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw FormatError(std::string("path record: bad ") + what + " field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t v = bytes[i] << 16;
    if (rest == 2) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw FormatError("base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int pad = 0;
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && last && k >= 2) {
        ++pad;
        v <<= 6;
        continue;
      }
      const auto idx = kReverse[static_cast<unsigned char>(c)];
      if (idx < 0 || pad > 0) throw FormatError("invalid base64 character");
      v = (v << 6) | static_cast<std::uint32_t>(idx);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::string encode_path_record(const LatticePath& path) {
  return std::to_string(path.dimension()) + ' ' + std::to_string(path.length()) + ' ' +
         base64_encode(path.packed());
}

LatticePath decode_path_record(std::string_view record) {
  while (!record.empty() && (record.back() == '\n' || record.back() == '\r')) record.remove_suffix(1);
  const auto first = record.find(' ');
  const auto second = first == std::string_view::npos ? first : record.find(' ', first + 1);
  if (second == std::string_view::npos) throw FormatError("path record needs three fields");
  const int d = parse_field<int>(record.substr(0, first), "dimension");
  const auto n = parse_field<std::size_t>(record.substr(first + 1, second - first - 1), "length");
  try {
    return LatticePath::from_packed(d, n, base64_decode(record.substr(second + 1)));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("path record: ") + e.what());
  }
}

}  // namespace latwalk
