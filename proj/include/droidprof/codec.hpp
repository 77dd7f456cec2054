#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace droidprof {

std::string sha256_hex(std::string_view bytes);

// Standard (padded) base-64 alphabet.
std::string base64_encode(std::string_view bytes);
std::optional<std::string> base64_decode(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace droidprof
