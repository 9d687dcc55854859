#pragma once

#include <string>
#include <string_view>

namespace immcheck {

/// SHA-256 digest of the bytes, as lowercase hex.
std::string sha256_hex(std::string_view bytes);

} // namespace immcheck
