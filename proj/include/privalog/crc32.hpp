#pragma once

#include <cstdint>
#include <string_view>

namespace privalog {

/// Reflected CRC-32, polynomial 0xEDB88320 (the common zlib/PNG variant).
uint32_t crc32(std::string_view data);

} // namespace privalog
