#pragma once

// Content hashes for the hash-chained stage files and checkpoints.

#include <string>
#include <string_view>

namespace davis {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace davis
