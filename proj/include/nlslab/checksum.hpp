#pragma once

#include <string>

namespace nlslab {

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

} // namespace nlslab
