#pragma once

#include <string>
#include <string_view>

namespace opilex {

// Reserved author_id for posts whose author deleted their account.
inline constexpr std::string_view kDeletedAuthor = "__deleted__";

// Keyed SHA-256 truncated to 64 bits, rendered as 16 lowercase hex chars.
// Deterministic for a fixed salt; "[deleted]" maps to kDeletedAuthor.
std::string anonymize_author(std::string_view name, std::string_view salt);

// Full SHA-256 hex digest of a byte string (manifests, cache keys).
std::string sha256_hex(std::string_view bytes);

// SHA-256 hex digest of a file's contents. Throws opilex::Error on I/O failure.
std::string sha256_file_hex(const std::string& path);

}  // namespace opilex
