#pragma once

#include <filesystem>
#include <iosfwd>

#include "spiky/factorization.hpp"

namespace spiky {

/// Embedding snapshot binary format (little-endian, bit-exact round trip):
///   magic "SPKE" | u32 version = 1 | u64 n | u64 f | f64 p |
///   n*f row-major f64 values | n length-prefixed (u32) UTF-8 ids |
///   optional length-prefixed (u32) UTF-8 label.
/// Empty snapshots (n = 0 or f = 0) are rejected on write. Read failures
/// raise FormatError naming the byte offset.
void write_snapshot(const Embeddings& e, std::ostream& out);
void write_snapshot(const Embeddings& e, const std::filesystem::path& path);

Embeddings read_snapshot(std::istream& in);
Embeddings read_snapshot(const std::filesystem::path& path);

}  // namespace spiky
