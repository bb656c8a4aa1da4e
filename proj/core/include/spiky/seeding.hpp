#pragma once

#include <cstdint>
#include <string_view>

namespace spiky {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent per-module seed from one root seed and a tag, so
/// that adding a pipeline stage never shifts the random stream of another.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) noexcept;

}  // namespace spiky
