#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfsim {

using VertexId = std::uint64_t;
using Bytes = std::vector<std::uint8_t>;

// Sentinels for not-yet-discovered vertices.
inline constexpr VertexId kNoParent = ~VertexId{0};
inline constexpr std::uint32_t kUnreached = ~std::uint32_t{0};

/// Malformed serialized message or code-word stream.
class DecodeError : public std::runtime_error {
 public:
  explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

/// Collective-communication failure (mismatched epoch, missing rank, abort).
class FabricError : public std::runtime_error {
 public:
  explicit FabricError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bfsim
