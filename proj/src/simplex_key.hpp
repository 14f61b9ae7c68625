#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "pdperm/filtration.hpp"

namespace pdperm::detail {

// Lookup from vertex list to position in a simplex array. Small simplices over fewer than
// 2^16 vertices pack into one 64-bit key; anything else falls back to an ordered map.
class SimplexIndex {
 public:
  explicit SimplexIndex(std::span<const Simplex> simplices) {
    packed_.reserve(simplices.size());
    for (std::size_t i = 0; i < simplices.size(); ++i) {
      const auto& v = simplices[i].vertices;
      if (auto key = pack(v)) {
        packed_.emplace(*key, i);
      } else {
        general_.emplace(v, i);
      }
    }
  }

  std::optional<std::size_t> find(const std::vector<VertexId>& vertices) const {
    if (auto key = pack(vertices)) {
      const auto it = packed_.find(*key);
      if (it == packed_.end()) return std::nullopt;
      return it->second;
    }
    const auto it = general_.find(vertices);
    if (it == general_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static std::optional<std::uint64_t> pack(const std::vector<VertexId>& v) {
    if (v.size() > 4) return std::nullopt;
    std::uint64_t key = 0;  // leading zero slots encode the length
    for (VertexId x : v) {
      if (x >= 0xFFFF) return std::nullopt;
      key = (key << 16) | (x + 1);
    }
    return key;
  }

  std::unordered_map<std::uint64_t, std::size_t> packed_;
  std::map<std::vector<VertexId>, std::size_t> general_;
};

}  // namespace pdperm::detail
