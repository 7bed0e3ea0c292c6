#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mecsim {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds from one root.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_tag(std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Deterministic child stream: same (root, name, index) -> same generator state.
inline Rng make_rng(std::uint64_t root, std::string_view name, std::uint64_t index = 0) {
  std::uint64_t s = mix_seed(root ^ stream_tag(name));
  s = mix_seed(s ^ index);
  return Rng(s);
}

}  // namespace mecsim
