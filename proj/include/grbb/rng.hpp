#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace grbb {

/// Every random stream in the library is a 64-bit Mersenne Twister.
using Rng = std::mt19937_64;

inline constexpr std::string_view kGeneratorName = "mt19937_64";

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over a short tag, used to separate experiments sharing a master seed.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Child stream seed: mix64 folded over (seed, tag, L, replica) in that order.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::string_view tag,
                                    std::uint64_t size, std::uint64_t replica) noexcept {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ tag_hash(tag));
  s = mix64(s ^ size);
  return mix64(s ^ replica);
}

inline Rng make_stream(std::uint64_t seed, std::string_view tag, std::uint64_t size,
                       std::uint64_t replica) {
  return Rng(stream_seed(seed, tag, size, replica));
}

}  // namespace grbb
