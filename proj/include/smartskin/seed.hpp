#pragma once

#include <cstdint>
#include <initializer_list>

namespace smartskin {

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: the same (master, counters...) always yields the same seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> counters) noexcept {
  std::uint64_t s = mix64(master);
  for (std::uint64_t c : counters) {
    s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
  }
  return s;
}

}  // namespace smartskin
