#pragma once

#include <cstdint>
#include <random>

namespace cekm {

// splitmix64 finalizer; spreads seed material over all 64 bits.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Deterministic uniform stream on top of mt19937_64, which the standard pins
// down bit-for-bit. Uniforms are built from the top 53 bits directly so the
// sequence does not depend on the standard library's distribution internals.
//
// A stream is a pure function of its seed material. Replicate streams derived
// from (master_seed, index) are therefore identical across platforms, thread
// counts and execution orders.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : key_(mix64(seed)), engine_(key_) {}

  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : RandomStream(combine_keys(master_seed, stream_index)) {}

  // Uniform draw strictly inside (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t next_u64() { return engine_(); }

  // Child stream keyed by (parent key, parent position, tag); advances the
  // parent so successive splits with equal tags still differ.
  RandomStream split(std::uint64_t tag) {
    return RandomStream(combine_keys(key_, combine_keys(engine_(), tag)));
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace cekm
