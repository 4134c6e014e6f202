#pragma once

// Philox4x64-10: counter-based generator with the published Random123
// constants. A (key, counter) pair maps to a 4x64 block by a fixed bijection,
// so any sample index can be generated independently of how work is
// partitioned across workers.

#include <array>
#include <cstdint>

namespace tpmlab {

class Philox4x64 {
 public:
  using Block = std::array<std::uint64_t, 4>;

  Philox4x64(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{seed, stream}, counter_{0, 0, 0, 0} {}

  /// The keyed bijection: 10 rounds over the counter block.
  static Block block(std::uint64_t key0, std::uint64_t key1, Block counter);

  /// Word 0 of the block at counter = (index, 0, 0, 0); O(1) random access.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
  /// at(...) mapped to [0, 1) with 53 random bits.
  static double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

  std::uint64_t next_u64();
  /// Uniform on [0, 1), 53-bit resolution.
  double next_double() { return to_unit_double(next_u64()); }

  static double to_unit_double(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  Block counter_;
  Block buffer_{};
  int buffer_pos_ = 4;
};

}  // namespace tpmlab
