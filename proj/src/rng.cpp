#include "tpmlab/rng.hpp"

namespace tpmlab {

namespace {

// Random123 philox4x64 round and Weyl constants.
constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  return static_cast<std::uint64_t>(p);
}

inline void round_once(Philox4x64::Block& c, std::uint64_t k0, std::uint64_t k1) {
  std::uint64_t hi0, hi1;
  const std::uint64_t lo0 = mulhilo(kMult0, c[0], hi0);
  const std::uint64_t lo1 = mulhilo(kMult1, c[2], hi1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

Philox4x64::Block Philox4x64::block(std::uint64_t key0, std::uint64_t key1, Block counter) {
  round_once(counter, key0, key1);
  for (int r = 1; r < 10; ++r) {
    key0 += kWeyl0;
    key1 += kWeyl1;
    round_once(counter, key0, key1);
  }
  return counter;
}

std::uint64_t Philox4x64::at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return block(seed, stream, {index, 0, 0, 0})[0];
}

double Philox4x64::uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return to_unit_double(at(seed, stream, index));
}

void Philox4x64::refill() {
  buffer_ = block(key_[0], key_[1], counter_);
  buffer_pos_ = 0;
  // 256-bit little-endian counter increment
  for (int i = 0; i < 4; ++i) {
    if (++counter_[i] != 0) break;
  }
}

std::uint64_t Philox4x64::next_u64() {
  if (buffer_pos_ == 4) refill();
  return buffer_[buffer_pos_++];
}

}  // namespace tpmlab
