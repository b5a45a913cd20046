#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Domain separators so stream draws and keyed draws never collide.
constexpr std::uint32_t kStreamDomain = 0x5EED0000u;
constexpr std::uint32_t kKeyedDomain = 0xF1E1D000u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

RandomStream::RandomStream(std::uint64_t key, std::uint64_t stream_id) noexcept
    : key_(key), stream_(stream_id) {}

void RandomStream::refill() noexcept {
  // Counter words: block index (low/high) and stream id (low, high ^ domain).
  const Philox4x32::Counter ctr{
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_),
      static_cast<std::uint32_t>(stream_ >> 32) ^ kStreamDomain};
  const Philox4x32::Key k{static_cast<std::uint32_t>(key_),
                          static_cast<std::uint32_t>(key_ >> 32)};
  buf_ = Philox4x32::block(ctr, k);
  ++block_;
  used_ = 0;
}

RandomStream::result_type RandomStream::operator()() noexcept {
  if (used_ >= 4) refill();
  const std::uint64_t lo = buf_[used_];
  const std::uint64_t hi = buf_[used_ + 1];
  used_ += 2;
  return (hi << 32) | lo;
}

RandomStream seed_stream(std::uint64_t master_seed, std::uint64_t cell_index) noexcept {
  return RandomStream(master_seed, cell_index);
}

std::array<std::uint64_t, 2> keyed_draw(std::uint64_t key, std::uint64_t index,
                                        std::uint32_t tag) noexcept {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32), tag,
                                kKeyedDomain};
  const Philox4x32::Key k{static_cast<std::uint32_t>(key),
                          static_cast<std::uint32_t>(key >> 32)};
  const auto out = Philox4x32::block(ctr, k);
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
          (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

}  // namespace fpp
