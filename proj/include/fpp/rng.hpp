#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fpp {

// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the output is a
// pure function of (counter, key), which is what makes per-cell and per-edge
// streams independent of scheduling.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

inline double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Sequential stream over the counters (i, stream_id) for i = 0, 1, 2, ...
// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t key, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept { return to_unit_interval((*this)()); }
  // Uniform on (0, 1].
  double uniform_pos() noexcept { return 1.0 - uniform(); }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
};

// Stream for one (master seed, cell) pair. Distinct cells never share counters.
RandomStream seed_stream(std::uint64_t master_seed, std::uint64_t cell_index) noexcept;

// Random bits for item `index` in domain `tag` under `key`; two 64-bit words.
std::array<std::uint64_t, 2> keyed_draw(std::uint64_t key, std::uint64_t index,
                                        std::uint32_t tag) noexcept;

// 64-bit key for the per-cell weight field, so that fields of distinct cells are
// independent and each is reproducible from (master seed, cell) alone.
inline std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t cell_index) noexcept {
  return keyed_draw(master_seed, cell_index, 0x43454C4Cu)[0];
}

// Cell index layout used by the harness: stage | n-slot | replication.
constexpr std::uint64_t cell_id(std::uint64_t stage, std::uint64_t slot,
                                std::uint64_t rep) noexcept {
  return (stage << 48) | ((slot & 0xFFFFu) << 32) | (rep & 0xFFFFFFFFu);
}

}  // namespace fpp
