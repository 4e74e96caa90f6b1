#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Every simulated path owns a stream identified by (seed, stream id): the
// 64-bit seed is the key and the 64-bit stream id fills the upper half of
// the 128-bit counter, the lower half counts draws. Streams therefore do not
// depend on how paths are split into blocks or threads.

#include <array>
#include <cstdint>

namespace kellerer {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  /// Uniform on [0, 1) with 53 random bits.
  double next_double();

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

}  // namespace kellerer
