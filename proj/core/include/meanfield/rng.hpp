// Copyright 2026 The meanfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEANFIELD_RNG_HPP
#define MEANFIELD_RNG_HPP

#include <array>
#include <cstdint>

namespace meanfield {

using Philox4x64Block = std::array<std::uint64_t, 4>;
using Philox4x64Key = std::array<std::uint64_t, 2>;

/// Philox4x64 with 10 rounds (Salmon et al., SC'11). A bijection of the
/// counter for each key; stateless.
Philox4x64Block philox4x64(Philox4x64Block counter, Philox4x64Key key);

/// Coordinates of a reproducible normal stream. Draw k of a stream is a pure
/// function of (seed, stream_id, substream_id, k): replicas use stream_id,
/// particles or samples use substream_id.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t substream_id = 0;

  [[nodiscard]] RngStream substream(std::uint64_t id) const {
    return {seed, stream_id, id};
  }
  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Four standard normals for block b, i.e. draws 4b .. 4b+3.
std::array<double, 4> normal_block(const RngStream& stream, std::uint64_t block);

/// k-th standard normal variate of the stream.
double gaussian_draw(const RngStream& stream, std::uint64_t k);

/// Sequential reader over one stream that keeps the current four-draw block.
/// at(k) returns exactly gaussian_draw(stream, k); consecutive indices cost
/// one Philox evaluation per four draws.
class NormalCursor {
 public:
  NormalCursor() = default;
  explicit NormalCursor(RngStream stream) : stream_(stream) {}

  double at(std::uint64_t k) {
    const std::uint64_t block = k >> 2;
    if (block != block_ || !valid_) {
      cache_ = normal_block(stream_, block);
      block_ = block;
      valid_ = true;
    }
    return cache_[k & 3u];
  }
  [[nodiscard]] const RngStream& stream() const { return stream_; }

 private:
  RngStream stream_{};
  std::uint64_t block_ = 0;
  bool valid_ = false;
  std::array<double, 4> cache_{};
};

/// Standard normal CDF, used by the normality diagnostics.
double normal_cdf(double x);

}  // namespace meanfield

#endif  // MEANFIELD_RNG_HPP
