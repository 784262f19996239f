// Copyright 2026 The wdepth Authors
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

#ifndef WDEPTH_NUMERIC_RNG_HPP
#define WDEPTH_NUMERIC_RNG_HPP

#include <cstdint>
#include <random>

namespace wdepth::num {

/// Identifier pinned into simulator output metadata so records can be
/// regenerated bit-exactly. Bump when the stream derivation changes.
inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64-substreams";
inline constexpr int kGeneratorVersion = 1;

/// SplitMix64 step; used only to derive substream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic substream seed: master seed mixed with a stream index.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (0xa0761d6478bd642fULL * (index + 1));
  std::uint64_t s = splitmix64(state);
  return splitmix64(state) ^ s;
}

/// mt19937_64 wrapper producing platform-stable uniforms. std::uniform_*
/// distributions are implementation-defined, so the [0,1) mapping is done
/// explicitly from the top 53 bits.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace wdepth::num

#endif  // WDEPTH_NUMERIC_RNG_HPP
