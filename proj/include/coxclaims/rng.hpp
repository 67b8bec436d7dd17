#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace coxclaims {

// xoshiro256** seeded through splitmix64 from (root seed, stream index).
// Every replication owns its own Stream, so results do not depend on how
// replications are scheduled across threads.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed, std::uint64_t stream_index = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Index i drawn with probability weights[i] / sum(weights).
  int categorical(std::span<const double> weights);

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace coxclaims
