#include "coxclaims/rng.hpp"

#include <bit>

namespace coxclaims {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t stream_index) {
  std::uint64_t x = seed;
  // Mix the stream index through a separate splitmix pass so that
  // (seed, i) and (seed + 1, i - 1) do not collide.
  std::uint64_t y = stream_index ^ 0x6a09e667f3bcc909ULL;
  x ^= splitmix64(y);
  for (auto& word : s_) word = splitmix64(x);
}

Stream::result_type Stream::operator()() {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double Stream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

int Stream::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = uniform() * total;
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += weights[i];
    if (target < acc) return static_cast<int>(i);
  }
  return last_positive;
}

}  // namespace coxclaims
