#include "amortize/core/rng.hpp"

namespace amortize {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t sm = seed;
  const std::uint64_t base = splitmix64(sm);
  std::uint64_t mixed = base ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  for (auto& word : s_) word = splitmix64(mixed);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::normal() { return normal_(*this); }

Rng Rng::split(std::uint64_t index) const {
  std::uint64_t sm = seed_ ^ (stream_ * 0x9e3779b97f4a7c15ULL);
  const std::uint64_t child_seed = splitmix64(sm);
  return Rng(child_seed, index);
}

}  // namespace amortize
