#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace marsim {

// Purpose tags for deriving independent streams from the master seed.
// One stream per (run, entity, purpose), so agent-level work can never
// perturb another agent's draws.
enum class StreamPurpose : std::uint64_t {
  fundamental = 1,  // entity = stock index
  agent_init = 2,   // entity = agent index
  agent_decide = 3, // entity = agent index
  agent_view = 4,   // entity = agent index * 2^16 + stock index
  misc = 5,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run,
                                 std::uint64_t entity, StreamPurpose purpose) {
  std::uint64_t s = master;
  std::uint64_t h = detail::splitmix64(s);
  s = h ^ (run + 0xa0761d6478bd642fULL);
  h = detail::splitmix64(s);
  s = h ^ (entity + 0xe7037ed1a0b428dbULL);
  h = detail::splitmix64(s);
  s = h ^ (static_cast<std::uint64_t>(purpose) + 0x8ebc6af09c88c6e3ULL);
  return detail::splitmix64(s);
}

// xoshiro256** with fixed draw counts per distribution call:
//   uniform01 / uniform / uniform_int / bernoulli: one 64-bit draw each;
//   normal: two draws every other call (Box-Muller pair, spare cached).
// Keeping the draw count fixed is what makes whole-run determinism auditable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = detail::splitmix64(s);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Inclusive range, single draw (128-bit multiply-shift)
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next()) * span;
    return lo + static_cast<std::int64_t>(wide >> 64);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double half_normal(double scale) { return std::fabs(normal(0.0, scale)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace marsim
