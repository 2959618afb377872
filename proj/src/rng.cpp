#include "wmcen/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wmcen {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label) {
  std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (label + 1));
  std::uint64_t out = splitmix64_next(state);
  out ^= splitmix64_next(state);
  return out;
}

RngStream::RngStream(std::uint64_t seed) : root_(seed), gen_(seed) {}

RngStream RngStream::substream(std::uint64_t purpose) const {
  return RngStream(mix_seed(root_, purpose));
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform() {
  // 53 random bits, shifted half a step off both endpoints.
  return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::cauchy() {
  return std::tan(std::numbers::pi * (uniform() - 0.5));
}

double RngStream::student_t(int dof) {
  if (dof < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
  const double z = normal();
  double chisq = 0.0;
  for (int i = 0; i < dof; ++i) {
    const double g = normal();
    chisq += g * g;
  }
  return z / std::sqrt(chisq / static_cast<double>(dof));
}

int RngStream::uniform_int(int bound) {
  if (bound <= 0) throw std::invalid_argument("bound must be positive");
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound));
}

}  // namespace wmcen
