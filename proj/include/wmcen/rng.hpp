#pragma once

#include <cstdint>
#include <random>

namespace wmcen {

/// splitmix64 step; used to disperse seeds before they reach the engine.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Order-sensitive combination of a seed with a label (replication index,
/// purpose tag, restart number). Fixed scheme, identical on every platform.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label);

/// Deterministic random stream: mt19937_64 under the hood, with all
/// variate transforms implemented here so sequences do not depend on the
/// standard library's distribution internals. substream() derives an
/// independent child stream from the construction seed, not from the
/// current engine state, so derivation order never matters.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  RngStream substream(std::uint64_t purpose) const;

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Standard normal via Box-Muller (cosine branch, no caching).
  double normal();

  /// Standard Cauchy (location 0, scale 1).
  double cauchy();

  /// Student t with integer degrees of freedom.
  double student_t(int dof);

  /// Uniform integer in [0, bound). bound must be positive.
  int uniform_int(int bound);

 private:
  std::uint64_t root_;
  std::mt19937_64 gen_;
};

}  // namespace wmcen
