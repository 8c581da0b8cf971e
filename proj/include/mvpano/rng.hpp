#pragma once

#include <cstdint>
#include <string>

#include "mvpano/error.hpp"

namespace mvpano {

/// Deterministic 64-bit PRNG (splitmix64). One integer of state, so runs are
/// reproducible across platforms and the state serializes as a single number.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw_config("Rng::below: n must be positive");
    return next_u64() % n;
  }

  int range(int lo, int hi_inclusive) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
  }

  bool coin() { return (next_u64() & 1u) != 0; }

  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

  /// Derive an independent stream, e.g. per scene or per frame.
  Rng fork(std::uint64_t stream) const {
    Rng r(state_ ^ (0xd1342543de82ef95ULL * (stream + 1)));
    r.next_u64();
    return r;
  }

private:
  std::uint64_t state_;
};

}  // namespace mvpano
