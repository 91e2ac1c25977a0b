#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "jointcs/types.hpp"

namespace jointcs {

/// The four experiment signal distributions for on-support entries:
/// I standard normal, II |standard normal|, III N(1, 0.25), IV constant 1.
enum class SignalType { TypeI = 1, TypeII = 2, TypeIII = 3, TypeIV = 4 };

/// Deterministic seed node. A Seed is a 64-bit state derived from a
/// master value and a path of derivation words; identical (master, path)
/// always yields the identical random stream. Streams for different
/// roles (support / signal / per-sensor matrix) are split so adding
/// sensors never perturbs the signal draw.
class Seed {
public:
  explicit Seed(std::uint64_t master) : state_(mix(0x9e3779b97f4a7c15ULL, master)) {}

  /// Child seed with one more derivation word mixed in.
  Seed derived(std::uint64_t word) const { return Seed(mix(state_, word), Tag{}); }

  Seed derived(std::initializer_list<std::uint64_t> words) const {
    Seed s = *this;
    for (std::uint64_t w : words) s = s.derived(w);
    return s;
  }

  /// Generator positioned at this node.
  std::mt19937_64 engine() const { return std::mt19937_64(state_); }

  std::uint64_t value() const { return state_; }

private:
  struct Tag {};
  Seed(std::uint64_t state, Tag) : state_(state) {}

  // splitmix64 step over (state ^ word).
  static std::uint64_t mix(std::uint64_t state, std::uint64_t word) {
    std::uint64_t z = (state ^ word) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// Derivation words for the per-role stream split.
namespace stream_role {
inline constexpr std::uint64_t kSupport = 0x5355;
inline constexpr std::uint64_t kSignal = 0x5347;
inline constexpr std::uint64_t kMatrix = 0x4d58;
}  // namespace stream_role

/// Uniformly random k-subset of [0, n), sorted. Deterministic in `seed`.
SupportSet draw_support(Index n, Index k, const Seed& seed);

/// Draws all L signal columns on the shared support `omega`, with
/// on-support entries distributed per `type` and exact zeros elsewhere.
SignalEnsemble gen_signals(SignalType type, const ProblemDims& dims,
                           const SupportSet& omega, const Seed& seed);

/// L independent m x n matrices with i.i.d. standard normal entries.
SensingEnsemble draw_sensing(const ProblemDims& dims, const Seed& seed);

/// Forward model: column i of the result is phi^i * x^i.
MeasurementEnsemble sense(const SensingEnsemble& phis, const SignalEnsemble& x);

}  // namespace jointcs
