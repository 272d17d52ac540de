// Seeded random substreams.
//
// Every random draw in the simulator comes from an engine built by
// make_engine(derive_seed(master, tag, i, j)). Two draws that differ in tag or
// index never share state, so a Monte Carlo loop can redraw one quantity (for
// instance the estimation error) while keeping every other draw fixed.
#ifndef CFTHP_RNG_HPP
#define CFTHP_RNG_HPP

#include "cfthp/types.hpp"

#include <cstdint>
#include <random>

namespace cfthp {

enum class StreamTag : std::uint64_t {
  layout = 1,
  shadowing = 2,
  small_scale = 3,
  estimate = 4,
  error = 5,
  symbols = 6,
  noise = 7,
};

using Engine = std::mt19937_64;

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr Seed derive_seed(Seed master, StreamTag tag, std::uint64_t i = 0,
                           std::uint64_t j = 0) noexcept {
  Seed s = mix64(master);
  s = mix64(s ^ static_cast<std::uint64_t>(tag));
  s = mix64(s ^ (i + 0x632be59bd9b4e019ULL));
  s = mix64(s ^ (j + 0x85157af5ULL));
  return s;
}

inline Engine make_engine(Seed seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

/// Fills an rows x cols matrix with i.i.d. CN(0, 1) entries.
inline CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols,
                                Engine& engine) {
  std::normal_distribution<Real> normal(0.0, 1.0);
  const Real scale = std::sqrt(0.5);
  CMatrix out(rows, cols);
  // column-major fill order is part of the determinism contract
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Real re = normal(engine);
      const Real im = normal(engine);
      out(r, c) = Complex(scale * re, scale * im);
    }
  }
  return out;
}

}  // namespace cfthp

#endif  // CFTHP_RNG_HPP
