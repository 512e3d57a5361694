#pragma once

#include <random>
#include <vector>

#include "metrika/random.hpp"
#include "metrika/structure.hpp"

namespace bench {

// n-point space on the 1/8 grid from the sequential sampler.
inline metrika::PresentedStructure space(std::size_t n, std::uint64_t seed) {
  metrika::MeasureSpec spec;
  spec.grid = metrika::Rational(1, 8);
  spec.seed = seed;
  metrika::Rng rng = metrika::trial_rng(seed, n, 0);
  return metrika::sample_space(n, spec, rng);
}

}  // namespace bench
