#pragma once

#include <bit>
#include <random>

#include "g2kit/forms.hpp"

namespace testutil {

inline g2kit::KForm random_form(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  g2kit::KForm f(degree);
  for (unsigned mask = 0; mask < 128; ++mask) {
    if (std::popcount(mask) == degree) f.add_term(g2kit::MultiIndex::from_mask(mask), u(rng));
  }
  return f;
}

inline g2kit::Mat7 random_mat7(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  g2kit::Mat7 m;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) m(i, j) = u(rng);
  return m;
}

}  // namespace testutil
