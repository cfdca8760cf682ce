#pragma once

#include <cmath>
#include <random>

#include "qtrap/core.hpp"

namespace qtrap::test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cplx random_complex(std::mt19937_64& rng) { return {uniform(rng, -1, 1), uniform(rng, -1, 1)}; }

inline WaveFunction sampled(const Grid& grid, auto&& f) {
    CVector v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.point(j));
    return WaveFunction(grid, std::move(v));
}

inline WaveFunction random_samples(const Grid& grid, std::mt19937_64& rng) {
    CVector v(grid.size());
    for (auto& z : v) z = random_complex(rng);
    return WaveFunction(grid, std::move(v));
}

}  // namespace qtrap::test
