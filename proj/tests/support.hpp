#pragma once

#include <cmath>
#include <random>

#include "hamred/numeric_core.hpp"

namespace testing_support {

using hamred::Mat;
using hamred::Vec;

inline Mat random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

inline Vec random_vector(std::mt19937_64& rng, int n) {
    return random_matrix(rng, n, 1).col(0);
}

inline Mat random_spd(std::mt19937_64& rng, int n) {
    const Mat q = random_matrix(rng, n, n);
    return q.transpose() * q + Mat::Identity(n, n);
}

inline Vec random_unit(std::mt19937_64& rng, int n) {
    Vec v = random_vector(rng, n);
    return v / v.norm();
}

}  // namespace testing_support
