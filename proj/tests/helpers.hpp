// Shared test helpers: seeded random matrices and states.
#pragma once

#include <random>
#include <vector>

#include "qsb/numlin.hpp"

namespace qsb::testing {

using numlin::Mat;
using numlin::cxd;

inline Mat random_hermitian(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = u(rng);
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = cxd(u(rng), u(rng));
            a(j, i) = std::conj(a(i, j));
        }
    }
    return a;
}

inline std::vector<cxd> random_pure(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cxd> v(n);
    double norm2 = 0.0;
    for (auto& x : v) {
        x = cxd(u(rng), u(rng));
        norm2 += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(norm2);
    return v;
}

inline Mat projector(const std::vector<cxd>& v) { return numlin::outer(v, v); }

} // namespace qsb::testing
