#pragma once

// Shared test helpers: a deterministic random corpus (seeds are literal
// data; doubles come straight from raw mt19937 words, so the values are
// identical on every platform) and small matrix generators.

#include "qpulse/core.hpp"

#include <cstdint>
#include <random>

namespace qtest {

inline constexpr std::uint32_t kSeeds[] = {12345u, 67890u, 24601u, 31415u, 92653u};

class Rng {
public:
    explicit Rng(std::uint32_t seed) : gen_(seed) {}

    // uniform in [-1, 1) with 27 significant bits
    double uniform() {
        return 2.0 * static_cast<double>(gen_() >> 5) / 134217728.0 - 1.0;
    }

    qpulse::Complex complex() { return {uniform(), uniform()}; }

private:
    std::mt19937 gen_;
};

inline qpulse::Matrix random_matrix(Rng& rng, int rows, int cols) {
    qpulse::Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.complex();
    return m;
}

inline qpulse::Matrix random_hermitian(Rng& rng, int n) {
    const qpulse::Matrix m = random_matrix(rng, n, n);
    return 0.5 * (m + m.adjoint());
}

inline qpulse::Vector random_amplitudes(Rng& rng, int n) {
    qpulse::Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex();
    return v;
}

inline qpulse::DensityMatrix random_density(Rng& rng, const std::vector<int>& dims) {
    int total = 1;
    for (int d : dims) total *= d;
    const qpulse::Matrix g = random_matrix(rng, total, total);
    qpulse::Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return qpulse::DensityMatrix(dims, std::move(rho));
}

inline double max_abs_diff(const qpulse::Matrix& a, const qpulse::Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace qtest
