#pragma once

#include "fourier_field.hpp"

#include <random>

namespace circleflow {

/** Smooth random field: coefficients with geometric decay, restricted to a
 * subspace. Deterministic for a fixed generator state. */
inline FourierField random_field(std::mt19937_64& rng, int order, double amplitude = 0.1,
                                 Subspace s = Subspace::Full, double decay = 0.7) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    FourierField f(order);
    double w = amplitude;
    for (int n = 0; n <= order; ++n) {
        double re = gauss(rng), im = gauss(rng);
        if (retains(s, n)) f.set_coeff(n, w * cplx(re, n == 0 ? 0.0 : im));
        w *= decay;
    }
    return f;
}

/** Random smooth displacement for a diffeomorphism, sup-norm roughly `amp`. */
inline std::vector<double> random_displacement(std::mt19937_64& rng, int m, double amp,
                                               int max_mode = 4) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> amps, phases;
    for (int n = 1; n <= max_mode; ++n) {
        amps.push_back(amp * unif(rng) / (n * n));
        phases.push_back(std::numbers::pi * unif(rng));
    }
    std::vector<double> d(static_cast<size_t>(m));
    double c0 = amp * 0.3 * unif(rng);
    for (int j = 0; j < m; ++j) {
        double th = two_pi * j / m, v = c0;
        for (int n = 1; n <= max_mode; ++n)
            v += amps[static_cast<size_t>(n - 1)] * std::sin(n * th + phases[static_cast<size_t>(n - 1)]);
        d[static_cast<size_t>(j)] = v;
    }
    return d;
}

}  // namespace circleflow
