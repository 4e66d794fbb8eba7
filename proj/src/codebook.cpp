// SPDX-License-Identifier: Apache-2.0

#include "nfbeam/codebook.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nfbeam {

PolarCodebook::PolarCodebook(int n_angles, int n_rings, double beta, double lambda_c)
    : n_angles_(n_angles), n_rings_(n_rings), beta_(beta), lambda_c_(lambda_c) {
    if (n_angles < 2) throw std::invalid_argument("PolarCodebook: N_t must be >= 2");
    if (n_rings < 1) throw std::invalid_argument("PolarCodebook: S must be >= 1");
    if (beta <= 0) throw std::invalid_argument("PolarCodebook: beta must be > 0");
    if (lambda_c <= 0) throw std::invalid_argument("PolarCodebook: lambda must be > 0");

    const double d = lambda_c / 2.0;
    angles_.resize(n_angles);
    distances_.resize(static_cast<std::size_t>(n_angles) * n_rings);
    beams_.reserve(distances_.size());
    for (int n = 1; n <= n_angles; ++n) {
        double sin_theta = (2.0 * n - n_angles - 1) / static_cast<double>(n_angles);
        angles_[n - 1] = std::asin(sin_theta);
        for (int s = 1; s <= n_rings; ++s) {
            double r = (1.0 - sin_theta * sin_theta) * n_angles * n_angles * d * d /
                       (2.0 * s * beta * beta * lambda_c);
            distances_[static_cast<std::size_t>(flat_index(n, s))] = r;
            beams_.push_back(near_field_steering(angles_[n - 1], r, n_angles, lambda_c));
        }
    }
}

void PolarCodebook::check(int n, int s) const {
    if (n < 1 || n > n_angles_ || s < 1 || s > n_rings_)
        throw std::out_of_range("PolarCodebook: index (" + std::to_string(n) + "," +
                                std::to_string(s) + ") outside " + std::to_string(n_angles_) +
                                "x" + std::to_string(n_rings_));
}

double PolarCodebook::angle(int n) const {
    check(n, 1);
    return angles_[n - 1];
}

double PolarCodebook::distance(int n, int s) const {
    check(n, s);
    return distances_[static_cast<std::size_t>(flat_index(n, s))];
}

const CVector& PolarCodebook::beam(int n, int s) const {
    check(n, s);
    return beams_[static_cast<std::size_t>(flat_index(n, s))];
}

PolarCodebook build_codebook(const SystemConfig& config) {
    config.validate();
    return PolarCodebook(config.n_tx, config.n_rings, config.beta, config.wavelength());
}

} // namespace nfbeam
