// SPDX-License-Identifier: Apache-2.0
//
// Polar (angle x distance-ring) near-field codebook.

#ifndef NFBEAM_CODEBOOK_HPP
#define NFBEAM_CODEBOOK_HPP

#include <vector>

#include "nfbeam/channel.hpp"
#include "nfbeam/config.hpp"

namespace nfbeam {

// Beam index within the codebook; n is the angle index (1..N_t) and s
// the distance-ring index (1..S).
struct BeamIndex {
    int n = 1;
    int s = 1;
    friend bool operator==(const BeamIndex&, const BeamIndex&) = default;
    friend auto operator<=>(const BeamIndex&, const BeamIndex&) = default;
};

// Immutable grid of N_t x S unit-norm near-field beams together with
// their polar coordinates. Angles theta_n are strictly increasing;
// distances r_{n,s} decrease as 1/s along each angle.
class PolarCodebook {
public:
    PolarCodebook(int n_angles, int n_rings, double beta, double lambda_c);

    int n_angles() const { return n_angles_; }
    int n_rings() const { return n_rings_; }
    int size() const { return n_angles_ * n_rings_; }
    double beta() const { return beta_; }
    double wavelength() const { return lambda_c_; }

    double angle(int n) const;          // theta_n, 1-based
    double distance(int n, int s) const; // r_{n,s}, 1-based

    // Stored beam w_{n,s} = b(theta_n, r_{n,s}); throws std::out_of_range
    // on invalid indices.
    const CVector& beam(int n, int s) const;
    const CVector& beam(BeamIndex idx) const { return beam(idx.n, idx.s); }

    // Row-major flattening (n-1)*S + (s-1), used by probability matrices.
    int flat_index(int n, int s) const { return (n - 1) * n_rings_ + (s - 1); }
    BeamIndex unflatten(int flat) const {
        return {flat / n_rings_ + 1, flat % n_rings_ + 1};
    }

private:
    void check(int n, int s) const;

    int n_angles_;
    int n_rings_;
    double beta_;
    double lambda_c_;
    std::vector<double> angles_;
    std::vector<double> distances_; // row-major n x s
    std::vector<CVector> beams_;    // row-major n x s
};

// theta_n = arcsin((2n - N_t - 1)/N_t),
// r_{n,s} = (1 - sin^2 theta_n) N_t^2 d^2 / (2 s beta^2 lambda), d = lambda/2.
PolarCodebook build_codebook(const SystemConfig& config);

} // namespace nfbeam

#endif
