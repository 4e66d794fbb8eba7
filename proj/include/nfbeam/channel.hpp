// SPDX-License-Identifier: Apache-2.0
//
// Synthetic dual-band multipath scenarios and OFDM channel synthesis.

#ifndef NFBEAM_CHANNEL_HPP
#define NFBEAM_CHANNEL_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "nfbeam/config.hpp"
#include "nfbeam/rng.hpp"

namespace nfbeam {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// One propagation path: complex gain (linear), angle of departure
// (radians), time of arrival (s), and BS-to-UE / BS-to-scatterer distance (m).
struct PathParams {
    std::complex<double> gain;
    double aod = 0.0;
    double toa = 0.0;
    double dist = 0.0;
    bool is_los = false;
};

// One UE drop. The first min(L, L_sub) sub-6G paths share geometry with
// the mmWave paths; sub-6G additionally carries diffuse paths.
struct ScenarioSample {
    std::vector<PathParams> mmwave_paths;
    std::vector<PathParams> sub6_paths;
    double ue_x = 0.0;
    double ue_y = 0.0;
    bool los_condition = false;
};

// Ground-truth mmWave channel (M x N_t, row m = h_m^H) paired with the
// noisy LS estimate of the sub-6G channel (M_sub x N_t_sub).
struct ChannelPair {
    CMatrix h_mm;
    CMatrix h_sub_est;
    ScenarioSample scenario;
};

// Raised-cosine pulse, roll-off 0.4, truncated to +-4 symbol periods,
// p(0) = 1. t in seconds, T = symbol (sampling) period.
double raised_cosine(double t, double period, double rolloff = 0.4);

// Near-field (spherical wavefront) steering vector, unit L2 norm.
// Entry n (0-based) has phase 2*pi*(r_n - r)/lambda with
// r_n = sqrt(r^2 + delta_n^2 (lambda/2)^2 - r*delta_n*lambda*sin(theta)),
// delta_n = (2(n+1) - N - 1)/2. Converges entrywise to the far-field
// steering phases as r -> inf.
CVector near_field_steering(double theta, double r, int n_antennas, double lambda);

// Far-field ULA steering vector (centered phase reference), unit L2 norm.
CVector far_field_steering(double theta, int n_antennas, double lambda);

// Fraunhofer boundary 2*(N*lambda/2)^2 / lambda for an N-element
// half-wavelength ULA.
double rayleigh_distance(int n_antennas, double lambda);

// Draws one UE drop: positions, per-band path lists, LoS condition.
ScenarioSample generate_scenario(const SystemConfig& config, const GeometryConfig& geometry,
                                 Rng& rng);

// Frequency-domain mmWave channel H (M x N_t, row m = h_m^H) from the
// tap-domain geometric model. Throws if a path delay exceeds D*T_s.
CMatrix mmwave_channel(const ScenarioSample& sample, const SystemConfig& config);

// Frequency-domain sub-6G channel (M_sub x N_t_sub, row m = h_m^T as seen
// by the BS array). Paths beyond the sub-6G Rayleigh distance use the
// planar-wavefront steering vector, closer paths the spherical one.
CMatrix sub6_channel(const ScenarioSample& sample, const SystemConfig& config);

// LS channel estimate: truth plus noise scaled by the inverse pilot
// symbol sqrt(P_s_sub / M_sub).
CMatrix ls_estimate(const CMatrix& h_sub, const SystemConfig& config, Rng& rng);

// generate_scenario + both channels + LS estimate.
ChannelPair synthesize_pair(const SystemConfig& config, const GeometryConfig& geometry,
                            Rng& rng);

} // namespace nfbeam

#endif
