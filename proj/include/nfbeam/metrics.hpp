// SPDX-License-Identifier: Apache-2.0
//
// Spectral efficiency, oracle beam search, suboptimality ratios and the
// eps-good beam set shared by calibration and evaluation.

#ifndef NFBEAM_METRICS_HPP
#define NFBEAM_METRICS_HPP

#include <vector>

#include "nfbeam/codebook.hpp"

namespace nfbeam {

// Exhaustive rate evaluation over the codebook.
struct RateReport {
    Eigen::MatrixXd per_beam_rate; // N_t x S, bits/s/Hz
    BeamIndex best_index;
    double best_rate = 0.0;
};

// (1/M) sum_m log2(1 + (P_t/M) |h_m^H w|^2 / sigma_n^2).
double spectral_efficiency(const CVector& beam, const CMatrix& h_mm, const SystemConfig& config);

// Evaluates every beam in the codebook (exhaustive search). Ties broken
// by lowest n, then lowest s.
RateReport optimal_beam(const CMatrix& h_mm, const PolarCodebook& cb, const SystemConfig& config);

// r = R(w,H)/R(f*,H), in [0,1]. Defined as 1 when best_rate == 0.
double suboptimality_ratio(const CVector& beam, const CMatrix& h_mm, const RateReport& report,
                           const SystemConfig& config);

// Ratio for a beam already scored in the report (no rate recomputation).
double suboptimality_ratio(BeamIndex idx, const RateReport& report);

// F_eps(H) = {(n,s) : r(w_{n,s}, H) >= 1 - eps}; never empty, always
// contains the best index.
std::vector<BeamIndex> eps_good_set(const RateReport& report, double eps);

} // namespace nfbeam

#endif
