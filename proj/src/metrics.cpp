// SPDX-License-Identifier: Apache-2.0

#include "nfbeam/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace nfbeam {

double spectral_efficiency(const CVector& beam, const CMatrix& h_mm, const SystemConfig& config) {
    if (beam.size() != h_mm.cols())
        throw std::invalid_argument("spectral_efficiency: beam/channel dimension mismatch");
    const int m_sub = static_cast<int>(h_mm.rows());
    const double snr_scale = config.p_tx / static_cast<double>(config.n_subcarriers) /
                             config.noise_power;
    double acc = 0.0;
    for (int m = 0; m < m_sub; ++m) {
        double gain = std::norm((h_mm.row(m) * beam).value()); // |h_m^H w|^2 (row m = h_m^H)
        acc += std::log2(1.0 + snr_scale * gain);
    }
    return acc / static_cast<double>(config.n_subcarriers);
}

RateReport optimal_beam(const CMatrix& h_mm, const PolarCodebook& cb, const SystemConfig& config) {
    RateReport report;
    report.per_beam_rate.resize(cb.n_angles(), cb.n_rings());
    report.best_rate = -1.0;
    for (int n = 1; n <= cb.n_angles(); ++n) {
        for (int s = 1; s <= cb.n_rings(); ++s) {
            double rate = spectral_efficiency(cb.beam(n, s), h_mm, config);
            report.per_beam_rate(n - 1, s - 1) = rate;
            if (rate > report.best_rate) { // strict: keeps lowest (n,s) on ties
                report.best_rate = rate;
                report.best_index = {n, s};
            }
        }
    }
    return report;
}

double suboptimality_ratio(const CVector& beam, const CMatrix& h_mm, const RateReport& report,
                           const SystemConfig& config) {
    if (report.best_rate <= 0.0) return 1.0;
    return spectral_efficiency(beam, h_mm, config) / report.best_rate;
}

double suboptimality_ratio(BeamIndex idx, const RateReport& report) {
    if (report.best_rate <= 0.0) return 1.0;
    return report.per_beam_rate(idx.n - 1, idx.s - 1) / report.best_rate;
}

std::vector<BeamIndex> eps_good_set(const RateReport& report, double eps) {
    if (eps < 0.0 || eps > 1.0)
        throw std::invalid_argument("eps_good_set: eps must be in [0,1]");
    std::vector<BeamIndex> good;
    const int n_angles = static_cast<int>(report.per_beam_rate.rows());
    const int n_rings = static_cast<int>(report.per_beam_rate.cols());
    for (int n = 1; n <= n_angles; ++n)
        for (int s = 1; s <= n_rings; ++s)
            if (suboptimality_ratio({n, s}, report) >= 1.0 - eps) good.push_back({n, s});
    return good;
}

} // namespace nfbeam
