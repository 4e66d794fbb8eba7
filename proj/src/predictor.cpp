// SPDX-License-Identifier: Apache-2.0

#include "nfbeam/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nfbeam {

namespace {
constexpr double kPi = std::numbers::pi;
const std::complex<double> kJ{0.0, 1.0};
} // namespace

ProbabilityMatrix make_probability_matrix(Eigen::MatrixXd raw) {
    if (!raw.allFinite() || (raw.array() < 0.0).any())
        throw std::invalid_argument("ProbabilityMatrix: entries must be finite and >= 0");
    double total = raw.sum();
    if (total <= 0.0)
        throw std::invalid_argument("ProbabilityMatrix: entries sum to zero");
    raw /= total;
    raw = raw.cwiseMax(kProbabilityFloor);
    raw /= raw.sum();
    return ProbabilityMatrix{std::move(raw)};
}

ScoreMatrix score_matrix(const ProbabilityMatrix& p) {
    double p_max = p.p.maxCoeff();
    Eigen::MatrixXd u = -p.p.array().log() - std::log(p_max);
    return ScoreMatrix{std::move(u)};
}

ProbabilityMatrix UniformPredictor::predict(const ChannelPair&, const PolarCodebook& cb,
                                            const SystemConfig&, std::uint64_t) const {
    return make_probability_matrix(Eigen::MatrixXd::Ones(cb.n_angles(), cb.n_rings()));
}

ProbabilityMatrix OraclePredictor::predict(const ChannelPair& pair, const PolarCodebook& cb,
                                           const SystemConfig& config, std::uint64_t) const {
    RateReport report = optimal_beam(pair.h_mm, cb, config);
    const int total = cb.size();
    Eigen::MatrixXd p =
        Eigen::MatrixXd::Constant(cb.n_angles(), cb.n_rings(), delta_ / (total - 1));
    p(report.best_index.n - 1, report.best_index.s - 1) = 1.0 - delta_;
    return make_probability_matrix(std::move(p));
}

std::vector<double> angle_bin_grid(int n_antennas_sub) {
    const int n_bins = 4 * n_antennas_sub;
    std::vector<double> grid(n_bins);
    for (int a = 0; a < n_bins; ++a)
        grid[a] = -1.0 + (2.0 * a + 1.0) / n_bins; // midpoints, avoids sin = +-1
    return grid;
}

Eigen::MatrixXd angle_delay_spectrum(const CMatrix& h_sub_est, const SystemConfig& config) {
    const int m_sub = config.n_subcarriers_sub;
    const int n_ant = config.n_tx_sub;
    if (h_sub_est.rows() != m_sub || h_sub_est.cols() != n_ant)
        throw std::invalid_argument("angle_delay_spectrum: estimate dimension mismatch");

    // Delay transform: a tap at delay d progresses across subcarriers as
    // exp(-j 2 pi m d / M_sub); correlating with the conjugate phase
    // concentrates its energy at delay bin b = d.
    CMatrix delay_domain(m_sub, n_ant);
    for (int b = 0; b < m_sub; ++b) {
        CVector w(m_sub);
        for (int m = 1; m <= m_sub; ++m)
            w(m - 1) = std::exp(kJ * (2.0 * kPi * m * static_cast<double>(b) / m_sub));
        delay_domain.row(b) = w.transpose() * h_sub_est;
    }

    const std::vector<double> grid = angle_bin_grid(n_ant);
    const int n_bins = static_cast<int>(grid.size());
    Eigen::MatrixXd energy(m_sub, n_bins);
    for (int a = 0; a < n_bins; ++a) {
        CVector steer(n_ant);
        for (int k = 0; k < n_ant; ++k) {
            double delta = (2.0 * (k + 1) - n_ant - 1) / 2.0;
            // conjugate-matched to the e^{+j pi delta sin} progression of h^H rows
            steer(k) = std::exp(-kJ * (kPi * delta * grid[a]));
        }
        for (int b = 0; b < m_sub; ++b)
            energy(b, a) = std::norm((delay_domain.row(b) * steer).value());
    }
    return energy;
}

ProbabilityMatrix adt_predict(const CMatrix& h_sub_est, const PolarCodebook& cb,
                              const SystemConfig& config, double temperature) {
    Eigen::MatrixXd energy = angle_delay_spectrum(h_sub_est, config);
    const std::vector<double> grid = angle_bin_grid(config.n_tx_sub);
    const double t_sub = config.sampling_period_sub();

    Eigen::MatrixXd z(cb.n_angles(), cb.n_rings());
    for (int n = 1; n <= cb.n_angles(); ++n) {
        double sin_theta = std::sin(cb.angle(n));
        int a_star = 0;
        for (int a = 1; a < static_cast<int>(grid.size()); ++a)
            if (std::abs(grid[a] - sin_theta) < std::abs(grid[a_star] - sin_theta)) a_star = a;
        for (int s = 1; s <= cb.n_rings(); ++s) {
            double delay = cb.distance(n, s) / kSpeedOfLight;
            int b_star = static_cast<int>(std::lround(delay / t_sub));
            b_star = std::clamp(b_star, 0, config.n_subcarriers_sub - 1);
            z(n - 1, s - 1) = energy(b_star, a_star);
        }
    }
    double z_max = z.maxCoeff();
    if (z_max <= 0.0) // zero-energy estimate: nothing to rank
        return make_probability_matrix(Eigen::MatrixXd::Ones(cb.n_angles(), cb.n_rings()));
    Eigen::MatrixXd logits = (z / z_max / temperature).array();
    logits.array() -= logits.maxCoeff();
    return make_probability_matrix(logits.array().exp());
}

ProbabilityMatrix AdtPredictor::predict(const ChannelPair& pair, const PolarCodebook& cb,
                                        const SystemConfig& config, std::uint64_t) const {
    return adt_predict(pair.h_sub_est, cb, config, temperature_);
}

ProbabilityMatrix ExternalPredictor::predict(const ChannelPair&, const PolarCodebook& cb,
                                             const SystemConfig&, std::uint64_t sample_id) const {
    auto it = records_.find(sample_id);
    if (it == records_.end())
        throw std::runtime_error("ExternalPredictor: no probability record for sample " +
                                 std::to_string(sample_id));
    if (it->second.rows() != cb.n_angles() || it->second.cols() != cb.n_rings())
        throw std::invalid_argument("ExternalPredictor: probability matrix dimension mismatch");
    return make_probability_matrix(it->second);
}

} // namespace nfbeam
