// SPDX-License-Identifier: Apache-2.0

#include "nfbeam/crc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nfbeam {

double critical_score(const ScoreMatrix& scores, const std::vector<BeamIndex>& eps_good) {
    if (eps_good.empty())
        throw std::logic_error("critical_score: eps-good set must be nonempty");
    double best = std::numeric_limits<double>::infinity();
    for (const BeamIndex& idx : eps_good)
        best = std::min(best, scores.u(idx.n - 1, idx.s - 1));
    return best;
}

double empirical_risk(const std::vector<CalibrationRecord>& records, double lambda) {
    if (records.empty()) throw std::invalid_argument("empirical_risk: no records");
    std::size_t misses = 0;
    for (const CalibrationRecord& r : records)
        if (lambda < r.critical_score) ++misses;
    return static_cast<double>(misses) / static_cast<double>(records.size());
}

namespace {

std::vector<double> sorted_scores(const std::vector<CalibrationRecord>& records) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const CalibrationRecord& r : records) v.push_back(r.critical_score);
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

ThresholdResult calibrate(const std::vector<CalibrationRecord>& records, double alpha) {
    if (records.empty()) throw std::invalid_argument("calibrate: no records");
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("calibrate: alpha must lie in (0,1)");
    const int n = static_cast<int>(records.size());
    const double bound = alpha + (alpha - 1.0) / n;
    if (bound < 0.0) {
        int required = static_cast<int>(std::ceil((1.0 - alpha) / alpha));
        throw std::invalid_argument(
            "calibrate: target alpha = " + std::to_string(alpha) + " infeasible with N_cal = " +
            std::to_string(n) + "; need N_cal >= " + std::to_string(required));
    }

    // The empirical risk only jumps at the scores themselves, so the
    // infimum over the real line is attained on the sorted grid.
    std::vector<double> grid = sorted_scores(records);
    ThresholdResult result;
    result.alpha = alpha;
    result.n_cal = n;
    result.mode = CalibrationMode::standard;
    for (int k = 0; k < n; ++k) {
        // risk at grid[k]: count of scores strictly above it
        auto above = grid.end() - std::upper_bound(grid.begin(), grid.end(), grid[k]);
        double risk = static_cast<double>(above) / n;
        if (risk <= bound) {
            result.lambda_hat = grid[k];
            result.achieved_empirical_risk = risk;
            return result;
        }
    }
    // unreachable: risk at the max score is 0 <= bound
    throw std::logic_error("calibrate: no feasible threshold on the score grid");
}

double quantile_threshold(const std::vector<CalibrationRecord>& records, double alpha) {
    if (records.empty()) throw std::invalid_argument("quantile_threshold: no records");
    const int n = static_cast<int>(records.size());
    const double q = 1.0 - std::floor(alpha * n + alpha - 1.0) / n;
    const int k = static_cast<int>(std::ceil(q * n));
    if (k < 1 || k > n)
        throw std::invalid_argument("quantile_threshold: order statistic " + std::to_string(k) +
                                    " out of range for N_cal = " + std::to_string(n));
    std::vector<double> grid = sorted_scores(records);
    return grid[k - 1];
}

WeightedRisk weighted_risk(const std::vector<CalibrationRecord>& records, double lambda,
                           double p_prime) {
    if (records.empty()) throw std::invalid_argument("weighted_risk: no records");
    if (p_prime < 0.0) throw std::invalid_argument("weighted_risk: p_prime must be >= 0");
    double total = p_prime;
    for (const CalibrationRecord& r : records) {
        if (!r.weight)
            throw std::invalid_argument("weighted_risk: record without likelihood ratio");
        if (*r.weight < 0.0)
            throw std::invalid_argument("weighted_risk: negative likelihood ratio");
        total += *r.weight;
    }
    if (total <= 0.0)
        throw std::invalid_argument("weighted_risk: all likelihood ratios are zero");

    WeightedRisk out;
    out.omega_prime = p_prime / total;
    for (const CalibrationRecord& r : records)
        if (lambda < r.critical_score) out.risk += *r.weight / total;
    return out;
}

ThresholdResult calibrate_weighted(const std::vector<CalibrationRecord>& records, double alpha,
                                   double p_prime) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("calibrate_weighted: alpha must lie in (0,1)");
    ThresholdResult result;
    result.alpha = alpha;
    result.n_cal = static_cast<int>(records.size());
    result.mode = CalibrationMode::weighted;

    std::vector<double> grid = sorted_scores(records);
    for (double lambda : grid) {
        WeightedRisk wr = weighted_risk(records, lambda, p_prime);
        if (wr.risk <= alpha - wr.omega_prime) {
            result.lambda_hat = lambda;
            result.achieved_empirical_risk = wr.risk;
            return result;
        }
    }
    // omega' > alpha: no threshold can satisfy the condition; fall back
    // to the full codebook, which covers trivially.
    result.lambda_hat = std::numeric_limits<double>::infinity();
    result.achieved_empirical_risk = 0.0;
    return result;
}

double estimate_ratios(double classifier_output) {
    double g = std::clamp(classifier_output, 1e-6, 1.0 - 1e-6);
    return g / (1.0 - g);
}

Eigen::Vector3d ratio_features(const CMatrix& h_sub_est, const SystemConfig& config) {
    Eigen::MatrixXd energy = angle_delay_spectrum(h_sub_est, config);
    const double total = energy.sum() + 1e-30;

    Eigen::VectorXd delay_profile = energy.rowwise().sum() / total;
    double delay_mean = 0.0, delay_m2 = 0.0;
    for (int b = 0; b < delay_profile.size(); ++b) {
        delay_mean += b * delay_profile(b);
        delay_m2 += static_cast<double>(b) * b * delay_profile(b);
    }
    double delay_spread = std::sqrt(std::max(0.0, delay_m2 - delay_mean * delay_mean));

    const std::vector<double> grid = angle_bin_grid(config.n_tx_sub);
    Eigen::VectorXd angle_profile = energy.colwise().sum() / total;
    double angle_mean = 0.0, angle_m2 = 0.0;
    for (int a = 0; a < angle_profile.size(); ++a) {
        angle_mean += grid[a] * angle_profile(a);
        angle_m2 += grid[a] * grid[a] * angle_profile(a);
    }
    double angle_spread = std::sqrt(std::max(0.0, angle_m2 - angle_mean * angle_mean));

    double mean_power = h_sub_est.squaredNorm() /
                        static_cast<double>(h_sub_est.rows() * h_sub_est.cols());
    return {std::log10(mean_power + 1e-30), delay_spread, angle_spread};
}

void FeatureRatioEstimator::fit(const std::vector<Eigen::Vector3d>& calibration_features,
                                const std::vector<Eigen::Vector3d>& test_features,
                                FitOptions opts) {
    if (calibration_features.empty() || test_features.empty())
        throw std::invalid_argument("FeatureRatioEstimator: both feature sets must be nonempty");

    const std::size_t n = calibration_features.size() + test_features.size();
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& f : calibration_features) mean += f;
    for (const auto& f : test_features) mean += f;
    mean /= static_cast<double>(n);
    Eigen::Vector3d var = Eigen::Vector3d::Zero();
    for (const auto& f : calibration_features) var += (f - mean).cwiseAbs2();
    for (const auto& f : test_features) var += (f - mean).cwiseAbs2();
    var /= static_cast<double>(n);
    shift_ = mean;
    scale_ = (var.array() + 1e-12).sqrt().inverse();

    // class-balanced cross-entropy so unequal set sizes do not bias the
    // intercept away from the prior odds
    const double w_cal = 0.5 / static_cast<double>(calibration_features.size());
    const double w_test = 0.5 / static_cast<double>(test_features.size());
    coef_.setZero();
    intercept_ = 0.0;
    for (int it = 0; it < opts.iterations; ++it) {
        Eigen::Vector3d grad = Eigen::Vector3d::Zero();
        double grad0 = 0.0;
        auto accumulate = [&](const Eigen::Vector3d& f, double label, double w) {
            Eigen::Vector3d x = (f - shift_).cwiseProduct(scale_);
            double g = 1.0 / (1.0 + std::exp(-(coef_.dot(x) + intercept_)));
            grad += w * (g - label) * x;
            grad0 += w * (g - label);
        };
        for (const auto& f : calibration_features) accumulate(f, 0.0, w_cal);
        for (const auto& f : test_features) accumulate(f, 1.0, w_test);
        coef_ -= opts.learning_rate * grad;
        intercept_ -= opts.learning_rate * grad0;
    }
}

double FeatureRatioEstimator::classifier_output(const Eigen::Vector3d& features) const {
    Eigen::Vector3d x = (features - shift_).cwiseProduct(scale_);
    return 1.0 / (1.0 + std::exp(-(coef_.dot(x) + intercept_)));
}

} // namespace nfbeam
