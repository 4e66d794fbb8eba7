// SPDX-License-Identifier: Apache-2.0
//
// Conformal risk control: empirical risk, threshold calibration via the
// sorted-score grid, and the importance-weighted variant for covariate
// shift between calibration and deployment.

#ifndef NFBEAM_CRC_HPP
#define NFBEAM_CRC_HPP

#include <limits>
#include <optional>
#include <vector>

#include "nfbeam/predictor.hpp"

namespace nfbeam {

// Per-sample critical score: the smallest threshold at which this
// sample's candidate set first contains an eps-good beam. The optional
// weight is the unnormalized likelihood ratio p_i.
struct CalibrationRecord {
    double critical_score = 0.0;
    std::uint64_t sample_id = 0;
    std::optional<double> weight;
};

enum class CalibrationMode { standard, weighted };

// lambda_hat == +infinity means "select the full codebook" (weighted
// infeasibility fallback).
struct ThresholdResult {
    double lambda_hat = 0.0;
    double achieved_empirical_risk = 0.0;
    double alpha = 0.0;
    int n_cal = 0;
    CalibrationMode mode = CalibrationMode::standard;

    bool full_codebook_sentinel() const {
        return lambda_hat == std::numeric_limits<double>::infinity();
    }
};

// min over (n,s) in eps_good of u_{n,s}; throws on an empty set.
double critical_score(const ScoreMatrix& scores, const std::vector<BeamIndex>& eps_good);

// (1/N) #{i : lambda < lambda_i}; right-continuous non-increasing step
// function of lambda.
double empirical_risk(const std::vector<CalibrationRecord>& records, double lambda);

// Smallest lambda on the sorted score grid with
// empirical_risk(lambda) <= alpha + (alpha - 1)/N_cal. Throws when the
// calibration set is too small for the target alpha.
ThresholdResult calibrate(const std::vector<CalibrationRecord>& records, double alpha);

// Order-statistic form of the same threshold: the ceil(q N)-th smallest
// score with q = 1 - floor(alpha N + alpha - 1)/N. Equals calibrate()
// whenever feasible; kept as an independent route for cross-checks.
double quantile_threshold(const std::vector<CalibrationRecord>& records, double alpha);

struct WeightedRisk {
    double risk = 0.0;        // sum_i omega_i 1(lambda < lambda_i)
    double omega_prime = 0.0; // normalized test-sample weight
};

// Normalizes weights omega_i = p_i/(sum_j p_j + p_prime) and evaluates
// the weighted miscoverage estimate at lambda. Every record must carry a
// weight; all-zero total weight is an error.
WeightedRisk weighted_risk(const std::vector<CalibrationRecord>& records, double lambda,
                           double p_prime);

// Smallest grid lambda with weighted risk <= alpha - omega_prime. When
// no threshold exists (omega_prime > alpha) returns the +infinity
// sentinel rather than failing.
ThresholdResult calibrate_weighted(const std::vector<CalibrationRecord>& records, double alpha,
                                   double p_prime);

// Likelihood ratio from a probabilistic classifier output: g/(1-g) with
// g clamped to [1e-6, 1 - 1e-6].
double estimate_ratios(double classifier_output);

// Hand-crafted sub-6G estimate features for the density-ratio
// discriminator: log mean power, delay spread (bins) and angular spread
// (sin units) of the angle-delay energy spectrum.
Eigen::Vector3d ratio_features(const CMatrix& h_sub_est, const SystemConfig& config);

// Logistic discriminator on ratio_features, trained by full-batch
// gradient descent on cross-entropy (label 1 = test distribution).
class FeatureRatioEstimator {
public:
    struct FitOptions {
        int iterations = 500;
        double learning_rate = 0.5;
    };

    void fit(const std::vector<Eigen::Vector3d>& calibration_features,
             const std::vector<Eigen::Vector3d>& test_features, FitOptions opts);
    void fit(const std::vector<Eigen::Vector3d>& calibration_features,
             const std::vector<Eigen::Vector3d>& test_features) {
        fit(calibration_features, test_features, FitOptions{});
    }

    double classifier_output(const Eigen::Vector3d& features) const; // g in (0,1)
    double ratio(const Eigen::Vector3d& features) const {
        return estimate_ratios(classifier_output(features));
    }

private:
    Eigen::Vector3d scale_ = Eigen::Vector3d::Ones();
    Eigen::Vector3d shift_ = Eigen::Vector3d::Zero();
    Eigen::Vector3d coef_ = Eigen::Vector3d::Zero();
    double intercept_ = 0.0;
};

} // namespace nfbeam

#endif
