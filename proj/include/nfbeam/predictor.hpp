// SPDX-License-Identifier: Apache-2.0
//
// Beam-probability predictor contract, analytic baseline predictors and
// the negatively oriented beam score.

#ifndef NFBEAM_PREDICTOR_HPP
#define NFBEAM_PREDICTOR_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>

#include "nfbeam/metrics.hpp"

namespace nfbeam {

// Nonnegative N_t x S matrix summing to 1. Entries are floored at
// kProbabilityFloor before use so scores stay finite.
struct ProbabilityMatrix {
    Eigen::MatrixXd p;
};

inline constexpr double kProbabilityFloor = 1e-12;

// Floors and renormalizes raw nonnegative weights into a valid
// ProbabilityMatrix. Throws if the input has negative or non-finite
// entries or sums to zero.
ProbabilityMatrix make_probability_matrix(Eigen::MatrixXd raw);

// Per-beam score u_{n,s} = -log P_max - log P_{n,s} (natural log).
// Minimum entry -2 log P_max, attained at every argmax cell.
struct ScoreMatrix {
    Eigen::MatrixXd u;
};

ScoreMatrix score_matrix(const ProbabilityMatrix& p);

// Predictor contract: deterministic map from a sample to beam
// probabilities. Implementations other than the test-only oracle must
// use only pair.h_sub_est.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual ProbabilityMatrix predict(const ChannelPair& pair, const PolarCodebook& cb,
                                      const SystemConfig& config,
                                      std::uint64_t sample_id = 0) const = 0;
    virtual std::string name() const = 0;
};

// Every beam gets probability 1/(N_t S).
class UniformPredictor final : public Predictor {
public:
    ProbabilityMatrix predict(const ChannelPair& pair, const PolarCodebook& cb,
                              const SystemConfig& config, std::uint64_t) const override;
    std::string name() const override { return "uniform"; }
};

// Test-only cheating predictor: peeks at the ground-truth mmWave channel
// and puts mass 1 - delta on the optimal beam.
class OraclePredictor final : public Predictor {
public:
    explicit OraclePredictor(double delta = 0.01) : delta_(delta) {}
    ProbabilityMatrix predict(const ChannelPair& pair, const PolarCodebook& cb,
                              const SystemConfig& config, std::uint64_t) const override;
    std::string name() const override { return "oracle"; }
    double delta() const { return delta_; }

private:
    double delta_;
};

// Angle-delay spectrum of the sub-6G estimate mapped onto codebook cells
// and passed through a temperature softmax. Angle bins oversample the
// sub-6G array 4x in the sin domain.
class AdtPredictor final : public Predictor {
public:
    explicit AdtPredictor(double temperature = 0.05) : temperature_(temperature) {
        if (temperature <= 0) throw std::invalid_argument("AdtPredictor: temperature must be > 0");
    }
    ProbabilityMatrix predict(const ChannelPair& pair, const PolarCodebook& cb,
                              const SystemConfig& config, std::uint64_t) const override;
    std::string name() const override { return "adt"; }
    double temperature() const { return temperature_; }

private:
    double temperature_;
};

ProbabilityMatrix adt_predict(const CMatrix& h_sub_est, const PolarCodebook& cb,
                              const SystemConfig& config, double temperature);

// Angle-delay energy spectrum used by AdtPredictor; rows are delay bins
// (M_sub), columns angle bins (4 N_t_sub midpoints in the sin domain).
Eigen::MatrixXd angle_delay_spectrum(const CMatrix& h_sub_est, const SystemConfig& config);

// sin-domain angle-bin midpoints matching angle_delay_spectrum columns.
std::vector<double> angle_bin_grid(int n_antennas_sub);

// Serves externally computed probability matrices keyed by sample id
// (see ProbabilityFile in dataset.hpp).
class ExternalPredictor final : public Predictor {
public:
    explicit ExternalPredictor(std::unordered_map<std::uint64_t, Eigen::MatrixXd> records)
        : records_(std::move(records)) {}
    ProbabilityMatrix predict(const ChannelPair& pair, const PolarCodebook& cb,
                              const SystemConfig& config, std::uint64_t sample_id) const override;
    std::string name() const override { return "external"; }

private:
    std::unordered_map<std::uint64_t, Eigen::MatrixXd> records_;
};

} // namespace nfbeam

#endif
