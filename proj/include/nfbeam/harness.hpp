// SPDX-License-Identifier: Apache-2.0
//
// Batch experiment orchestration: dataset generation, splits, predictor
// wiring, calibration/evaluation commands and sweep protocols.

#ifndef NFBEAM_HARNESS_HPP
#define NFBEAM_HARNESS_HPP

#include <array>
#include <functional>
#include <memory>
#include <optional>

#include <nlohmann/json.hpp>

#include "nfbeam/dataset.hpp"
#include "nfbeam/selection.hpp"

namespace nfbeam {

// Tagged predictor choice, serializable into reports so evaluation can
// refuse a mismatched calibration.
struct PredictorSpec {
    enum class Type { uniform, adt, oracle, external };
    Type type = Type::adt;
    double temperature = 0.05; // adt
    double delta = 0.01;       // oracle
    std::string file;          // external probability file

    std::string describe() const;
    friend bool operator==(const PredictorSpec&, const PredictorSpec&) = default;
};

std::unique_ptr<Predictor> make_predictor(const PredictorSpec& spec);

void to_json(nlohmann::json& j, const PredictorSpec& spec);
void from_json(const nlohmann::json& j, PredictorSpec& spec);

// Covariate-shift study: LoS/NLoS mix differs between calibration and
// test; ratio = p_los/(1 - p_los).
struct ShiftSpec {
    double cal_los_ratio = 1.0;
    std::vector<double> test_los_ratios = {0.25, 1.0, 4.0};
    std::string ratio_mode = "oracle"; // oracle | learned
};

struct ExperimentConfig {
    SystemConfig system = desk_profile();
    GeometryConfig geometry;
    std::array<double, 4> split_ratios = {0.5, 0.1, 0.2, 0.2}; // train/val/cal/test
    double eps = 0.15;
    std::vector<double> alphas = {0.15};
    PredictorSpec predictor;
    std::optional<ShiftSpec> shift;
    int n_samples = 2000;
    int n_trials = 15;
    int pilots_per_beam = 1;
    std::uint64_t seed = 1;

    void validate() const;
};

ExperimentConfig load_experiment_config(const std::string& path);
void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

// Disjoint index sets; sizes follow largest-remainder rounding of the
// split ratios. Train/val are produced for external predictor workflows
// and left unused by the shipped analytic predictors.
struct SplitIndices {
    std::vector<std::size_t> train, val, cal, test;
};

SplitIndices split_samples(std::size_t n, const std::array<double, 4>& ratios, Rng& rng);

// Worker count for sample-parallel loops: NFBEAM_WORKERS overrides
// hardware concurrency.
int worker_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

Dataset generate_dataset(const ExperimentConfig& config);

// Everything the calibration and evaluation paths need per sample,
// computed once.
struct SampleEval {
    ProbabilityMatrix probabilities;
    ScoreMatrix scores;
    RateReport report;
    std::vector<BeamIndex> eps_good;
    double critical_score = 0.0;
};

SampleEval evaluate_sample(const ChannelPair& pair, const Predictor& predictor,
                           const PolarCodebook& cb, const SystemConfig& config, double eps,
                           std::uint64_t sample_id = 0);

std::vector<SampleEval> evaluate_samples(const Dataset& dataset, const Predictor& predictor,
                                         const PolarCodebook& cb, double eps);

std::vector<CalibrationRecord> calibration_records(const std::vector<SampleEval>& evals,
                                                   const std::vector<std::size_t>& indices,
                                                   const Dataset& dataset);

// Aggregate test-split metrics (coverage/size/pilot accounting per the
// achieved-rate definitions used in reporting).
struct EvaluationSummary {
    double achieved_coverage = 0.0;
    double achieved_eps_suboptimal_rate = 0.0;
    double mean_set_size = 0.0;
    std::array<double, 4> set_size_quantiles = {0, 0, 0, 0}; // p25/p50/p75/p90
    double mean_pilots = 0.0;
    double lambda_hat = 0.0;
    int n_test = 0;
};

struct PerSampleRow {
    std::uint64_t sample_id = 0;
    int set_size = 0;
    SelectionBranch branch = SelectionBranch::trained;
    BeamIndex chosen;
    double ratio = 0.0;
    bool covered = false;
    int pilots_used = 0;
};

struct EvaluationReport {
    EvaluationSummary summary;
    std::vector<PerSampleRow> rows;
};

EvaluationReport evaluate_split(const Dataset& dataset, const std::vector<std::size_t>& test,
                                const std::vector<SampleEval>& evals,
                                const ThresholdResult& thresh, const SystemConfig& config,
                                double eps, int pilots_per_beam, std::uint64_t rng_salt);

// CLI entry points; each throws on configuration errors and writes the
// artifacts it names.
void cmd_generate(const ExperimentConfig& config, const std::string& out_path);
nlohmann::json cmd_calibrate(const std::string& dataset_path, double eps, double alpha,
                             const PredictorSpec& spec, const std::string& out_path);
EvaluationReport cmd_evaluate(const std::string& dataset_path,
                              const std::string& calibration_report_path, int pilots_per_beam,
                              const std::string& out_prefix);
void cmd_sweep(const ExperimentConfig& config, const std::string& axis,
               const std::vector<double>& grid, const std::string& out_csv);
void cmd_shift(const ExperimentConfig& config, const std::string& out_csv);

// CSV helper for codebook inspection dumps.
void dump_codebook_csv(const PolarCodebook& cb, const std::string& path);

} // namespace nfbeam

#endif
