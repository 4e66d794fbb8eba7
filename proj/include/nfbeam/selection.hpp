// SPDX-License-Identifier: Apache-2.0
//
// Candidate beam subsets and the three-branch mmWave training stage.

#ifndef NFBEAM_SELECTION_HPP
#define NFBEAM_SELECTION_HPP

#include "nfbeam/crc.hpp"

namespace nfbeam {

// Beams whose score does not exceed the calibrated threshold, ordered by
// ascending score (ties lexicographic in (n,s)).
struct CandidateSet {
    std::vector<BeamIndex> members;
    double threshold_used = 0.0;
    std::uint64_t source_sample_id = 0;
};

enum class SelectionBranch { empty_set_fallback, singleton, trained };

struct SelectionOutcome {
    BeamIndex chosen;
    SelectionBranch branch = SelectionBranch::trained;
    int pilots_used = 0;
    std::vector<double> received_powers; // per member, W; kept only on request
};

CandidateSet candidate_set(const ScoreMatrix& scores, double lambda_hat,
                           std::uint64_t sample_id = 0);

// Uplink training over the candidate set: per member, simulate
// y_m = w^T h_m s_p + w^T n_m for every subcarrier and pick the largest
// average received power. The probability matrix backs the empty-set
// fallback and must be supplied when the set may be empty.
SelectionOutcome beam_training(const CandidateSet& cands, const CMatrix& h_mm,
                               const PolarCodebook& cb, const SystemConfig& config, Rng& rng,
                               int pilots_per_beam = 1,
                               const ProbabilityMatrix* probabilities = nullptr,
                               bool keep_powers = false);

// Per-sample diagnostics computed against the ground-truth channel.
struct PipelineDiagnostics {
    int set_size = 0;
    bool covered = false;       // eps-good beam present in the candidate set
    double chosen_ratio = 0.0;  // suboptimality ratio of the final beam
    double critical_score = 0.0;
};

struct PipelineResult {
    SelectionOutcome outcome;
    PipelineDiagnostics diagnostics;
};

// predict -> score -> candidate_set -> beam_training, with coverage and
// suboptimality diagnostics from the simulator-side ground truth.
PipelineResult run_pipeline(const ChannelPair& pair, const Predictor& predictor,
                            const PolarCodebook& cb, const ThresholdResult& thresh,
                            const SystemConfig& config, Rng& rng, double eps,
                            int pilots_per_beam = 1, std::uint64_t sample_id = 0,
                            bool keep_powers = false);

} // namespace nfbeam

#endif
