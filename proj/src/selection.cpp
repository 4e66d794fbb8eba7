// SPDX-License-Identifier: Apache-2.0

#include "nfbeam/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nfbeam {

CandidateSet candidate_set(const ScoreMatrix& scores, double lambda_hat,
                           std::uint64_t sample_id) {
    CandidateSet set;
    set.threshold_used = lambda_hat;
    set.source_sample_id = sample_id;
    const int n_angles = static_cast<int>(scores.u.rows());
    const int n_rings = static_cast<int>(scores.u.cols());
    for (int n = 1; n <= n_angles; ++n)
        for (int s = 1; s <= n_rings; ++s)
            if (scores.u(n - 1, s - 1) <= lambda_hat) set.members.push_back({n, s});
    std::stable_sort(set.members.begin(), set.members.end(),
                     [&](const BeamIndex& a, const BeamIndex& b) {
                         double ua = scores.u(a.n - 1, a.s - 1);
                         double ub = scores.u(b.n - 1, b.s - 1);
                         if (ua != ub) return ua < ub;
                         return a < b;
                     });
    return set;
}

namespace {

BeamIndex probability_argmax(const ProbabilityMatrix& p) {
    BeamIndex best{1, 1};
    double best_val = -1.0;
    for (int n = 1; n <= p.p.rows(); ++n)
        for (int s = 1; s <= p.p.cols(); ++s)
            if (p.p(n - 1, s - 1) > best_val) {
                best_val = p.p(n - 1, s - 1);
                best = {n, s};
            }
    return best;
}

} // namespace

SelectionOutcome beam_training(const CandidateSet& cands, const CMatrix& h_mm,
                               const PolarCodebook& cb, const SystemConfig& config, Rng& rng,
                               int pilots_per_beam, const ProbabilityMatrix* probabilities,
                               bool keep_powers) {
    if (pilots_per_beam < 1)
        throw std::invalid_argument("beam_training: pilots_per_beam must be >= 1");

    SelectionOutcome out;
    if (cands.members.empty()) {
        if (probabilities == nullptr)
            throw std::invalid_argument(
                "beam_training: empty candidate set requires a probability matrix fallback");
        out.branch = SelectionBranch::empty_set_fallback;
        out.chosen = probability_argmax(*probabilities);
        out.pilots_used = 0;
        return out;
    }
    if (cands.members.size() == 1) {
        out.branch = SelectionBranch::singleton;
        out.chosen = cands.members.front();
        out.pilots_used = 0;
        return out;
    }

    out.branch = SelectionBranch::trained;
    const int m_sub = config.n_subcarriers;
    const double pilot = std::sqrt(config.p_pilot / m_sub);
    double best_power = -1.0;
    std::vector<double> powers;
    powers.reserve(cands.members.size());
    for (const BeamIndex& idx : cands.members) {
        const CVector& w = cb.beam(idx);
        double avg_power = 0.0;
        for (int rep = 0; rep < pilots_per_beam; ++rep) {
            double power = 0.0;
            for (int m = 0; m < m_sub; ++m) {
                // combiner output h_m^H w: row m stores h_m^H, so the
                // training power matches the downlink rate of the same beam
                std::complex<double> wth = (h_mm.row(m) * w).value();
                std::complex<double> y = wth * pilot + complex_normal(rng, config.noise_power);
                power += std::norm(y);
            }
            avg_power += power;
        }
        avg_power /= pilots_per_beam;
        powers.push_back(avg_power);
        if (avg_power > best_power) {
            best_power = avg_power;
            out.chosen = idx;
        }
    }
    out.pilots_used = static_cast<int>(cands.members.size()) * pilots_per_beam;
    if (keep_powers) out.received_powers = std::move(powers);
    return out;
}

PipelineResult run_pipeline(const ChannelPair& pair, const Predictor& predictor,
                            const PolarCodebook& cb, const ThresholdResult& thresh,
                            const SystemConfig& config, Rng& rng, double eps,
                            int pilots_per_beam, std::uint64_t sample_id, bool keep_powers) {
    ProbabilityMatrix p = predictor.predict(pair, cb, config, sample_id);
    ScoreMatrix u = score_matrix(p);
    CandidateSet set = candidate_set(u, thresh.lambda_hat, sample_id);

    PipelineResult result;
    result.outcome =
        beam_training(set, pair.h_mm, cb, config, rng, pilots_per_beam, &p, keep_powers);

    RateReport report = optimal_beam(pair.h_mm, cb, config);
    std::vector<BeamIndex> good = eps_good_set(report, eps);
    result.diagnostics.set_size = static_cast<int>(set.members.size());
    result.diagnostics.critical_score = critical_score(u, good);
    result.diagnostics.covered = std::any_of(good.begin(), good.end(), [&](const BeamIndex& g) {
        return std::find(set.members.begin(), set.members.end(), g) != set.members.end();
    });
    result.diagnostics.chosen_ratio = suboptimality_ratio(result.outcome.chosen, report);
    return result;
}

} // namespace nfbeam
