// SPDX-License-Identifier: Apache-2.0

#include "nfbeam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "nfbeam/json_config.hpp"

namespace nfbeam {

namespace {

constexpr std::uint64_t kSplitSalt = 0x73706c6974ULL;    // stream tag: sample splitting
constexpr std::uint64_t kSampleSalt = 0x73616d70ULL;     // stream tag: sample generation
constexpr std::uint64_t kTrainingSalt = 0x747261696eULL; // stream tag: beam training noise

const char* branch_name(SelectionBranch b) {
    switch (b) {
        case SelectionBranch::empty_set_fallback: return "fallback";
        case SelectionBranch::singleton: return "singleton";
        case SelectionBranch::trained: return "trained";
    }
    return "?";
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

std::string PredictorSpec::describe() const {
    switch (type) {
        case Type::uniform: return "uniform";
        case Type::adt: return "adt(temp=" + std::to_string(temperature) + ")";
        case Type::oracle: return "oracle(delta=" + std::to_string(delta) + ")";
        case Type::external: return "external(" + file + ")";
    }
    return "?";
}

std::unique_ptr<Predictor> make_predictor(const PredictorSpec& spec) {
    switch (spec.type) {
        case PredictorSpec::Type::uniform: return std::make_unique<UniformPredictor>();
        case PredictorSpec::Type::adt: return std::make_unique<AdtPredictor>(spec.temperature);
        case PredictorSpec::Type::oracle: return std::make_unique<OraclePredictor>(spec.delta);
        case PredictorSpec::Type::external:
            return std::make_unique<ExternalPredictor>(load_probability_file(spec.file));
    }
    throw std::logic_error("make_predictor: unknown predictor type");
}

void to_json(nlohmann::json& j, const PredictorSpec& spec) {
    static const char* names[] = {"uniform", "adt", "oracle", "external"};
    j = nlohmann::json{{"type", names[static_cast<int>(spec.type)]}};
    if (spec.type == PredictorSpec::Type::adt) j["temperature"] = spec.temperature;
    if (spec.type == PredictorSpec::Type::oracle) j["delta"] = spec.delta;
    if (spec.type == PredictorSpec::Type::external) j["file"] = spec.file;
}

void from_json(const nlohmann::json& j, PredictorSpec& spec) {
    std::string type = j.value("type", "adt");
    if (type == "uniform") spec.type = PredictorSpec::Type::uniform;
    else if (type == "adt") spec.type = PredictorSpec::Type::adt;
    else if (type == "oracle") spec.type = PredictorSpec::Type::oracle;
    else if (type == "external") spec.type = PredictorSpec::Type::external;
    else throw std::invalid_argument("PredictorSpec: unknown type '" + type + "'");
    spec.temperature = j.value("temperature", spec.temperature);
    spec.delta = j.value("delta", spec.delta);
    spec.file = j.value("file", spec.file);
}

void ExperimentConfig::validate() const {
    system.validate();
    geometry.validate();
    double total = 0.0;
    for (double r : split_ratios) {
        if (r < 0.0) throw std::invalid_argument("ExperimentConfig: negative split ratio");
        total += r;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("ExperimentConfig: split ratios must sum to 1");
    if (eps < 0.0 || eps > 1.0)
        throw std::invalid_argument("ExperimentConfig: eps must lie in [0,1]");
    for (double a : alphas)
        if (a <= 0.0 || a >= 1.0)
            throw std::invalid_argument("ExperimentConfig: each alpha must lie in (0,1)");
    if (alphas.empty()) throw std::invalid_argument("ExperimentConfig: alphas must be nonempty");
    if (n_samples < 1 || n_trials < 1 || pilots_per_beam < 1)
        throw std::invalid_argument("ExperimentConfig: counts must be >= 1");
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = nlohmann::json{{"system", c.system},
                       {"geometry", c.geometry},
                       {"split_ratios", c.split_ratios},
                       {"eps", c.eps},
                       {"alphas", c.alphas},
                       {"predictor", c.predictor},
                       {"n_samples", c.n_samples},
                       {"n_trials", c.n_trials},
                       {"pilots_per_beam", c.pilots_per_beam},
                       {"seed", c.seed}};
    if (c.shift) {
        j["shift"] = nlohmann::json{{"cal_los_ratio", c.shift->cal_los_ratio},
                                    {"test_los_ratios", c.shift->test_los_ratios},
                                    {"ratio_mode", c.shift->ratio_mode}};
    }
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    if (j.contains("profile")) {
        std::string profile = j.at("profile").get<std::string>();
        if (profile == "desk") c.system = desk_profile();
        else if (profile == "full") c.system = full_profile();
        else throw std::invalid_argument("ExperimentConfig: unknown profile '" + profile + "'");
    }
    if (j.contains("system")) {
        nlohmann::json merged = j.at("system");
        SystemConfig base = c.system;
        from_json(merged, base);
        c.system = base;
    }
    if (j.contains("geometry")) c.geometry = j.at("geometry").get<GeometryConfig>();
    if (j.contains("split_ratios")) c.split_ratios = j.at("split_ratios").get<std::array<double, 4>>();
    c.eps = j.value("eps", c.eps);
    if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
    if (j.contains("predictor")) c.predictor = j.at("predictor").get<PredictorSpec>();
    if (j.contains("shift")) {
        ShiftSpec s;
        const nlohmann::json& js = j.at("shift");
        s.cal_los_ratio = js.value("cal_los_ratio", s.cal_los_ratio);
        if (js.contains("test_los_ratios"))
            s.test_los_ratios = js.at("test_los_ratios").get<std::vector<double>>();
        s.ratio_mode = js.value("ratio_mode", s.ratio_mode);
        if (s.ratio_mode != "oracle" && s.ratio_mode != "learned")
            throw std::invalid_argument("ShiftSpec: ratio_mode must be oracle or learned");
        c.shift = s;
    }
    c.n_samples = j.value("n_samples", c.n_samples);
    c.n_trials = j.value("n_trials", c.n_trials);
    c.pilots_per_beam = j.value("pilots_per_beam", c.pilots_per_beam);
    c.seed = j.value("seed", c.seed);
    c.validate();
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    nlohmann::json j = nlohmann::json::parse(is);
    ExperimentConfig c;
    from_json(j, c);
    return c;
}

SplitIndices split_samples(std::size_t n, const std::array<double, 4>& ratios, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    // largest-remainder apportionment of the four split sizes
    std::array<std::size_t, 4> counts{};
    std::array<double, 4> remainders{};
    std::size_t assigned = 0;
    for (int i = 0; i < 4; ++i) {
        double exact = ratios[i] * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        remainders[i] = exact - std::floor(exact);
        assigned += counts[i];
    }
    std::array<int, 4> by_remainder = {0, 1, 2, 3};
    std::sort(by_remainder.begin(), by_remainder.end(),
              [&](int a, int b) { return remainders[a] > remainders[b]; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) counts[by_remainder[k % 4]]++;

    SplitIndices split;
    std::size_t pos = 0;
    auto take = [&](std::vector<std::size_t>& dst, std::size_t count) {
        dst.assign(order.begin() + pos, order.begin() + pos + count);
        pos += count;
    };
    take(split.train, counts[0]);
    take(split.val, counts[1]);
    take(split.cal, counts[2]);
    take(split.test, counts[3]);
    return split;
}

int worker_count() {
    if (const char* env = std::getenv("NFBEAM_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    int workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

Dataset generate_dataset(const ExperimentConfig& config) {
    config.validate();
    Dataset dataset;
    dataset.system = config.system;
    dataset.geometry = config.geometry;
    dataset.seed = config.seed;
    dataset.sample_ids.resize(config.n_samples);
    dataset.pairs.resize(config.n_samples);
    parallel_for(static_cast<std::size_t>(config.n_samples), [&](std::size_t i) {
        Rng rng = make_rng(config.seed, i, kSampleSalt);
        dataset.sample_ids[i] = i;
        dataset.pairs[i] = synthesize_pair(config.system, config.geometry, rng);
    });
    return dataset;
}

SampleEval evaluate_sample(const ChannelPair& pair, const Predictor& predictor,
                           const PolarCodebook& cb, const SystemConfig& config, double eps,
                           std::uint64_t sample_id) {
    SampleEval eval;
    eval.probabilities = predictor.predict(pair, cb, config, sample_id);
    eval.scores = score_matrix(eval.probabilities);
    eval.report = optimal_beam(pair.h_mm, cb, config);
    eval.eps_good = eps_good_set(eval.report, eps);
    eval.critical_score = critical_score(eval.scores, eval.eps_good);
    return eval;
}

std::vector<SampleEval> evaluate_samples(const Dataset& dataset, const Predictor& predictor,
                                         const PolarCodebook& cb, double eps) {
    std::vector<SampleEval> evals(dataset.size());
    parallel_for(dataset.size(), [&](std::size_t i) {
        evals[i] = evaluate_sample(dataset.pairs[i], predictor, cb, dataset.system, eps,
                                   dataset.sample_ids[i]);
    });
    return evals;
}

std::vector<CalibrationRecord> calibration_records(const std::vector<SampleEval>& evals,
                                                   const std::vector<std::size_t>& indices,
                                                   const Dataset& dataset) {
    std::vector<CalibrationRecord> records;
    records.reserve(indices.size());
    for (std::size_t i : indices)
        records.push_back({evals[i].critical_score, dataset.sample_ids[i], std::nullopt});
    return records;
}

EvaluationReport evaluate_split(const Dataset& dataset, const std::vector<std::size_t>& test,
                                const std::vector<SampleEval>& evals,
                                const ThresholdResult& thresh, const SystemConfig& config,
                                double eps, int pilots_per_beam, std::uint64_t rng_salt) {
    if (test.empty()) throw std::invalid_argument("evaluate_split: empty test split");
    PolarCodebook cb = build_codebook(config);
    EvaluationReport report;
    report.rows.resize(test.size());
    parallel_for(test.size(), [&](std::size_t k) {
        std::size_t i = test[k];
        const SampleEval& eval = evals[i];
        CandidateSet set = candidate_set(eval.scores, thresh.lambda_hat, dataset.sample_ids[i]);
        Rng rng = make_rng(dataset.seed ^ rng_salt, dataset.sample_ids[i], kTrainingSalt);
        SelectionOutcome outcome = beam_training(set, dataset.pairs[i].h_mm, cb, config, rng,
                                                 pilots_per_beam, &eval.probabilities);
        PerSampleRow row;
        row.sample_id = dataset.sample_ids[i];
        row.set_size = static_cast<int>(set.members.size());
        row.branch = outcome.branch;
        row.chosen = outcome.chosen;
        row.ratio = suboptimality_ratio(outcome.chosen, eval.report);
        row.covered = eval.critical_score <= thresh.lambda_hat;
        row.pilots_used = outcome.pilots_used;
        report.rows[k] = row;
    });

    EvaluationSummary& s = report.summary;
    s.lambda_hat = thresh.lambda_hat;
    s.n_test = static_cast<int>(test.size());
    std::vector<double> sizes;
    sizes.reserve(test.size());
    for (const PerSampleRow& row : report.rows) {
        s.achieved_coverage += row.covered ? 1.0 : 0.0;
        s.achieved_eps_suboptimal_rate += (row.ratio >= 1.0 - eps) ? 1.0 : 0.0;
        s.mean_set_size += row.set_size;
        s.mean_pilots += row.pilots_used;
        sizes.push_back(row.set_size);
    }
    double n = static_cast<double>(test.size());
    s.achieved_coverage /= n;
    s.achieved_eps_suboptimal_rate /= n;
    s.mean_set_size /= n;
    s.mean_pilots /= n;
    std::sort(sizes.begin(), sizes.end());
    s.set_size_quantiles = {quantile_sorted(sizes, 0.25), quantile_sorted(sizes, 0.5),
                            quantile_sorted(sizes, 0.75), quantile_sorted(sizes, 0.9)};
    return report;
}

void cmd_generate(const ExperimentConfig& config, const std::string& out_path) {
    Dataset dataset = generate_dataset(config);
    save_dataset(dataset, out_path);

    std::size_t n_los = 0;
    double mean_mm_paths = 0.0, mean_sub_paths = 0.0;
    for (const ChannelPair& pair : dataset.pairs) {
        n_los += pair.scenario.los_condition ? 1 : 0;
        mean_mm_paths += static_cast<double>(pair.scenario.mmwave_paths.size());
        mean_sub_paths += static_cast<double>(pair.scenario.sub6_paths.size());
    }
    double n = static_cast<double>(dataset.size());
    std::cout << "wrote " << dataset.size() << " samples to " << out_path << "\n"
              << "  LoS fraction:        " << static_cast<double>(n_los) / n << "\n"
              << "  mean mmWave paths:   " << mean_mm_paths / n << "\n"
              << "  mean sub-6G paths:   " << mean_sub_paths / n << "\n";
}

nlohmann::json cmd_calibrate(const std::string& dataset_path, double eps, double alpha,
                             const PredictorSpec& spec, const std::string& out_path) {
    Dataset dataset = load_dataset(dataset_path);
    Rng split_rng = make_rng(dataset.seed, kSplitSalt);
    SplitIndices split = split_samples(dataset.size(),
                                       {0.5, 0.1, 0.2, 0.2}, split_rng);
    std::unique_ptr<Predictor> predictor = make_predictor(spec);
    PolarCodebook cb = build_codebook(dataset.system);

    std::vector<SampleEval> evals(dataset.size());
    parallel_for(split.cal.size(), [&](std::size_t k) {
        std::size_t i = split.cal[k];
        evals[i] = evaluate_sample(dataset.pairs[i], *predictor, cb, dataset.system, eps,
                                   dataset.sample_ids[i]);
    });
    std::vector<CalibrationRecord> records = calibration_records(evals, split.cal, dataset);
    ThresholdResult thresh = calibrate(records, alpha);

    std::vector<double> sorted;
    for (const CalibrationRecord& r : records) sorted.push_back(r.critical_score);
    std::sort(sorted.begin(), sorted.end());

    nlohmann::json report{{"alpha", thresh.alpha},
                          {"eps", eps},
                          {"n_cal", thresh.n_cal},
                          {"lambda_hat", thresh.lambda_hat},
                          {"achieved_empirical_risk", thresh.achieved_empirical_risk},
                          {"mode", thresh.mode == CalibrationMode::standard ? "standard"
                                                                            : "weighted"},
                          {"sorted_scores_digest", digest_doubles(sorted)},
                          {"predictor", spec},
                          {"dataset", dataset_path}};
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cmd_calibrate: cannot open " + out_path);
        os << report.dump(2) << "\n";
    }
    return report;
}

EvaluationReport cmd_evaluate(const std::string& dataset_path,
                              const std::string& calibration_report_path, int pilots_per_beam,
                              const std::string& out_prefix) {
    Dataset dataset = load_dataset(dataset_path);
    std::ifstream is(calibration_report_path);
    if (!is)
        throw std::runtime_error("cmd_evaluate: cannot open " + calibration_report_path);
    nlohmann::json report_json = nlohmann::json::parse(is);

    double eps = report_json.at("eps").get<double>();
    PredictorSpec spec = report_json.at("predictor").get<PredictorSpec>();
    ThresholdResult thresh;
    thresh.alpha = report_json.at("alpha").get<double>();
    thresh.n_cal = report_json.at("n_cal").get<int>();
    thresh.lambda_hat = report_json.at("lambda_hat").get<double>();
    thresh.achieved_empirical_risk = report_json.at("achieved_empirical_risk").get<double>();
    thresh.mode = report_json.at("mode").get<std::string>() == "weighted"
                      ? CalibrationMode::weighted
                      : CalibrationMode::standard;

    Rng split_rng = make_rng(dataset.seed, kSplitSalt);
    SplitIndices split = split_samples(dataset.size(), {0.5, 0.1, 0.2, 0.2}, split_rng);
    if (split.test.empty()) throw std::runtime_error("cmd_evaluate: empty test split");

    std::unique_ptr<Predictor> predictor = make_predictor(spec);
    PolarCodebook cb = build_codebook(dataset.system);
    std::vector<SampleEval> evals(dataset.size());
    parallel_for(split.test.size(), [&](std::size_t k) {
        std::size_t i = split.test[k];
        evals[i] = evaluate_sample(dataset.pairs[i], *predictor, cb, dataset.system, eps,
                                   dataset.sample_ids[i]);
    });
    EvaluationReport report = evaluate_split(dataset, split.test, evals, thresh, dataset.system,
                                             eps, pilots_per_beam, 0x65766cULL);

    if (!out_prefix.empty()) {
        std::ofstream csv(out_prefix + ".csv");
        if (!csv) throw std::runtime_error("cmd_evaluate: cannot open " + out_prefix + ".csv");
        csv << "sample_id,set_size,branch,chosen_n,chosen_s,ratio,covered,pilots_used\n";
        for (const PerSampleRow& row : report.rows)
            csv << row.sample_id << ',' << row.set_size << ',' << branch_name(row.branch) << ','
                << row.chosen.n << ',' << row.chosen.s << ',' << row.ratio << ','
                << (row.covered ? 1 : 0) << ',' << row.pilots_used << "\n";

        const EvaluationSummary& s = report.summary;
        nlohmann::json summary{{"achieved_coverage", s.achieved_coverage},
                               {"achieved_eps_suboptimal_rate", s.achieved_eps_suboptimal_rate},
                               {"mean_set_size", s.mean_set_size},
                               {"set_size_quantiles", s.set_size_quantiles},
                               {"mean_pilots", s.mean_pilots},
                               {"lambda_hat", s.lambda_hat},
                               {"n_test", s.n_test},
                               {"eps", eps},
                               {"alpha", thresh.alpha}};
        std::ofstream js(out_prefix + ".json");
        if (!js) throw std::runtime_error("cmd_evaluate: cannot open " + out_prefix + ".json");
        js << summary.dump(2) << "\n";
    }
    return report;
}

namespace {

// Fresh cal/test resample from the pooled indices, Fig.-7-style.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> resample_pool(
    std::vector<std::size_t> pool, std::size_t n_cal, Rng& rng) {
    if (n_cal + 1 > pool.size())
        throw std::invalid_argument("resample_pool: calibration size leaves no test samples");
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::size_t> cal(pool.begin(), pool.begin() + n_cal);
    std::vector<std::size_t> test(pool.begin() + n_cal, pool.end());
    return {std::move(cal), std::move(test)};
}

// Re-synthesizes sub-6G estimates from stored scenarios under a
// modified system config (pilot power / antenna count sweeps).
Dataset resynthesize_sub6(const Dataset& base, const SystemConfig& system,
                          std::uint64_t salt) {
    Dataset out;
    out.system = system;
    out.geometry = base.geometry;
    out.seed = base.seed;
    out.sample_ids = base.sample_ids;
    out.pairs.resize(base.pairs.size());
    parallel_for(base.pairs.size(), [&](std::size_t i) {
        ChannelPair pair;
        pair.scenario = base.pairs[i].scenario;
        pair.h_mm = base.pairs[i].h_mm;
        CMatrix h_sub = sub6_channel(pair.scenario, system);
        Rng rng = make_rng(base.seed ^ salt, base.sample_ids[i], 0x6c73ULL);
        pair.h_sub_est = ls_estimate(h_sub, system, rng);
        out.pairs[i] = std::move(pair);
    });
    return out;
}

} // namespace

void cmd_sweep(const ExperimentConfig& config, const std::string& axis,
               const std::vector<double>& grid, const std::string& out_csv) {
    config.validate();
    if (grid.empty()) throw std::invalid_argument("cmd_sweep: empty grid");
    if (axis != "alpha" && axis != "n_cal" && axis != "sub6_power" && axis != "sub6_antennas")
        throw std::invalid_argument("cmd_sweep: unknown axis '" + axis + "'");

    Dataset dataset = generate_dataset(config);
    Rng split_rng = make_rng(config.seed, kSplitSalt);
    SplitIndices split = split_samples(dataset.size(), config.split_ratios, split_rng);
    std::vector<std::size_t> pool = split.cal;
    pool.insert(pool.end(), split.test.begin(), split.test.end());

    std::unique_ptr<Predictor> predictor = make_predictor(config.predictor);
    const double alpha0 = config.alphas.front();

    std::ofstream csv(out_csv);
    if (!csv) throw std::runtime_error("cmd_sweep: cannot open " + out_csv);
    csv << "axis,value,trial,alpha,n_cal,lambda_hat,coverage,eps_suboptimal_rate,"
           "mean_set_size,mean_pilots\n";

    for (std::size_t g = 0; g < grid.size(); ++g) {
        SystemConfig system = config.system;
        Dataset* active = &dataset;
        Dataset resynth;
        double alpha = alpha0;
        std::size_t n_cal = split.cal.size();

        if (axis == "alpha") {
            alpha = grid[g];
        } else if (axis == "n_cal") {
            n_cal = static_cast<std::size_t>(grid[g]);
        } else if (axis == "sub6_power") {
            system.p_pilot_sub = dbm_to_watt(grid[g]);
            resynth = resynthesize_sub6(dataset, system, 0x7000ULL + g);
            active = &resynth;
        } else { // sub6_antennas
            system.n_tx_sub = static_cast<int>(grid[g]);
            system.validate();
            resynth = resynthesize_sub6(dataset, system, 0xa000ULL + g);
            active = &resynth;
        }

        PolarCodebook cb = build_codebook(system);
        std::vector<SampleEval> evals(active->size());
        parallel_for(pool.size(), [&](std::size_t k) {
            std::size_t i = pool[k];
            evals[i] = evaluate_sample(active->pairs[i], *predictor, cb, system, config.eps,
                                       active->sample_ids[i]);
        });

        for (int trial = 0; trial < config.n_trials; ++trial) {
            Rng rng = make_rng(config.seed, g, 0x74000ULL + trial);
            auto [cal, test] = resample_pool(pool, n_cal, rng);
            std::vector<CalibrationRecord> records = calibration_records(evals, cal, *active);
            ThresholdResult thresh = calibrate(records, alpha);
            EvaluationReport report =
                evaluate_split(*active, test, evals, thresh, system, config.eps,
                               config.pilots_per_beam, 0x737700ULL + g * 1000 + trial);
            const EvaluationSummary& s = report.summary;
            csv << axis << ',' << grid[g] << ',' << trial << ',' << alpha << ',' << n_cal << ','
                << thresh.lambda_hat << ',' << s.achieved_coverage << ','
                << s.achieved_eps_suboptimal_rate << ',' << s.mean_set_size << ','
                << s.mean_pilots << "\n";
        }
    }
}

void cmd_shift(const ExperimentConfig& config, const std::string& out_csv) {
    config.validate();
    if (!config.shift) throw std::invalid_argument("cmd_shift: config has no shift section");
    const ShiftSpec& shift = *config.shift;
    const double alpha = config.alphas.front();
    const double p_los_cal = shift.cal_los_ratio / (1.0 + shift.cal_los_ratio);

    std::size_t n_cal = static_cast<std::size_t>(
        std::lround(config.split_ratios[2] * config.n_samples));
    std::size_t n_test = static_cast<std::size_t>(
        std::lround(config.split_ratios[3] * config.n_samples));
    if (n_cal < 2 || n_test < 2)
        throw std::invalid_argument("cmd_shift: cal/test splits too small");

    std::unique_ptr<Predictor> predictor = make_predictor(config.predictor);
    PolarCodebook cb = build_codebook(config.system);

    std::ofstream csv(out_csv);
    if (!csv) throw std::runtime_error("cmd_shift: cannot open " + out_csv);
    csv << "test_los_ratio,trial,method,coverage,mean_set_size,sentinel_count,alpha,"
           "mean_omega_prime\n";

    for (std::size_t r = 0; r < shift.test_los_ratios.size(); ++r) {
        const double ratio = shift.test_los_ratios[r];
        const double p_los_test = ratio / (1.0 + ratio);
        for (int trial = 0; trial < config.n_trials; ++trial) {
            ExperimentConfig cal_cfg = config;
            cal_cfg.geometry.p_los = p_los_cal;
            cal_cfg.n_samples = static_cast<int>(n_cal);
            cal_cfg.seed = derive_seed(config.seed, 0xca100ULL + r, trial);
            Dataset cal_set = generate_dataset(cal_cfg);

            ExperimentConfig test_cfg = config;
            test_cfg.geometry.p_los = p_los_test;
            test_cfg.n_samples = static_cast<int>(n_test);
            test_cfg.seed = derive_seed(config.seed, 0x7e500ULL + r, trial);
            Dataset test_set = generate_dataset(test_cfg);

            std::vector<SampleEval> cal_evals =
                evaluate_samples(cal_set, *predictor, cb, config.eps);
            std::vector<SampleEval> test_evals =
                evaluate_samples(test_set, *predictor, cb, config.eps);

            // likelihood ratios p_i for calibration samples, p' per test sample
            std::vector<double> cal_ratios(cal_set.size());
            std::vector<double> test_ratios(test_set.size());
            if (shift.ratio_mode == "oracle") {
                auto oracle_ratio = [&](bool los) {
                    return los ? p_los_test / p_los_cal
                               : (1.0 - p_los_test) / (1.0 - p_los_cal);
                };
                for (std::size_t i = 0; i < cal_set.size(); ++i)
                    cal_ratios[i] = oracle_ratio(cal_set.pairs[i].scenario.los_condition);
                for (std::size_t i = 0; i < test_set.size(); ++i)
                    test_ratios[i] = oracle_ratio(test_set.pairs[i].scenario.los_condition);
            } else {
                // learned: discriminate calibration from a held-out batch
                // drawn from the test distribution
                ExperimentConfig train_cfg = test_cfg;
                train_cfg.seed = derive_seed(config.seed, 0x4c5200ULL + r, trial);
                Dataset ratio_train = generate_dataset(train_cfg);
                std::vector<Eigen::Vector3d> f_cal, f_train;
                for (const ChannelPair& p : cal_set.pairs)
                    f_cal.push_back(ratio_features(p.h_sub_est, config.system));
                for (const ChannelPair& p : ratio_train.pairs)
                    f_train.push_back(ratio_features(p.h_sub_est, config.system));
                FeatureRatioEstimator estimator;
                estimator.fit(f_cal, f_train);
                for (std::size_t i = 0; i < cal_set.size(); ++i)
                    cal_ratios[i] = estimator.ratio(f_cal[i]);
                for (std::size_t i = 0; i < test_set.size(); ++i)
                    test_ratios[i] =
                        estimator.ratio(ratio_features(test_set.pairs[i].h_sub_est, config.system));
            }

            std::vector<CalibrationRecord> records;
            for (std::size_t i = 0; i < cal_set.size(); ++i)
                records.push_back({cal_evals[i].critical_score, cal_set.sample_ids[i],
                                   cal_ratios[i]});

            ThresholdResult standard = calibrate(records, alpha);

            auto set_size_at = [&](const SampleEval& eval, double lambda) {
                if (lambda == std::numeric_limits<double>::infinity())
                    return static_cast<double>(cb.size());
                return static_cast<double>((eval.scores.u.array() <= lambda).count());
            };

            double cov_std = 0.0, size_std = 0.0;
            double cov_w = 0.0, size_w = 0.0, omega_sum = 0.0;
            int sentinels = 0;
            for (std::size_t i = 0; i < test_set.size(); ++i) {
                const SampleEval& eval = test_evals[i];
                cov_std += (eval.critical_score <= standard.lambda_hat) ? 1.0 : 0.0;
                size_std += set_size_at(eval, standard.lambda_hat);

                ThresholdResult weighted = calibrate_weighted(records, alpha, test_ratios[i]);
                if (weighted.full_codebook_sentinel()) ++sentinels;
                cov_w += (weighted.full_codebook_sentinel() ||
                          eval.critical_score <= weighted.lambda_hat)
                             ? 1.0
                             : 0.0;
                size_w += set_size_at(eval, weighted.lambda_hat);
                omega_sum +=
                    weighted_risk(records, standard.lambda_hat, test_ratios[i]).omega_prime;
            }
            double n = static_cast<double>(test_set.size());
            csv << ratio << ',' << trial << ",standard," << cov_std / n << ',' << size_std / n
                << ",0," << alpha << ",0\n";
            csv << ratio << ',' << trial << ",weighted," << cov_w / n << ',' << size_w / n << ','
                << sentinels << ',' << alpha << ',' << omega_sum / n << "\n";
        }
    }
}

void dump_codebook_csv(const PolarCodebook& cb, const std::string& path) {
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("dump_codebook_csv: cannot open " + path);
    csv << "n,s,theta_rad,r_m\n";
    for (int n = 1; n <= cb.n_angles(); ++n)
        for (int s = 1; s <= cb.n_rings(); ++s)
            csv << n << ',' << s << ',' << cb.angle(n) << ',' << cb.distance(n, s) << "\n";
}

} // namespace nfbeam
