// SPDX-License-Identifier: Apache-2.0
//
// nfbeam command-line front end: dataset generation, threshold
// calibration, evaluation, sweep and covariate-shift studies.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nfbeam/harness.hpp"

namespace {

nfbeam::ExperimentConfig load_config(const std::string& path, double alpha, double eps,
                                     std::uint64_t seed) {
    nfbeam::ExperimentConfig config =
        path.empty() ? nfbeam::ExperimentConfig{} : nfbeam::load_experiment_config(path);
    if (alpha > 0.0) config.alphas = {alpha};
    if (eps >= 0.0) config.eps = eps;
    if (seed != 0) config.seed = seed;
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sub-6G-aided near-field beam selection with risk-controlled candidate sets"};
    app.require_subcommand(1);

    std::string config_path, out_path, dataset_path, report_path, axis = "alpha";
    std::vector<double> grid;
    double alpha = -1.0, eps = -1.0;
    std::uint64_t seed = 0;
    int pilots = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config JSON");
        cmd->add_option("--alpha", alpha, "override target risk level");
        cmd->add_option("--eps", eps, "override near-optimality tolerance");
        cmd->add_option("--seed", seed, "override base RNG seed (nonzero)");
        cmd->add_option("--out", out_path, "output path")->required();
    };

    CLI::App* generate = app.add_subcommand("generate", "synthesize and store a dataset");
    add_common(generate);

    CLI::App* calibrate = app.add_subcommand("calibrate", "calibrate the score threshold");
    add_common(calibrate);
    calibrate->add_option("--dataset", dataset_path, "dataset path")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a calibrated threshold");
    evaluate->add_option("--dataset", dataset_path, "dataset path")->required();
    evaluate->add_option("--report", report_path, "calibration report JSON")->required();
    evaluate->add_option("--pilots", pilots, "pilots per candidate beam");
    evaluate->add_option("--out", out_path, "output prefix (.csv/.json)")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one experiment axis");
    add_common(sweep);
    sweep->add_option("--axis", axis, "alpha | n_cal | sub6_power | sub6_antennas");
    sweep->add_option("--grid", grid, "grid values for the axis")->required();

    CLI::App* shift = app.add_subcommand("shift", "LoS-ratio covariate-shift study");
    add_common(shift);

    CLI::App* codebook = app.add_subcommand("codebook", "dump the polar codebook grid as CSV");
    add_common(codebook);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            nfbeam::cmd_generate(load_config(config_path, alpha, eps, seed), out_path);
        } else if (calibrate->parsed()) {
            nfbeam::ExperimentConfig config = load_config(config_path, alpha, eps, seed);
            nfbeam::cmd_calibrate(dataset_path, config.eps, config.alphas.front(),
                                  config.predictor, out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (evaluate->parsed()) {
            nfbeam::EvaluationReport report =
                nfbeam::cmd_evaluate(dataset_path, report_path, pilots, out_path);
            std::cout << "coverage " << report.summary.achieved_coverage << ", mean set size "
                      << report.summary.mean_set_size << "; wrote " << out_path << ".{csv,json}\n";
        } else if (sweep->parsed()) {
            nfbeam::cmd_sweep(load_config(config_path, alpha, eps, seed), axis, grid, out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (shift->parsed()) {
            nfbeam::cmd_shift(load_config(config_path, alpha, eps, seed), out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (codebook->parsed()) {
            nfbeam::ExperimentConfig config = load_config(config_path, alpha, eps, seed);
            nfbeam::dump_codebook_csv(nfbeam::build_codebook(config.system), out_path);
            std::cout << "wrote " << out_path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
