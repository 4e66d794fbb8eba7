// SPDX-License-Identifier: Apache-2.0

#include "nfbeam/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nfbeam {

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kJ{0.0, 1.0};

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

// Free-space path-loss amplitude at propagation distance d.
double fspl_amplitude(double dist, double lambda) {
    return lambda / (4.0 * kPi * dist);
}

std::complex<double> random_phase(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    double phi = u(rng);
    return {std::cos(phi), std::sin(phi)};
}

// Accumulates the frequency-domain channel for one band. Row m of the
// output is sum_d sqrt(N) * sum_l g_l p(d T - tau_l) v^H(theta_l, r_l)
// * exp(-j 2 pi m d / M), with v the per-path steering vector.
template <typename SteeringFn>
CMatrix build_channel(const std::vector<PathParams>& paths, int n_sub, int n_ant, int n_taps,
                      double period, SteeringFn steering, const char* band) {
    CMatrix h = CMatrix::Zero(n_sub, n_ant);
    const double max_delay = static_cast<double>(n_taps) * period;
    for (std::size_t l = 0; l < paths.size(); ++l) {
        const PathParams& p = paths[l];
        if (p.toa > max_delay)
            throw std::runtime_error(std::string(band) + " path " + std::to_string(l) +
                                     ": delay " + std::to_string(p.toa * 1e9) +
                                     " ns exceeds tap span D*T_s = " +
                                     std::to_string(max_delay * 1e9) + " ns");
        std::vector<double> pulse(n_taps + 1);
        for (int d = 1; d <= n_taps; ++d)
            pulse[d] = raised_cosine(static_cast<double>(d) * period - p.toa, period);
        CVector v = steering(p);
        Eigen::RowVectorXcd vh = v.adjoint();
        for (int m = 1; m <= n_sub; ++m) {
            std::complex<double> c = 0.0;
            for (int d = 1; d <= n_taps; ++d) {
                double arg = -2.0 * kPi * static_cast<double>(m) * static_cast<double>(d) /
                             static_cast<double>(n_sub);
                c += pulse[d] * std::exp(kJ * arg);
            }
            h.row(m - 1) += std::sqrt(static_cast<double>(n_ant)) * p.gain * c * vh;
        }
    }
    return h;
}

} // namespace

double raised_cosine(double t, double period, double rolloff) {
    double x = t / period;
    if (std::abs(x) > 4.0) return 0.0;
    double denom = 1.0 - 4.0 * rolloff * rolloff * x * x;
    if (std::abs(denom) < 1e-9) {
        // removable singularity at |t| = T/(2a)
        return (kPi / 4.0) * sinc(1.0 / (2.0 * rolloff));
    }
    return sinc(x) * std::cos(kPi * rolloff * x) / denom;
}

CVector near_field_steering(double theta, double r, int n_antennas, double lambda) {
    CVector b(n_antennas);
    const double s = std::sin(theta);
    const double d = lambda / 2.0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    for (int n = 0; n < n_antennas; ++n) {
        double delta = (2.0 * (n + 1) - n_antennas - 1) / 2.0;
        double rn = std::sqrt(r * r + delta * delta * d * d - r * delta * lambda * s);
        b(n) = scale * std::exp(kJ * (2.0 * kPi * (rn - r) / lambda));
    }
    return b;
}

CVector far_field_steering(double theta, int n_antennas, double /*lambda*/) {
    CVector a(n_antennas);
    const double s = std::sin(theta);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    for (int n = 0; n < n_antennas; ++n) {
        double delta = (2.0 * (n + 1) - n_antennas - 1) / 2.0;
        a(n) = scale * std::exp(-kJ * (kPi * delta * s));
    }
    return a;
}

double rayleigh_distance(int n_antennas, double lambda) {
    double aperture = static_cast<double>(n_antennas) * lambda / 2.0;
    return 2.0 * aperture * aperture / lambda;
}

ScenarioSample generate_scenario(const SystemConfig& config, const GeometryConfig& geometry,
                                 Rng& rng) {
    config.validate();
    geometry.validate();

    std::uniform_real_distribution<double> ux(0.0, geometry.room_x);
    std::uniform_real_distribution<double> uy(0.0, geometry.room_y);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gain_jitter_db(0.0, geometry.gain_sigma_db);
    std::normal_distribution<double> angle_jitter(0.0, 0.005);
    std::normal_distribution<double> delay_jitter(0.0, 0.5e-9);
    // Excess delay beyond the geometric bounce, shared between bands;
    // truncated so generated delays stay within the tap span.
    std::exponential_distribution<double> excess_delay(1.0 / 15e-9);

    ScenarioSample sample;
    double ue_dist = 0.0;
    do {
        sample.ue_x = ux(rng);
        sample.ue_y = uy(rng);
        double dx = sample.ue_x - geometry.bs_x;
        double dy = sample.ue_y - geometry.bs_y;
        ue_dist = std::hypot(dx, dy);
    } while (ue_dist < geometry.min_ue_distance);

    const double dx = sample.ue_x - geometry.bs_x;
    const double ue_aod = std::asin(std::clamp(dx / ue_dist, -1.0, 1.0));
    sample.los_condition = u01(rng) < geometry.p_los;

    const double lam_mm = config.wavelength();
    const double lam_sub = config.wavelength_sub();

    if (sample.los_condition) {
        PathParams mm;
        mm.is_los = true;
        mm.dist = ue_dist;
        mm.aod = ue_aod;
        mm.toa = ue_dist / kSpeedOfLight;
        mm.gain = fspl_amplitude(ue_dist, lam_mm) * random_phase(rng);
        sample.mmwave_paths.push_back(mm);

        PathParams sb = mm;
        sb.gain = fspl_amplitude(ue_dist, lam_sub) * random_phase(rng);
        sample.sub6_paths.push_back(sb);
    }

    std::uniform_int_distribution<int> n_scat_dist(geometry.min_scatterers,
                                                   geometry.max_scatterers);
    int n_scat = n_scat_dist(rng);
    if (!sample.los_condition && n_scat == 0) n_scat = 1;

    auto draw_scatterer = [&](double& bs_dist, double& total_dist, double& aod) {
        for (;;) {
            double sx = ux(rng);
            double sy = uy(rng);
            double d1 = std::hypot(sx - geometry.bs_x, sy - geometry.bs_y);
            double d2 = std::hypot(sx - sample.ue_x, sy - sample.ue_y);
            if (d1 < 0.3 || d2 < 0.1) continue;
            if (d1 + d2 <= ue_dist + 1e-6) continue; // keep NLoS delay strictly above LoS
            bs_dist = d1;
            total_dist = d1 + d2;
            aod = std::asin(std::clamp((sx - geometry.bs_x) / d1, -1.0, 1.0));
            return;
        }
    };

    for (int i = 0; i < n_scat; ++i) {
        double bs_dist, total_dist, aod;
        draw_scatterer(bs_dist, total_dist, aod);
        double excess = std::min(excess_delay(rng), 45e-9);
        double toa = total_dist / kSpeedOfLight + excess;

        PathParams mm;
        mm.is_los = false;
        mm.dist = bs_dist;
        mm.aod = aod;
        mm.toa = toa;
        double loss_db = geometry.nlos_loss_db + geometry.nlos_extra_loss_mm_db +
                         gain_jitter_db(rng);
        mm.gain = fspl_amplitude(total_dist, lam_mm) * std::pow(10.0, -loss_db / 20.0) *
                  random_phase(rng);
        sample.mmwave_paths.push_back(mm);

        PathParams sb = mm;
        sb.aod = std::clamp(aod + angle_jitter(rng), -kPi / 2.0, kPi / 2.0);
        sb.toa = std::max(toa + delay_jitter(rng), total_dist / kSpeedOfLight);
        double loss_sub_db = geometry.nlos_loss_db + gain_jitter_db(rng);
        sb.gain = fspl_amplitude(total_dist, lam_sub) * std::pow(10.0, -loss_sub_db / 20.0) *
                  random_phase(rng);
        sample.sub6_paths.push_back(sb);
    }

    std::uniform_int_distribution<int> n_extra_dist(geometry.min_extra_sub6_paths,
                                                    geometry.max_extra_sub6_paths);
    int n_extra = n_extra_dist(rng);
    for (int i = 0; i < n_extra; ++i) {
        double bs_dist, total_dist, aod;
        draw_scatterer(bs_dist, total_dist, aod);
        PathParams sb;
        sb.is_los = false;
        sb.dist = bs_dist;
        sb.aod = aod;
        sb.toa = total_dist / kSpeedOfLight + std::min(excess_delay(rng), 45e-9);
        double loss_db = geometry.nlos_loss_db + gain_jitter_db(rng);
        sb.gain = fspl_amplitude(total_dist, lam_sub) * std::pow(10.0, -loss_db / 20.0) *
                  random_phase(rng);
        sample.sub6_paths.push_back(sb);
    }
    return sample;
}

CMatrix mmwave_channel(const ScenarioSample& sample, const SystemConfig& config) {
    const double lam = config.wavelength();
    return build_channel(
        sample.mmwave_paths, config.n_subcarriers, config.n_tx, config.n_taps,
        config.sampling_period(),
        [&](const PathParams& p) { return near_field_steering(p.aod, p.dist, config.n_tx, lam); },
        "mmwave");
}

CMatrix sub6_channel(const ScenarioSample& sample, const SystemConfig& config) {
    const double lam = config.wavelength_sub();
    const double boundary = rayleigh_distance(config.n_tx_sub, lam);
    return build_channel(
        sample.sub6_paths, config.n_subcarriers_sub, config.n_tx_sub, config.n_taps_sub,
        config.sampling_period_sub(),
        [&](const PathParams& p) {
            if (p.dist >= boundary) return far_field_steering(p.aod, config.n_tx_sub, lam);
            return near_field_steering(p.aod, p.dist, config.n_tx_sub, lam);
        },
        "sub6");
}

CMatrix ls_estimate(const CMatrix& h_sub, const SystemConfig& config, Rng& rng) {
    const double pilot = std::sqrt(config.p_pilot_sub / config.n_subcarriers_sub);
    CMatrix est = h_sub;
    for (Eigen::Index i = 0; i < est.rows(); ++i)
        for (Eigen::Index j = 0; j < est.cols(); ++j)
            est(i, j) += complex_normal(rng, config.noise_power_sub) / pilot;
    return est;
}

ChannelPair synthesize_pair(const SystemConfig& config, const GeometryConfig& geometry,
                            Rng& rng) {
    ChannelPair pair;
    pair.scenario = generate_scenario(config, geometry, rng);
    pair.h_mm = mmwave_channel(pair.scenario, config);
    CMatrix h_sub = sub6_channel(pair.scenario, config);
    pair.h_sub_est = ls_estimate(h_sub, config, rng);
    return pair;
}

} // namespace nfbeam
