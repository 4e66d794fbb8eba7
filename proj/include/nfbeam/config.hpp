// SPDX-License-Identifier: Apache-2.0
//
// nfbeam: sub-6GHz-aided near-field mmWave beam selection with
// conformal-risk-control calibration.

#ifndef NFBEAM_CONFIG_HPP
#define NFBEAM_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nfbeam {

inline constexpr double kSpeedOfLight = 299792458.0;

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

// Thermal noise floor for a given bandwidth, in watts.
// -173.8 dBm/Hz noise spectral density.
inline double thermal_noise_watt(double bandwidth_hz) {
    return dbm_to_watt(-173.8 + 10.0 * std::log10(bandwidth_hz));
}

// Dual-band system parameters. All powers stored in linear watts; dBm
// conversion happens once at construction time.
struct SystemConfig {
    // mmWave band
    double f_c = 73e9;       // carrier (Hz)
    double bandwidth = 200e6;  // W (Hz)
    int n_subcarriers = 64;  // M
    int n_tx = 256;          // N_t
    int n_taps = 64;         // D
    double p_tx = dbm_to_watt(25.0);    // P_t, downlink data power (W)
    double p_pilot = dbm_to_watt(25.0); // P_s, uplink pilot power (W)
    double noise_power = thermal_noise_watt(200e6); // sigma_n^2 (W)

    // sub-6G band
    double f_c_sub = 3.5e9;
    double bandwidth_sub = 80e6;
    int n_subcarriers_sub = 32;  // M_
    int n_tx_sub = 16;           // N_t_
    int n_taps_sub = 32;         // D_
    double p_pilot_sub = dbm_to_watt(10.0); // P_s_ (W)
    double noise_power_sub = thermal_noise_watt(80e6);

    // codebook
    int n_rings = 7;     // S
    double beta = 1.6;   // neighbour-beam correlation parameter

    std::uint64_t rng_seed = 1;

    double sampling_period() const { return 1.0 / bandwidth; }      // T_s
    double sampling_period_sub() const { return 1.0 / bandwidth_sub; }
    double wavelength() const { return kSpeedOfLight / f_c; }
    double wavelength_sub() const { return kSpeedOfLight / f_c_sub; }

    void validate() const {
        if (n_subcarriers < 1 || n_tx < 1 || n_taps < 1 ||
            n_subcarriers_sub < 1 || n_tx_sub < 1 || n_taps_sub < 1 || n_rings < 1)
            throw std::invalid_argument("SystemConfig: all counts must be >= 1");
        if (f_c <= 0 || f_c_sub <= 0 || bandwidth <= 0 || bandwidth_sub <= 0)
            throw std::invalid_argument("SystemConfig: frequencies and bandwidths must be > 0");
        if (p_tx <= 0 || p_pilot <= 0 || p_pilot_sub <= 0)
            throw std::invalid_argument("SystemConfig: powers must be > 0");
        if (noise_power <= 0 || noise_power_sub <= 0)
            throw std::invalid_argument("SystemConfig: noise powers must be > 0");
        if (beta <= 0)
            throw std::invalid_argument("SystemConfig: beta must be > 0");
    }
};

// Full-scale profile: the default parameter set above.
inline SystemConfig full_profile() { return SystemConfig{}; }

// Reduced profile for minutes-scale runs and tests.
inline SystemConfig desk_profile() {
    SystemConfig c;
    c.n_subcarriers = 16;
    c.n_tx = 64;
    c.n_taps = 64;
    c.n_subcarriers_sub = 8;
    c.n_tx_sub = 8;
    c.n_taps_sub = 32;
    c.n_rings = 4;
    return c;
}

// Rectangular-room geometry for the synthetic scenario generator.
// The BS sits inside the room; UE positions are drawn uniformly.
struct GeometryConfig {
    double room_x = 13.2;   // extents (m)
    double room_y = 26.5;
    double bs_x = 6.6;      // BS position (m)
    double bs_y = 13.25;
    double bs_height = 2.5; // metadata only (2D propagation model)
    double p_los = 0.7;     // LoS probability
    int min_scatterers = 1; // NLoS path count range (mmWave)
    int max_scatterers = 3;
    int min_extra_sub6_paths = 1; // diffuse paths seen only at sub-6G
    int max_extra_sub6_paths = 3;
    double min_ue_distance = 1.0;   // keep UE off the array (m)
    double nlos_loss_db = 13.0;     // mean reflection loss, sub-6G
    double nlos_extra_loss_mm_db = 10.0; // additional mmWave NLoS attenuation
    double gain_sigma_db = 3.0;     // log-normal gain spread

    void validate() const {
        if (room_x <= 0 || room_y <= 0)
            throw std::invalid_argument("GeometryConfig: room extents must be > 0");
        if (bs_x < 0 || bs_x > room_x || bs_y < 0 || bs_y > room_y)
            throw std::invalid_argument("GeometryConfig: BS must lie inside the room");
        if (p_los < 0 || p_los > 1)
            throw std::invalid_argument("GeometryConfig: p_los must be in [0,1]");
        if (min_scatterers < 0 || max_scatterers < min_scatterers)
            throw std::invalid_argument("GeometryConfig: bad scatterer count range");
        if (min_extra_sub6_paths < 0 || max_extra_sub6_paths < min_extra_sub6_paths)
            throw std::invalid_argument("GeometryConfig: bad extra path count range");
        if (min_ue_distance <= 0)
            throw std::invalid_argument("GeometryConfig: min_ue_distance must be > 0");
    }
};

} // namespace nfbeam

#endif
