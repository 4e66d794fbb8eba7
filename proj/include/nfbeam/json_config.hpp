// SPDX-License-Identifier: Apache-2.0
//
// JSON bindings for configuration structs. Powers serialize in dBm so
// config files stay human-readable; conversion to watts happens here,
// once, on load.

#ifndef NFBEAM_JSON_CONFIG_HPP
#define NFBEAM_JSON_CONFIG_HPP

#include <nlohmann/json.hpp>

#include "nfbeam/config.hpp"

namespace nfbeam {

inline void to_json(nlohmann::json& j, const SystemConfig& c) {
    j = nlohmann::json{{"f_c_hz", c.f_c},
                       {"f_c_sub_hz", c.f_c_sub},
                       {"bandwidth_hz", c.bandwidth},
                       {"bandwidth_sub_hz", c.bandwidth_sub},
                       {"n_subcarriers", c.n_subcarriers},
                       {"n_subcarriers_sub", c.n_subcarriers_sub},
                       {"n_tx", c.n_tx},
                       {"n_tx_sub", c.n_tx_sub},
                       {"n_taps", c.n_taps},
                       {"n_taps_sub", c.n_taps_sub},
                       {"p_tx_dbm", watt_to_dbm(c.p_tx)},
                       {"p_pilot_dbm", watt_to_dbm(c.p_pilot)},
                       {"p_pilot_sub_dbm", watt_to_dbm(c.p_pilot_sub)},
                       {"noise_power_dbm", watt_to_dbm(c.noise_power)},
                       {"noise_power_sub_dbm", watt_to_dbm(c.noise_power_sub)},
                       {"n_rings", c.n_rings},
                       {"beta", c.beta},
                       {"rng_seed", c.rng_seed}};
}

inline void from_json(const nlohmann::json& j, SystemConfig& c) {
    c.f_c = j.value("f_c_hz", c.f_c);
    c.f_c_sub = j.value("f_c_sub_hz", c.f_c_sub);
    c.bandwidth = j.value("bandwidth_hz", c.bandwidth);
    c.bandwidth_sub = j.value("bandwidth_sub_hz", c.bandwidth_sub);
    c.n_subcarriers = j.value("n_subcarriers", c.n_subcarriers);
    c.n_subcarriers_sub = j.value("n_subcarriers_sub", c.n_subcarriers_sub);
    c.n_tx = j.value("n_tx", c.n_tx);
    c.n_tx_sub = j.value("n_tx_sub", c.n_tx_sub);
    c.n_taps = j.value("n_taps", c.n_taps);
    c.n_taps_sub = j.value("n_taps_sub", c.n_taps_sub);
    if (j.contains("p_tx_dbm")) c.p_tx = dbm_to_watt(j.at("p_tx_dbm").get<double>());
    if (j.contains("p_pilot_dbm")) c.p_pilot = dbm_to_watt(j.at("p_pilot_dbm").get<double>());
    if (j.contains("p_pilot_sub_dbm"))
        c.p_pilot_sub = dbm_to_watt(j.at("p_pilot_sub_dbm").get<double>());
    if (j.contains("noise_power_dbm"))
        c.noise_power = dbm_to_watt(j.at("noise_power_dbm").get<double>());
    else
        c.noise_power = thermal_noise_watt(c.bandwidth);
    if (j.contains("noise_power_sub_dbm"))
        c.noise_power_sub = dbm_to_watt(j.at("noise_power_sub_dbm").get<double>());
    else
        c.noise_power_sub = thermal_noise_watt(c.bandwidth_sub);
    c.n_rings = j.value("n_rings", c.n_rings);
    c.beta = j.value("beta", c.beta);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.validate();
}

inline void to_json(nlohmann::json& j, const GeometryConfig& g) {
    j = nlohmann::json{{"room_x_m", g.room_x},
                       {"room_y_m", g.room_y},
                       {"bs_x_m", g.bs_x},
                       {"bs_y_m", g.bs_y},
                       {"bs_height_m", g.bs_height},
                       {"p_los", g.p_los},
                       {"min_scatterers", g.min_scatterers},
                       {"max_scatterers", g.max_scatterers},
                       {"min_extra_sub6_paths", g.min_extra_sub6_paths},
                       {"max_extra_sub6_paths", g.max_extra_sub6_paths},
                       {"min_ue_distance_m", g.min_ue_distance},
                       {"nlos_loss_db", g.nlos_loss_db},
                       {"nlos_extra_loss_mm_db", g.nlos_extra_loss_mm_db},
                       {"gain_sigma_db", g.gain_sigma_db}};
}

inline void from_json(const nlohmann::json& j, GeometryConfig& g) {
    g.room_x = j.value("room_x_m", g.room_x);
    g.room_y = j.value("room_y_m", g.room_y);
    g.bs_x = j.value("bs_x_m", g.bs_x);
    g.bs_y = j.value("bs_y_m", g.bs_y);
    g.bs_height = j.value("bs_height_m", g.bs_height);
    g.p_los = j.value("p_los", g.p_los);
    g.min_scatterers = j.value("min_scatterers", g.min_scatterers);
    g.max_scatterers = j.value("max_scatterers", g.max_scatterers);
    g.min_extra_sub6_paths = j.value("min_extra_sub6_paths", g.min_extra_sub6_paths);
    g.max_extra_sub6_paths = j.value("max_extra_sub6_paths", g.max_extra_sub6_paths);
    g.min_ue_distance = j.value("min_ue_distance_m", g.min_ue_distance);
    g.nlos_loss_db = j.value("nlos_loss_db", g.nlos_loss_db);
    g.nlos_extra_loss_mm_db = j.value("nlos_extra_loss_mm_db", g.nlos_extra_loss_mm_db);
    g.gain_sigma_db = j.value("gain_sigma_db", g.gain_sigma_db);
    g.validate();
}

} // namespace nfbeam

#endif
