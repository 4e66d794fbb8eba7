// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the unit tests.

#ifndef NFBEAM_TEST_UTIL_HPP
#define NFBEAM_TEST_UTIL_HPP

#include "nfbeam/channel.hpp"
#include "nfbeam/codebook.hpp"

namespace nfbeam::test {

// Tiny profile for fast randomized property checks.
inline SystemConfig tiny_profile() {
    SystemConfig c = desk_profile();
    c.n_subcarriers = 4;
    c.n_tx = 8;
    c.n_taps = 16;
    c.n_subcarriers_sub = 4;
    c.n_tx_sub = 4;
    c.n_taps_sub = 8;
    c.n_rings = 2;
    return c;
}

// Small room whose worst-case path delays fit tiny_profile's tap spans.
inline GeometryConfig tiny_geometry() {
    GeometryConfig g;
    g.room_x = 6.0;
    g.room_y = 6.0;
    g.bs_x = 3.0;
    g.bs_y = 3.0;
    return g;
}

inline CMatrix random_channel(int rows, int cols, Rng& rng, double scale = 1.0) {
    CMatrix h(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) h(i, j) = complex_normal(rng, scale);
    return h;
}

// Single-path scenario at (aod, dist) with unit gain.
inline ScenarioSample single_path_scenario(double aod, double dist) {
    ScenarioSample s;
    PathParams p;
    p.gain = {1.0, 0.0};
    p.aod = aod;
    p.dist = dist;
    p.toa = dist / kSpeedOfLight;
    p.is_los = true;
    s.mmwave_paths = {p};
    s.sub6_paths = {p};
    s.los_condition = true;
    return s;
}

} // namespace nfbeam::test

#endif
