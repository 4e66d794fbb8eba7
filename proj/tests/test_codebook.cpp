// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "test_util.hpp"

using namespace nfbeam;

TEST_CASE("angle grid matches the arcsin formula") {
    for (int n_t : {2, 4, 16, 64}) {
        SystemConfig c = test::tiny_profile();
        c.n_tx = n_t;
        PolarCodebook cb = build_codebook(c);
        for (int n = 1; n <= n_t; ++n) {
            double expected = std::asin((2.0 * n - n_t - 1.0) / n_t);
            CHECK(std::abs(cb.angle(n) - expected) < 1e-12);
        }
        // strictly increasing
        for (int n = 2; n <= n_t; ++n) CHECK(cb.angle(n) > cb.angle(n - 1));
    }
}

TEST_CASE("two-antenna grid is the antisymmetric pair +-pi/6") {
    SystemConfig c = test::tiny_profile();
    c.n_tx = 2;
    PolarCodebook cb = build_codebook(c);
    CHECK(cb.angle(1) == doctest::Approx(-M_PI / 6.0));
    CHECK(cb.angle(2) == doctest::Approx(M_PI / 6.0));
}

TEST_CASE("distance ring fixture: 4 antennas, outermost angle, first ring") {
    SystemConfig c = test::tiny_profile();
    c.n_tx = 4;
    c.beta = 1.6;
    c.f_c = 73e9;
    PolarCodebook cb = build_codebook(c);
    double lambda = c.wavelength();
    // (1 - (3/4)^2) * 16 * (lambda/2)^2 / (2 * 1.6^2 * lambda) = 7 lambda / 20.48
    CHECK(cb.distance(4, 1) == doctest::Approx(7.0 * lambda / 20.48).epsilon(1e-12));
}

TEST_CASE("distance grid is exactly proportional to 1/s") {
    SystemConfig c = desk_profile();
    PolarCodebook cb = build_codebook(c);
    for (int n = 1; n <= cb.n_angles(); n += 7)
        for (int s = 1; s <= cb.n_rings(); ++s)
            CHECK(cb.distance(n, 1) / cb.distance(n, s) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("all beams unit norm, no duplicates") {
    SystemConfig c = test::tiny_profile();
    c.n_tx = 8;
    c.n_rings = 3;
    PolarCodebook cb = build_codebook(c);
    std::vector<CVector> all;
    for (int n = 1; n <= cb.n_angles(); ++n)
        for (int s = 1; s <= cb.n_rings(); ++s) {
            const CVector& w = cb.beam(n, s);
            CHECK(std::abs(w.norm() - 1.0) < 1e-12);
            all.push_back(w);
        }
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            CHECK(std::abs(all[i].dot(all[j])) < 1.0 - 1e-9);
}

TEST_CASE("beam lookup matches recomputation and rejects bad indices") {
    SystemConfig c = test::tiny_profile();
    PolarCodebook cb = build_codebook(c);
    // boundary indices valid
    CHECK_NOTHROW(cb.beam(1, 1));
    CHECK_NOTHROW(cb.beam(cb.n_angles(), cb.n_rings()));
    // cache equals recomputation from the stored polar coordinates
    int n = cb.n_angles() / 2, s = cb.n_rings();
    CVector direct = near_field_steering(cb.angle(n), cb.distance(n, s), c.n_tx, c.wavelength());
    CHECK((cb.beam(n, s) - direct).norm() < 1e-12);
    // out-of-range
    CHECK_THROWS_AS(cb.beam(0, 1), std::out_of_range);
    CHECK_THROWS_AS(cb.beam(1, 0), std::out_of_range);
    CHECK_THROWS_AS(cb.beam(cb.n_angles() + 1, 1), std::out_of_range);
    CHECK_THROWS_AS(cb.angle(0), std::out_of_range);
}

TEST_CASE("flat index round trip") {
    SystemConfig c = desk_profile();
    PolarCodebook cb = build_codebook(c);
    for (int f = 0; f < cb.size(); ++f) {
        BeamIndex idx = cb.unflatten(f);
        CHECK(cb.flat_index(idx.n, idx.s) == f);
    }
}
