// SPDX-License-Identifier: Apache-2.0

#ifndef NFBEAM_RNG_HPP
#define NFBEAM_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace nfbeam {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent per-task seeds from
// (base seed, stream indices) without correlated low bits.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(base ^ 0x5851f42d4c957f2dULL) ^ mix_seed(a) ^ mix_seed(~b));
}

inline Rng make_rng(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return Rng(derive_seed(base, a, b));
}

// Draw from CN(0, variance): circularly symmetric complex Gaussian.
inline std::complex<double> complex_normal(Rng& rng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

} // namespace nfbeam

#endif
