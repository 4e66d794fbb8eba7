// SPDX-License-Identifier: Apache-2.0
//
// On-disk dataset container: binary channel records plus a JSON sidecar
// with configuration and provenance. Complex values are stored as
// interleaved little-endian float64 (re, im).

#ifndef NFBEAM_DATASET_HPP
#define NFBEAM_DATASET_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "nfbeam/channel.hpp"

namespace nfbeam {

inline constexpr char kDatasetMagic[8] = {'N', 'F', 'B', 'D', 'S', 'E', 'T', '1'};
inline constexpr char kProbabilityMagic[8] = {'N', 'F', 'B', 'P', 'R', 'O', 'B', '1'};
inline constexpr const char* kGeneratorVersion = "nfbeam-0.1";

struct Dataset {
    SystemConfig system;
    GeometryConfig geometry;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> sample_ids;
    std::vector<ChannelPair> pairs;

    std::size_t size() const { return pairs.size(); }
};

// Writes `<path>` (binary records) and `<path>.json` (config, seed,
// generator version, sample count).
void save_dataset(const Dataset& dataset, const std::string& path);

Dataset load_dataset(const std::string& path);

// Externally computed probability matrices keyed by sample id.
void save_probability_file(const std::unordered_map<std::uint64_t, Eigen::MatrixXd>& records,
                           const std::string& path);
std::unordered_map<std::uint64_t, Eigen::MatrixXd> load_probability_file(
    const std::string& path);

// FNV-1a over the little-endian bytes of a double sequence; used for
// report digests and determinism checks.
std::uint64_t digest_doubles(const std::vector<double>& values);

} // namespace nfbeam

#endif
