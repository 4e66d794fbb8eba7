// SPDX-License-Identifier: Apache-2.0

#include "nfbeam/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nfbeam/json_config.hpp"

static_assert(std::endian::native == std::endian::little,
              "dataset container assumes a little-endian host");

namespace nfbeam {

namespace {

template <typename T>
void write_pod(std::ostream& os, const T& value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& is, T& value) {
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw std::runtime_error("dataset: truncated file");
}

void write_matrix(std::ostream& os, const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            write_pod(os, m(i, j).real());
            write_pod(os, m(i, j).imag());
        }
}

CMatrix read_matrix(std::istream& is, int rows, int cols) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double re, im;
            read_pod(is, re);
            read_pod(is, im);
            m(i, j) = {re, im};
        }
    return m;
}

void write_paths(std::ostream& os, const std::vector<PathParams>& paths) {
    write_pod(os, static_cast<std::uint32_t>(paths.size()));
    for (const PathParams& p : paths) {
        write_pod(os, p.gain.real());
        write_pod(os, p.gain.imag());
        write_pod(os, p.aod);
        write_pod(os, p.toa);
        write_pod(os, p.dist);
        write_pod(os, static_cast<std::uint8_t>(p.is_los ? 1 : 0));
    }
}

std::vector<PathParams> read_paths(std::istream& is) {
    std::uint32_t count;
    read_pod(is, count);
    std::vector<PathParams> paths(count);
    for (PathParams& p : paths) {
        double re, im;
        read_pod(is, re);
        read_pod(is, im);
        p.gain = {re, im};
        read_pod(is, p.aod);
        read_pod(is, p.toa);
        read_pod(is, p.dist);
        std::uint8_t los;
        read_pod(is, los);
        p.is_los = los != 0;
    }
    return paths;
}

} // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
    if (dataset.sample_ids.size() != dataset.pairs.size())
        throw std::invalid_argument("save_dataset: id/pair count mismatch");

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_dataset: cannot open " + path);
    os.write(kDatasetMagic, sizeof(kDatasetMagic));
    write_pod(os, static_cast<std::uint32_t>(dataset.pairs.size()));
    write_pod(os, static_cast<std::uint32_t>(dataset.system.n_subcarriers));
    write_pod(os, static_cast<std::uint32_t>(dataset.system.n_tx));
    write_pod(os, static_cast<std::uint32_t>(dataset.system.n_subcarriers_sub));
    write_pod(os, static_cast<std::uint32_t>(dataset.system.n_tx_sub));
    for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
        const ChannelPair& pair = dataset.pairs[i];
        write_pod(os, dataset.sample_ids[i]);
        write_pod(os, static_cast<std::uint8_t>(pair.scenario.los_condition ? 1 : 0));
        write_pod(os, pair.scenario.ue_x);
        write_pod(os, pair.scenario.ue_y);
        write_paths(os, pair.scenario.mmwave_paths);
        write_paths(os, pair.scenario.sub6_paths);
        write_matrix(os, pair.h_mm);
        write_matrix(os, pair.h_sub_est);
    }
    if (!os) throw std::runtime_error("save_dataset: write failed for " + path);
    os.close();

    nlohmann::json sidecar;
    sidecar["system"] = dataset.system;
    sidecar["geometry"] = dataset.geometry;
    sidecar["seed"] = dataset.seed;
    sidecar["generator_version"] = kGeneratorVersion;
    sidecar["n_samples"] = dataset.pairs.size();
    std::ofstream js(path + ".json");
    if (!js) throw std::runtime_error("save_dataset: cannot open " + path + ".json");
    js << sidecar.dump(2) << "\n";
}

Dataset load_dataset(const std::string& path) {
    std::ifstream js(path + ".json");
    if (!js) throw std::runtime_error("load_dataset: missing sidecar " + path + ".json");
    nlohmann::json sidecar = nlohmann::json::parse(js);

    Dataset dataset;
    dataset.system = sidecar.at("system").get<SystemConfig>();
    dataset.geometry = sidecar.at("geometry").get<GeometryConfig>();
    dataset.seed = sidecar.at("seed").get<std::uint64_t>();

    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_dataset: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kDatasetMagic, sizeof(magic)) != 0)
        throw std::runtime_error("load_dataset: bad magic in " + path);
    std::uint32_t n_samples, m, n_t, m_sub, n_t_sub;
    read_pod(is, n_samples);
    read_pod(is, m);
    read_pod(is, n_t);
    read_pod(is, m_sub);
    read_pod(is, n_t_sub);
    if (m != static_cast<std::uint32_t>(dataset.system.n_subcarriers) ||
        n_t != static_cast<std::uint32_t>(dataset.system.n_tx) ||
        m_sub != static_cast<std::uint32_t>(dataset.system.n_subcarriers_sub) ||
        n_t_sub != static_cast<std::uint32_t>(dataset.system.n_tx_sub))
        throw std::runtime_error("load_dataset: sidecar/binary dimension mismatch");

    dataset.sample_ids.reserve(n_samples);
    dataset.pairs.reserve(n_samples);
    for (std::uint32_t i = 0; i < n_samples; ++i) {
        std::uint64_t id;
        read_pod(is, id);
        dataset.sample_ids.push_back(id);
        ChannelPair pair;
        std::uint8_t los;
        read_pod(is, los);
        pair.scenario.los_condition = los != 0;
        read_pod(is, pair.scenario.ue_x);
        read_pod(is, pair.scenario.ue_y);
        pair.scenario.mmwave_paths = read_paths(is);
        pair.scenario.sub6_paths = read_paths(is);
        pair.h_mm = read_matrix(is, m, n_t);
        pair.h_sub_est = read_matrix(is, m_sub, n_t_sub);
        dataset.pairs.push_back(std::move(pair));
    }
    return dataset;
}

void save_probability_file(const std::unordered_map<std::uint64_t, Eigen::MatrixXd>& records,
                           const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_probability_file: cannot open " + path);
    os.write(kProbabilityMagic, sizeof(kProbabilityMagic));
    write_pod(os, static_cast<std::uint32_t>(records.size()));
    for (const auto& [id, matrix] : records) {
        write_pod(os, id);
        write_pod(os, static_cast<std::uint32_t>(matrix.rows()));
        write_pod(os, static_cast<std::uint32_t>(matrix.cols()));
        for (Eigen::Index i = 0; i < matrix.rows(); ++i)
            for (Eigen::Index j = 0; j < matrix.cols(); ++j) write_pod(os, matrix(i, j));
    }
}

std::unordered_map<std::uint64_t, Eigen::MatrixXd> load_probability_file(
    const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_probability_file: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kProbabilityMagic, sizeof(magic)) != 0)
        throw std::runtime_error("load_probability_file: bad magic in " + path);
    std::uint32_t count;
    read_pod(is, count);
    std::unordered_map<std::uint64_t, Eigen::MatrixXd> records;
    records.reserve(count);
    for (std::uint32_t r = 0; r < count; ++r) {
        std::uint64_t id;
        std::uint32_t rows, cols;
        read_pod(is, id);
        read_pod(is, rows);
        read_pod(is, cols);
        Eigen::MatrixXd m(rows, cols);
        for (std::uint32_t i = 0; i < rows; ++i)
            for (std::uint32_t j = 0; j < cols; ++j) read_pod(is, m(i, j));
        records.emplace(id, std::move(m));
    }
    return records;
}

std::uint64_t digest_doubles(const std::vector<double>& values) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            hash ^= (bits >> (8 * b)) & 0xffULL;
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

} // namespace nfbeam
