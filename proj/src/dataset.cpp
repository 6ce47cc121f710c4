// SPDX-License-Identifier: Apache-2.0
//
// csi-inr: implicit neural representation codec for MIMO-OFDM channel feedback
// Copyright (C) 2026 The csi-inr authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "csiinr/dataset.hpp"

#include "csiinr/binary_io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csiinr
{

namespace
{
constexpr std::uint32_t dataset_version = 1;
}

void SamplingSpec::validate() const
{
    if (!(max_delay >= 0.0) || !std::isfinite(max_delay))
        throw std::invalid_argument("SamplingSpec: max_delay must be finite and >= 0");
    if (!(gain_jitter_low > 0.0) || !(gain_jitter_low <= gain_jitter_high) || !std::isfinite(gain_jitter_high))
        throw std::invalid_argument("SamplingSpec: need 0 < gain_jitter_low <= gain_jitter_high");
    if (!(max_aod >= 0.0) || !(max_aod <= M_PI / 2.0))
        throw std::invalid_argument("SamplingSpec: max_aod must lie in [0, pi/2]");
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

PathSet sample_paths(std::mt19937_64 &rng, int num_paths, const SamplingSpec &spec)
{
    std::uniform_real_distribution<double> jitter(spec.gain_jitter_low, spec.gain_jitter_high);
    std::uniform_real_distribution<double> delay(0.0, spec.max_delay);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> aod(-spec.max_aod, spec.max_aod);

    PathSet paths(static_cast<std::size_t>(num_paths));
    double energy = 0.0;
    for (int p = 0; p < num_paths; ++p)
    {
        auto &path = paths[static_cast<std::size_t>(p)];
        path.gain = std::exp(-static_cast<double>(p + 1) / num_paths) * jitter(rng);
        path.delay = delay(rng);
        path.phase = phase(rng);
        path.aod = aod(rng);
        energy += path.gain * path.gain;
    }
    const double norm = std::sqrt(energy);
    for (auto &path : paths)
        path.gain /= norm;
    return paths;
}

Dataset generate_dataset(std::size_t count, std::uint64_t seed, const SystemConfig &cfg, const SamplingSpec &sampling)
{
    if (count < 1)
        throw std::invalid_argument("generate_dataset: count must be >= 1");
    cfg.validate();
    sampling.validate();

    std::vector<ChannelMatrix> raw(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        auto rng = sample_stream(seed, i);
        raw[i] = channel_matrix(sample_paths(rng, cfg.num_paths, sampling), cfg);
    }

    double peak = 0.0;
    for (const auto &H : raw)
        peak = std::max({peak, H.real().cwiseAbs().maxCoeff(), H.imag().cwiseAbs().maxCoeff()});
    if (!(peak > 0.0))
        throw std::runtime_error("generate_dataset: all channel entries are zero");

    Dataset ds;
    ds.config = cfg;
    ds.sampling = sampling;
    ds.seed = seed;
    ds.scale = peak;
    ds.samples.reserve(count);
    for (const auto &H : raw)
        ds.samples.push_back((H / peak).cast<std::complex<float>>());
    return ds;
}

std::vector<std::uint8_t> serialize_dataset(const Dataset &ds)
{
    ByteWriter w;
    w.magic("CSID");
    w.put<std::uint32_t>(dataset_version);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(ds.rows()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(ds.cols()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(ds.size()));
    w.put<double>(ds.scale);
    w.put<std::uint64_t>(ds.seed);
    for (const auto &H : ds.samples)
        for (int n = 0; n < H.rows(); ++n)
            for (int m = 0; m < H.cols(); ++m)
            {
                w.put<float>(H(n, m).real());
                w.put<float>(H(n, m).imag());
            }
    return w.take();
}

Dataset deserialize_dataset(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    r.expect_magic("CSID");
    if (const auto version = r.get<std::uint32_t>(); version != dataset_version)
        throw FormatError("unsupported dataset version " + std::to_string(version));
    const auto rows = r.get<std::uint32_t>();
    const auto cols = r.get<std::uint32_t>();
    const auto count = r.get<std::uint32_t>();
    Dataset ds;
    ds.scale = r.get<double>();
    ds.seed = r.get<std::uint64_t>();
    if (rows == 0 || cols == 0 || !(ds.scale > 0.0))
        throw FormatError("dataset header has empty shape or non-positive scale");
    if (r.remaining() != std::size_t{count} * rows * cols * 2 * sizeof(float))
        throw FormatError("dataset payload size does not match header");

    ds.config.num_antennas = static_cast<int>(rows);
    ds.config.num_subcarriers = static_cast<int>(cols);
    ds.samples.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i)
    {
        Eigen::MatrixXcf H(rows, cols);
        for (std::uint32_t n = 0; n < rows; ++n)
            for (std::uint32_t m = 0; m < cols; ++m)
            {
                const float re = r.get<float>();
                const float im = r.get<float>();
                H(n, m) = {re, im};
            }
        ds.samples.push_back(std::move(H));
    }
    return ds;
}

void save_dataset(const Dataset &ds, const std::string &path) { write_file(path, serialize_dataset(ds)); }

Dataset load_dataset(const std::string &path) { return deserialize_dataset(read_file(path)); }

DatasetSplits split_dataset(const Dataset &ds, std::size_t train_count, std::size_t validation_count)
{
    if (train_count + validation_count > ds.size())
        throw std::invalid_argument("split_dataset: requested splits exceed dataset size");
    std::span<const Eigen::MatrixXcf> all(ds.samples);
    return {all.subspan(0, train_count), all.subspan(train_count, validation_count),
            all.subspan(train_count + validation_count)};
}

} // namespace csiinr
