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

#pragma once

#include "csiinr/channel.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace csiinr
{

// Per-sample path draw. Gains follow an exponential power-decay profile
// g_p = exp(-p/P) u_p, u_p ~ U(gain_jitter_low, gain_jitter_high), normalised to unit
// energy; delays ~ U(0, max_delay); phases ~ U[0, 2pi); AoD ~ U[-max_aod, max_aod].
struct SamplingSpec
{
    double max_delay = 1e-6;
    double gain_jitter_low = 0.5;
    double gain_jitter_high = 1.0;
    double max_aod = M_PI / 2.0;

    void validate() const;
};

PathSet sample_paths(std::mt19937_64 &rng, int num_paths, const SamplingSpec &spec);

// Independent stream for sample `index`, identical whether samples are drawn serially or not.
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);

struct Dataset
{
    SystemConfig config;
    SamplingSpec sampling;
    std::uint64_t seed = 0;
    // Global scale: stored samples are H / scale, so max(|Re|, |Im|) over the set is 1.
    double scale = 1.0;
    std::vector<Eigen::MatrixXcf> samples;

    int rows() const { return config.num_antennas; }
    int cols() const { return config.num_subcarriers; }
    std::size_t size() const { return samples.size(); }
};

Dataset generate_dataset(std::size_t count, std::uint64_t seed, const SystemConfig &cfg,
                         const SamplingSpec &sampling = {});

// Little-endian "CSID" v1: magic, version u32, N_t u32, N_c u32, count u32, scale f64, seed u64,
// then count matrices of interleaved (re, im) f32, row-major.
std::vector<std::uint8_t> serialize_dataset(const Dataset &ds);
Dataset deserialize_dataset(std::span<const std::uint8_t> bytes);
void save_dataset(const Dataset &ds, const std::string &path);
Dataset load_dataset(const std::string &path);

struct DatasetSplits
{
    std::span<const Eigen::MatrixXcf> train;
    std::span<const Eigen::MatrixXcf> validation;
    std::span<const Eigen::MatrixXcf> test;
};

// Contiguous, disjoint splits in sample order; the test split takes the remainder.
DatasetSplits split_dataset(const Dataset &ds, std::size_t train_count, std::size_t validation_count);

} // namespace csiinr
