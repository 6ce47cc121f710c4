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

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace csiinr
{

using Symbols = std::vector<std::uint32_t>;

// Uniform scalar quantiser with per-dimension bounds and 2^bits bins per dimension.
struct QuantizerConfig
{
    int bits = 8;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int dims() const { return static_cast<int>(lower.size()); }
    std::uint32_t levels() const { return std::uint32_t{1} << bits; }
    double step(int k) const { return (upper[k] - lower[k]) / levels(); }
    void validate() const;
};

// Per-dimension min/max over the set, widened by 1% of the range (a degenerate
// dimension is widened by 1e-6 on each side).
QuantizerConfig fit_quantizer(std::span<const Eigen::VectorXd> codewords, int bits);

// index = clamp(floor((x - lo) / step), 0, 2^b - 1)
Symbols quantize(const Eigen::VectorXd &codeword, const QuantizerConfig &q);
// lo + (index + 0.5) * step
Eigen::VectorXd dequantize(std::span<const std::uint32_t> symbols, const QuantizerConfig &q);

// Static model shared by all dimensions, Laplace smoothed, cumulative total <= 2^16.
struct FrequencyTable
{
    int bits = 8;
    std::vector<std::uint32_t> counts;     // one per symbol, each >= 1
    std::vector<std::uint32_t> cumulative; // size counts+1, cumulative[0] = 0

    static constexpr std::uint32_t max_total = 1u << 16;

    std::uint32_t total() const { return cumulative.back(); }
    std::size_t alphabet() const { return counts.size(); }
    // Symbol s with cumulative[s] <= value < cumulative[s+1].
    std::uint32_t lookup(std::uint32_t value) const;
    void validate() const;

    static FrequencyTable from_counts(int bits, std::vector<std::uint32_t> counts);
    static FrequencyTable uniform(int bits);
};

FrequencyTable fit_frequency_table(std::span<const Symbols> quantized, int bits);

// Codec state shared by encoder and decoder next to a checkpoint.
struct CodecSidecar
{
    QuantizerConfig quantizer;
    FrequencyTable table;

    std::uint64_t hash() const;
};

// Little-endian "CSIS" v1: magic, version u32, n u32, bits u32, n x (lo f64, hi f64), 2^bits x count u16.
std::vector<std::uint8_t> serialize_sidecar(const CodecSidecar &sidecar);
CodecSidecar deserialize_sidecar(std::span<const std::uint8_t> bytes);
void save_sidecar(const CodecSidecar &sidecar, const std::string &path);
CodecSidecar load_sidecar(const std::string &path);

} // namespace csiinr
