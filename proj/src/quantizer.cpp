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

#include "csiinr/quantizer.hpp"

#include "csiinr/binary_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace csiinr
{

namespace
{
constexpr std::uint32_t sidecar_version = 1;
}

void QuantizerConfig::validate() const
{
    if (bits < 1 || bits > 16)
        throw std::invalid_argument("QuantizerConfig: bits must lie in [1, 16]");
    if (lower.size() != upper.size() || lower.size() == 0)
        throw std::invalid_argument("QuantizerConfig: bounds must be nonempty and of equal length");
    for (Eigen::Index k = 0; k < lower.size(); ++k)
        if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]) || !(lower[k] < upper[k]))
            throw std::invalid_argument("QuantizerConfig: need finite lo < hi in dimension " + std::to_string(k));
}

QuantizerConfig fit_quantizer(std::span<const Eigen::VectorXd> codewords, int bits)
{
    if (codewords.empty())
        throw std::invalid_argument("fit_quantizer: empty codeword set");
    const auto n = codewords.front().size();
    Eigen::VectorXd lo = codewords.front();
    Eigen::VectorXd hi = codewords.front();
    for (const auto &c : codewords)
    {
        if (c.size() != n)
            throw std::invalid_argument("fit_quantizer: codewords differ in length");
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
    }
    QuantizerConfig q{bits, lo, hi};
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const double range = hi[k] - lo[k];
        const double margin = range > 0.0 ? 0.01 * range : 1e-6;
        q.lower[k] = lo[k] - margin;
        q.upper[k] = hi[k] + margin;
    }
    q.validate();
    return q;
}

Symbols quantize(const Eigen::VectorXd &codeword, const QuantizerConfig &q)
{
    if (codeword.size() != q.dims())
        throw std::invalid_argument("quantize: codeword length does not match quantizer");
    const double top = static_cast<double>(q.levels() - 1);
    Symbols symbols(static_cast<std::size_t>(codeword.size()));
    for (int k = 0; k < q.dims(); ++k)
    {
        const double index = std::floor((codeword[k] - q.lower[k]) / q.step(k));
        symbols[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(std::clamp(index, 0.0, top));
    }
    return symbols;
}

Eigen::VectorXd dequantize(std::span<const std::uint32_t> symbols, const QuantizerConfig &q)
{
    if (static_cast<int>(symbols.size()) != q.dims())
        throw std::invalid_argument("dequantize: symbol count does not match quantizer");
    Eigen::VectorXd out(q.dims());
    for (int k = 0; k < q.dims(); ++k)
    {
        if (symbols[static_cast<std::size_t>(k)] >= q.levels())
            throw std::invalid_argument("dequantize: symbol outside alphabet");
        out[k] = q.lower[k] + (symbols[static_cast<std::size_t>(k)] + 0.5) * q.step(k);
    }
    return out;
}

std::uint32_t FrequencyTable::lookup(std::uint32_t value) const
{
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), value);
    return static_cast<std::uint32_t>(std::distance(cumulative.begin(), it) - 1);
}

void FrequencyTable::validate() const
{
    if (bits < 1 || bits > 16 || counts.size() != (std::size_t{1} << bits) || cumulative.size() != counts.size() + 1)
        throw std::invalid_argument("FrequencyTable: alphabet does not match bit width");
    if (cumulative.front() != 0 || total() > max_total)
        throw std::invalid_argument("FrequencyTable: cumulative total must lie in (0, 2^16]");
    for (std::size_t s = 0; s < counts.size(); ++s)
        if (counts[s] == 0 || cumulative[s + 1] != cumulative[s] + counts[s])
            throw std::invalid_argument("FrequencyTable: every symbol needs a nonzero count");
}

FrequencyTable FrequencyTable::from_counts(int bits, std::vector<std::uint32_t> counts)
{
    FrequencyTable t;
    t.bits = bits;
    t.counts = std::move(counts);
    t.cumulative.assign(t.counts.size() + 1, 0);
    for (std::size_t s = 0; s < t.counts.size(); ++s)
        t.cumulative[s + 1] = t.cumulative[s] + t.counts[s];
    t.validate();
    return t;
}

FrequencyTable FrequencyTable::uniform(int bits)
{
    if (bits < 1 || bits > 16)
        throw std::invalid_argument("FrequencyTable: bits must lie in [1, 16]");
    const std::size_t alphabet = std::size_t{1} << bits;
    return from_counts(bits, std::vector<std::uint32_t>(alphabet, max_total / static_cast<std::uint32_t>(alphabet)));
}

FrequencyTable fit_frequency_table(std::span<const Symbols> quantized, int bits)
{
    if (quantized.empty())
        throw std::invalid_argument("fit_frequency_table: no training symbols");
    if (bits < 1 || bits > 16)
        throw std::invalid_argument("fit_frequency_table: bits must lie in [1, 16]");
    const std::size_t alphabet = std::size_t{1} << bits;
    std::vector<std::uint64_t> hist(alphabet, 1);
    for (const auto &symbols : quantized)
        for (auto s : symbols)
        {
            if (s >= alphabet)
                throw std::invalid_argument("fit_frequency_table: symbol outside alphabet");
            ++hist[s];
        }

    const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
    std::vector<std::uint32_t> counts(alphabet);
    if (total <= FrequencyTable::max_total)
        std::copy(hist.begin(), hist.end(), counts.begin());
    else
    {
        for (std::size_t s = 0; s < alphabet; ++s)
            counts[s] = static_cast<std::uint32_t>(std::max<std::uint64_t>(1, hist[s] * FrequencyTable::max_total / total));
        // Flooring to 1 can overshoot; take the excess from the largest counts.
        std::uint64_t sum = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
        while (sum > FrequencyTable::max_total)
        {
            auto it = std::max_element(counts.begin(), counts.end());
            --*it;
            --sum;
        }
    }
    return FrequencyTable::from_counts(bits, std::move(counts));
}

std::uint64_t CodecSidecar::hash() const { return fnv1a64(serialize_sidecar(*this)); }

std::vector<std::uint8_t> serialize_sidecar(const CodecSidecar &sidecar)
{
    sidecar.quantizer.validate();
    sidecar.table.validate();
    if (sidecar.table.bits != sidecar.quantizer.bits)
        throw std::invalid_argument("sidecar: quantizer and frequency table bit widths differ");
    ByteWriter w;
    w.magic("CSIS");
    w.put<std::uint32_t>(sidecar_version);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(sidecar.quantizer.dims()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(sidecar.quantizer.bits));
    for (int k = 0; k < sidecar.quantizer.dims(); ++k)
    {
        w.put<double>(sidecar.quantizer.lower[k]);
        w.put<double>(sidecar.quantizer.upper[k]);
    }
    for (auto c : sidecar.table.counts)
        w.put<std::uint16_t>(static_cast<std::uint16_t>(c));
    return w.take();
}

CodecSidecar deserialize_sidecar(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    r.expect_magic("CSIS");
    if (const auto version = r.get<std::uint32_t>(); version != sidecar_version)
        throw FormatError("unsupported sidecar version " + std::to_string(version));
    const auto n = r.get<std::uint32_t>();
    const auto bits = r.get<std::uint32_t>();
    if (n == 0 || n > (1u << 20) || bits < 1 || bits > 16)
        throw FormatError("sidecar header out of range");
    if (r.remaining() != std::size_t{n} * 16 + (std::size_t{1} << bits) * 2)
        throw FormatError("sidecar payload size does not match header");
    CodecSidecar sc;
    sc.quantizer.bits = static_cast<int>(bits);
    sc.quantizer.lower.resize(n);
    sc.quantizer.upper.resize(n);
    for (std::uint32_t k = 0; k < n; ++k)
    {
        sc.quantizer.lower[k] = r.get<double>();
        sc.quantizer.upper[k] = r.get<double>();
    }
    std::vector<std::uint32_t> counts(std::size_t{1} << bits);
    for (auto &c : counts)
        c = r.get<std::uint16_t>();
    try
    {
        sc.quantizer.validate();
        sc.table = FrequencyTable::from_counts(static_cast<int>(bits), std::move(counts));
    }
    catch (const std::invalid_argument &e)
    {
        throw FormatError(std::string("sidecar: ") + e.what());
    }
    return sc;
}

void save_sidecar(const CodecSidecar &sidecar, const std::string &path) { write_file(path, serialize_sidecar(sidecar)); }

CodecSidecar load_sidecar(const std::string &path) { return deserialize_sidecar(read_file(path)); }

} // namespace csiinr
