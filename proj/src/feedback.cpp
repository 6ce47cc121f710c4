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

#include "csiinr/feedback.hpp"

#include <cstring>
#include <stdexcept>

namespace csiinr
{

namespace
{
constexpr std::uint32_t bitstream_version = 1;
}

std::vector<std::uint8_t> Bitstream::serialize() const
{
    ByteWriter w;
    w.magic("CSIF");
    w.put<std::uint32_t>(bitstream_version);
    w.put<std::uint32_t>(codeword_dim);
    w.put<std::uint8_t>(bits);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(mode));
    w.put<std::uint64_t>(sidecar_hash);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(payload.bit_length));
    w.raw(payload.bytes);
    return w.take();
}

Bitstream Bitstream::parse(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    r.expect_magic("CSIF");
    if (const auto version = r.get<std::uint32_t>(); version != bitstream_version)
        throw FormatError("unsupported bitstream version " + std::to_string(version));
    Bitstream s;
    s.codeword_dim = r.get<std::uint32_t>();
    s.bits = r.get<std::uint8_t>();
    const auto mode = r.get<std::uint8_t>();
    if (mode > static_cast<std::uint8_t>(PayloadMode::entropy_coded))
        throw FormatError("unknown bitstream mode " + std::to_string(mode));
    s.mode = static_cast<PayloadMode>(mode);
    s.sidecar_hash = r.get<std::uint64_t>();
    s.payload.bit_length = r.get<std::uint32_t>();
    if (s.codeword_dim == 0)
        throw FormatError("bitstream declares an empty codeword");
    if ((s.mode == PayloadMode::unquantized) != (s.bits == 0) || s.bits > 16)
        throw FormatError("bitstream bit width inconsistent with its mode");
    if (r.remaining() != (s.payload.bit_length + 7) / 8)
        throw FormatError("bitstream payload size does not match header");
    const auto payload = r.raw(r.remaining());
    s.payload.bytes.assign(payload.begin(), payload.end());
    return s;
}

Bitstream pack_codeword(const Vector<float> &codeword, const CodecSidecar *sidecar)
{
    Bitstream s;
    s.codeword_dim = static_cast<std::uint32_t>(codeword.size());
    if (!sidecar)
    {
        ByteWriter w;
        for (Eigen::Index k = 0; k < codeword.size(); ++k)
            w.put<float>(codeword[k]);
        s.payload.bytes = w.take();
        s.payload.bit_length = s.payload.bytes.size() * 8;
        return s;
    }
    const auto symbols = quantize(codeword.cast<double>(), sidecar->quantizer);
    auto coded = entropy_encode(symbols, sidecar->table);
    s.bits = static_cast<std::uint8_t>(sidecar->quantizer.bits);
    s.mode = coded.mode;
    s.sidecar_hash = sidecar->hash();
    s.payload = std::move(coded.payload);
    return s;
}

Vector<float> unpack_codeword(const Bitstream &stream, int codeword_dim, const CodecSidecar *sidecar)
{
    if (static_cast<int>(stream.codeword_dim) != codeword_dim)
        throw std::invalid_argument("bitstream codeword length " + std::to_string(stream.codeword_dim) +
                                    " does not match model n = " + std::to_string(codeword_dim));
    if (stream.mode == PayloadMode::unquantized)
    {
        if (stream.payload.bit_length != std::size_t{stream.codeword_dim} * 32)
            throw FormatError("unquantized payload has the wrong length");
        Vector<float> codeword(codeword_dim);
        std::memcpy(codeword.data(), stream.payload.bytes.data(), stream.payload.bytes.size());
        return codeword;
    }
    if (!sidecar)
        throw std::invalid_argument("quantized bitstream needs a codec sidecar");
    if (stream.sidecar_hash != sidecar->hash() || stream.bits != sidecar->quantizer.bits)
        throw std::invalid_argument("bitstream was produced with a different codec sidecar");
    if (sidecar->quantizer.dims() != codeword_dim)
        throw std::invalid_argument("codec sidecar dimension does not match the model");
    const auto symbols = entropy_decode({stream.mode, stream.payload}, sidecar->table, stream.codeword_dim);
    return dequantize(symbols, sidecar->quantizer).cast<float>();
}

Bitstream encode_sample(const ModelParams<float> &params, const Eigen::MatrixXcf &H, int inner_steps,
                        double inner_lr, const CodecSidecar *sidecar)
{
    const CoordinateGrid grid(static_cast<int>(H.rows()), static_cast<int>(H.cols()));
    const Matrix<float> targets = to_planes<float>(H) / static_cast<float>(params.channel_scale);
    const auto codeword = inner_adapt(params, grid.points<float>(), targets, inner_steps, inner_lr);
    return pack_codeword(codeword, sidecar);
}

Eigen::MatrixXcf decode_sample(const ModelParams<float> &params, const Bitstream &stream, const CoordinateGrid &grid,
                               const CodecSidecar *sidecar)
{
    const auto codeword = unpack_codeword(stream, params.arch.codeword_dim, sidecar);
    return reconstruct(params, codeword, grid, params.channel_scale);
}

CodecSidecar fit_codec(std::span<const Vector<float>> codewords, int bits)
{
    std::vector<Eigen::VectorXd> wide;
    wide.reserve(codewords.size());
    for (const auto &c : codewords)
        wide.push_back(c.cast<double>());
    CodecSidecar sc;
    sc.quantizer = fit_quantizer(wide, bits);
    std::vector<Symbols> symbols;
    symbols.reserve(wide.size());
    for (const auto &c : wide)
        symbols.push_back(quantize(c, sc.quantizer));
    sc.table = fit_frequency_table(symbols, bits);
    return sc;
}

} // namespace csiinr
