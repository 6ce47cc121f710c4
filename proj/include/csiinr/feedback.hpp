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

// Transmitter and receiver chains of the feedback link:
//   UE: channel -> inner-loop codeword -> quantise -> entropy code -> Bitstream
//   BS: Bitstream -> entropy decode -> dequantise -> modulated network -> channel

#pragma once

#include "csiinr/meta_train.hpp"
#include "csiinr/model.hpp"
#include "csiinr/quantizer.hpp"
#include "csiinr/range_coder.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace csiinr
{

// Little-endian "CSIF" v1 header: magic, version u32, n u32, bits u8 (0 when unquantized),
// mode u8, sidecar hash u64 (0 when unquantized), payload bit length u32; then the payload.
// Unquantized payloads hold n little-endian f32 values.
struct Bitstream
{
    std::uint32_t codeword_dim = 0;
    std::uint8_t bits = 0;
    PayloadMode mode = PayloadMode::unquantized;
    std::uint64_t sidecar_hash = 0;
    BitPayload payload;

    static constexpr std::size_t header_bytes = 4 + 4 + 4 + 1 + 1 + 8 + 4;

    std::vector<std::uint8_t> serialize() const;
    static Bitstream parse(std::span<const std::uint8_t> bytes);
};

Bitstream pack_codeword(const Vector<float> &codeword, const CodecSidecar *sidecar);
// Recovers the (dequantised) codeword; checks n and, for quantised streams, the sidecar hash.
Vector<float> unpack_codeword(const Bitstream &stream, int codeword_dim, const CodecSidecar *sidecar);

// H is in the original channel domain; it is divided by params.channel_scale before fitting.
Bitstream encode_sample(const ModelParams<float> &params, const Eigen::MatrixXcf &H, int inner_steps,
                        double inner_lr, const CodecSidecar *sidecar);

// Reconstruction in the original channel domain.
Eigen::MatrixXcf decode_sample(const ModelParams<float> &params, const Bitstream &stream, const CoordinateGrid &grid,
                               const CodecSidecar *sidecar);

// Fits quantiser bounds and the pooled frequency table on training codewords.
CodecSidecar fit_codec(std::span<const Vector<float>> codewords, int bits);

} // namespace csiinr
