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

// Integer range coder over a static FrequencyTable: 32-bit range, carries propagated
// back into the emitted bytes, and a bit-granular termination that emits only the bits
// needed to identify the final interval. The decoder reads zero bits past the end.

#pragma once

#include "csiinr/binary_io.hpp"
#include "csiinr/quantizer.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace csiinr
{

struct BitPayload
{
    std::vector<std::uint8_t> bytes; // ceil(bit_length / 8), unused low bits of the last byte are zero
    std::size_t bit_length = 0;
};

class RangeEncoder
{
public:
    void encode(std::uint32_t start, std::uint32_t freq, std::uint32_t total);
    BitPayload finish();

private:
    void carry();

    std::uint64_t low_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::vector<std::uint8_t> out_;
};

class RangeDecoder
{
public:
    explicit RangeDecoder(const BitPayload &payload);

    // Throws FormatError if the code value lies outside every symbol interval.
    std::uint32_t decode(const FrequencyTable &table);

private:
    std::uint8_t next_byte();

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    std::uint32_t code_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
};

BitPayload range_encode(std::span<const std::uint32_t> symbols, const FrequencyTable &table);
Symbols range_decode(const BitPayload &payload, const FrequencyTable &table, std::size_t count);

// Fixed-width big-endian bit packing, `bits` per symbol.
BitPayload pack_bits(std::span<const std::uint32_t> symbols, int bits);
Symbols unpack_bits(const BitPayload &payload, int bits, std::size_t count);

enum class PayloadMode : std::uint8_t
{
    unquantized = 0,
    raw = 1,
    entropy_coded = 2,
};

struct CodedSymbols
{
    PayloadMode mode = PayloadMode::raw;
    BitPayload payload;
};

// Range codes the symbols, falling back to raw packing when that is not shorter than
// count * bits, so the payload never exceeds count * bits.
CodedSymbols entropy_encode(std::span<const std::uint32_t> symbols, const FrequencyTable &table);
Symbols entropy_decode(const CodedSymbols &coded, const FrequencyTable &table, std::size_t count);

} // namespace csiinr
