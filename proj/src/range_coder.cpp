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

#include "csiinr/range_coder.hpp"

#include <stdexcept>

namespace csiinr
{

namespace
{

constexpr std::uint32_t renorm_threshold = 1u << 24;

void check_payload(const BitPayload &payload)
{
    if (payload.bytes.size() != (payload.bit_length + 7) / 8)
        throw FormatError("payload byte count does not match its bit length");
    if (payload.bit_length % 8 != 0)
    {
        const auto unused = static_cast<unsigned>(8 - payload.bit_length % 8);
        if (payload.bytes.back() & ((1u << unused) - 1))
            throw FormatError("payload has nonzero padding bits");
    }
}

class BitWriter
{
public:
    void put(std::uint32_t value, int bits)
    {
        for (int i = bits - 1; i >= 0; --i)
        {
            if (length_ % 8 == 0)
                bytes_.push_back(0);
            if ((value >> i) & 1u)
                bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (length_ % 8));
            ++length_;
        }
    }
    BitPayload take() { return {std::move(bytes_), length_}; }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t length_ = 0;
};

} // namespace

void RangeEncoder::carry()
{
    for (auto it = out_.rbegin(); it != out_.rend(); ++it)
        if (++*it != 0)
            return;
    throw std::logic_error("range coder carry ran past the first byte");
}

void RangeEncoder::encode(std::uint32_t start, std::uint32_t freq, std::uint32_t total)
{
    if (freq == 0 || start + freq > total || total > FrequencyTable::max_total)
        throw std::invalid_argument("RangeEncoder: invalid symbol interval");
    const std::uint32_t r = range_ / total;
    low_ += std::uint64_t{r} * start;
    range_ = r * freq;
    if (low_ >> 32)
    {
        carry();
        low_ &= 0xFFFFFFFFu;
    }
    while (range_ < renorm_threshold)
    {
        out_.push_back(static_cast<std::uint8_t>(low_ >> 24));
        low_ = (low_ << 8) & 0xFFFFFFFFu;
        range_ <<= 8;
    }
}

BitPayload RangeEncoder::finish()
{
    // Shortest bit string v (followed by zeros) with low <= v < low + range.
    const std::uint64_t high = low_ + range_;
    int kept = 0;
    std::uint64_t value = 0;
    for (; kept <= 32; ++kept)
    {
        const std::uint64_t unit = std::uint64_t{1} << (32 - kept);
        value = (low_ + unit - 1) & ~(unit - 1);
        if (value < high)
            break;
    }
    if (value >> 32)
    {
        carry();
        value &= 0xFFFFFFFFu;
    }

    BitWriter w;
    for (auto b : out_)
        w.put(b, 8);
    w.put(static_cast<std::uint32_t>(value >> (32 - kept)), kept);
    BitPayload payload = w.take();

    // Trailing zeros are implied by the decoder.
    while (payload.bit_length > 0)
    {
        const std::size_t last = payload.bit_length - 1;
        if (payload.bytes[last / 8] & (0x80u >> (last % 8)))
            break;
        --payload.bit_length;
    }
    payload.bytes.resize((payload.bit_length + 7) / 8);
    out_.clear();
    low_ = 0;
    range_ = 0xFFFFFFFFu;
    return payload;
}

RangeDecoder::RangeDecoder(const BitPayload &payload) : data_(payload.bytes)
{
    check_payload(payload);
    for (int i = 0; i < 4; ++i)
        code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() { return pos_ < data_.size() ? data_[pos_++] : (++pos_, std::uint8_t{0}); }

std::uint32_t RangeDecoder::decode(const FrequencyTable &table)
{
    const std::uint32_t r = range_ / table.total();
    const std::uint32_t value = code_ / r;
    if (value >= table.total())
        throw FormatError("range decoder: code value outside the model (malformed payload)");
    const std::uint32_t symbol = table.lookup(value);
    code_ -= r * table.cumulative[symbol];
    range_ = r * table.counts[symbol];
    while (range_ < renorm_threshold)
    {
        code_ = (code_ << 8) | next_byte();
        range_ <<= 8;
    }
    return symbol;
}

BitPayload range_encode(std::span<const std::uint32_t> symbols, const FrequencyTable &table)
{
    RangeEncoder enc;
    for (auto s : symbols)
    {
        if (s >= table.alphabet())
            throw std::invalid_argument("range_encode: symbol outside alphabet");
        enc.encode(table.cumulative[s], table.counts[s], table.total());
    }
    return enc.finish();
}

Symbols range_decode(const BitPayload &payload, const FrequencyTable &table, std::size_t count)
{
    RangeDecoder dec(payload);
    Symbols out(count);
    for (auto &s : out)
        s = dec.decode(table);
    return out;
}

BitPayload pack_bits(std::span<const std::uint32_t> symbols, int bits)
{
    BitWriter w;
    for (auto s : symbols)
    {
        if (bits < 32 && (s >> bits) != 0)
            throw std::invalid_argument("pack_bits: symbol does not fit the bit width");
        w.put(s, bits);
    }
    return w.take();
}

Symbols unpack_bits(const BitPayload &payload, int bits, std::size_t count)
{
    check_payload(payload);
    if (payload.bit_length != count * static_cast<std::size_t>(bits))
        throw FormatError("raw payload length does not match symbol count");
    Symbols out(count);
    std::size_t pos = 0;
    for (auto &s : out)
    {
        s = 0;
        for (int i = 0; i < bits; ++i, ++pos)
            s = (s << 1) | ((payload.bytes[pos / 8] >> (7 - pos % 8)) & 1u);
    }
    return out;
}

CodedSymbols entropy_encode(std::span<const std::uint32_t> symbols, const FrequencyTable &table)
{
    auto coded = range_encode(symbols, table);
    if (coded.bit_length < symbols.size() * static_cast<std::size_t>(table.bits))
        return {PayloadMode::entropy_coded, std::move(coded)};
    return {PayloadMode::raw, pack_bits(symbols, table.bits)};
}

Symbols entropy_decode(const CodedSymbols &coded, const FrequencyTable &table, std::size_t count)
{
    switch (coded.mode)
    {
    case PayloadMode::entropy_coded:
        return range_decode(coded.payload, table, count);
    case PayloadMode::raw:
        return unpack_bits(coded.payload, table.bits, count);
    default:
        throw FormatError("entropy_decode: payload is not quantized");
    }
}

} // namespace csiinr
