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

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace csiinr
{

// Raised for malformed, truncated or mismatched binary inputs.
class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

static_assert(std::endian::native == std::endian::little, "little-endian host required");

class ByteWriter
{
public:
    void magic(std::string_view tag) { bytes_.insert(bytes_.end(), tag.begin(), tag.end()); }

    template <typename T>
        requires std::is_arithmetic_v<T>
    void put(T value)
    {
        const auto *p = reinterpret_cast<const std::uint8_t *>(&value);
        bytes_.insert(bytes_.end(), p, p + sizeof(T));
    }

    void raw(std::span<const std::uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }

    const std::vector<std::uint8_t> &bytes() const { return bytes_; }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader
{
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    void expect_magic(std::string_view tag)
    {
        require(tag.size());
        if (std::memcmp(data_.data() + pos_, tag.data(), tag.size()) != 0)
            throw FormatError("bad magic, expected '" + std::string(tag) + "'");
        pos_ += tag.size();
    }

    template <typename T>
        requires std::is_arithmetic_v<T>
    T get()
    {
        require(sizeof(T));
        T value;
        std::memcpy(&value, data_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    std::span<const std::uint8_t> raw(std::size_t count)
    {
        require(count);
        auto out = data_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    std::size_t remaining() const { return data_.size() - pos_; }
    std::size_t position() const { return pos_; }

private:
    void require(std::size_t count) const
    {
        if (data_.size() - pos_ < count)
            throw FormatError("unexpected end of data");
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::string &path);
void write_file(const std::string &path, std::span<const std::uint8_t> bytes);

// 64-bit FNV-1a; stable across platforms, used for sidecar and config fingerprints.
constexpr std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    for (auto b : bytes)
    {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view text)
{
    return fnv1a64(std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

} // namespace csiinr
