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

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csiinr
{

// "key = value" lines; '#' starts a comment; later keys override earlier ones.
class KeyValueConfig
{
public:
    static KeyValueConfig parse(const std::string &text);
    static KeyValueConfig load(const std::string &path);

    bool has(const std::string &key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string &key) const;
    std::string require(const std::string &key) const;
    // Comma-separated list, items trimmed, empty items dropped.
    std::vector<std::string> list(const std::string &key) const;
    const std::map<std::string, std::string> &values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

std::string trim(const std::string &s);
std::vector<std::string> split(const std::string &s, char sep);

} // namespace csiinr
