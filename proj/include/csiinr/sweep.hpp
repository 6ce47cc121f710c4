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

#include "csiinr/dataset.hpp"
#include "csiinr/feedback.hpp"
#include "csiinr/kv_config.hpp"
#include "csiinr/metrics.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csiinr
{

struct CodecEvaluation
{
    MetricReport report;
    std::vector<Vector<float>> codewords; // pre-quantisation codewords, one per sample
    double entropy_coded_fraction = 0.0;  // share of streams that used the range coder
};

// Encodes every sample (normalised domain) through the full chain and reconstructs it.
CodecEvaluation evaluate_codec(const ModelParams<float> &params, std::span<const Eigen::MatrixXcf> samples,
                               int inner_steps, double inner_lr, const CodecSidecar *sidecar);

// Codec state fitted on the codewords of `fit_samples` after `inner_steps` inner steps.
CodecSidecar fit_codec_on(const ModelParams<float> &params, std::span<const Eigen::MatrixXcf> fit_samples,
                          int inner_steps, double inner_lr, int bits);

// Keys: dataset, checkpoint.<n>, n, bits (list, "none" = unquantized), s_in (list), output,
// fit_offset, fit_count, test_offset, test_count, inner_lr.
struct SweepSpec
{
    std::string dataset;
    std::map<int, std::string> checkpoints;
    std::vector<int> codeword_dims;
    std::vector<std::optional<int>> bits;
    std::vector<int> inner_steps;
    std::string output;
    std::size_t fit_offset = 0;
    std::size_t fit_count = 0;
    std::size_t test_offset = 0;
    std::size_t test_count = 0;
    double inner_lr = 1e-2;

    static SweepSpec from_config(const KeyValueConfig &cfg);
    void validate() const;
};

struct SweepRow
{
    int codeword_dim = 0;
    std::optional<int> bits;
    int inner_steps = 0;
    double nmse_linear = 0.0;
    double nmse_db = 0.0;
    double raw_bits = 0.0;     // n*b, or 32n unquantized
    double payload_bits = 0.0; // mean transmitted payload
    double bit_rate = 0.0;
    double compression_ratio = 0.0;
    std::optional<double> coding_gain;
    std::string status = "ok";
    std::string fingerprint;

    bool operator==(const SweepRow &) const = default;
};

// Loads the referenced dataset and checkpoints; a missing or unreadable checkpoint yields
// error rows for its cells instead of aborting the sweep.
std::vector<SweepRow> rd_sweep(const SweepSpec &spec);

// Same, over artifacts already in memory; `load_errors` marks codeword sizes whose checkpoint
// could not be loaded.
std::vector<SweepRow> rd_sweep(const SweepSpec &spec, const Dataset &dataset,
                               const std::map<int, ModelParams<float>> &models,
                               const std::map<int, std::string> &load_errors = {});

std::string sweep_csv(const std::vector<SweepRow> &rows);
std::vector<SweepRow> parse_sweep_csv(const std::string &text);

// Shortest round-trip decimal; "-inf"/"inf"/"nan" for non-finite values.
std::string format_number(double v);
double parse_number(const std::string &s);

} // namespace csiinr
