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

#include "csiinr/sweep.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace csiinr
{

namespace
{

std::size_t parse_size(const KeyValueConfig &cfg, const std::string &key, std::size_t fallback)
{
    const auto v = cfg.get(key);
    return v ? static_cast<std::size_t>(std::stoull(*v)) : fallback;
}

std::string model_digest(const ModelParams<float> &params)
{
    const auto bytes = serialize_checkpoint(params);
    return fingerprint(std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
}

} // namespace

CodecEvaluation evaluate_codec(const ModelParams<float> &params, std::span<const Eigen::MatrixXcf> samples,
                               int inner_steps, double inner_lr, const CodecSidecar *sidecar)
{
    if (samples.empty())
        throw std::invalid_argument("evaluate_codec: no samples");
    const CoordinateGrid grid(static_cast<int>(samples.front().rows()), static_cast<int>(samples.front().cols()));
    const Matrix<float> coords = grid.points<float>();
    const int n = params.arch.codeword_dim;

    CodecEvaluation eval;
    double payload_total = 0.0;
    std::size_t coded = 0;
    for (const auto &H : samples)
    {
        const Matrix<float> targets = to_planes<float>(H);
        auto codeword = inner_adapt(params, coords, targets, inner_steps, inner_lr);
        const auto stream = pack_codeword(codeword, sidecar);
        const auto received = unpack_codeword(Bitstream::parse(stream.serialize()), n, sidecar);
        eval.report.per_sample_nmse.push_back(nmse_planes(targets, predict(params, received, coords)).linear);
        payload_total += static_cast<double>(stream.payload.bit_length);
        coded += stream.mode == PayloadMode::entropy_coded;
        eval.codewords.push_back(std::move(codeword));
    }
    const auto count = static_cast<double>(samples.size());
    const std::optional<int> bits = sidecar ? std::optional<int>(sidecar->quantizer.bits) : std::nullopt;
    eval.report.mean = mean_nmse(eval.report.per_sample_nmse);
    eval.report.raw_bits_per_sample = bits ? double(n) * *bits : 32.0 * n;
    eval.report.coded_bits_per_sample = payload_total / count;
    eval.report.rates = rates(n, bits, eval.report.coded_bits_per_sample, grid.rows(), grid.cols());
    eval.entropy_coded_fraction = static_cast<double>(coded) / count;
    return eval;
}

CodecSidecar fit_codec_on(const ModelParams<float> &params, std::span<const Eigen::MatrixXcf> fit_samples,
                          int inner_steps, double inner_lr, int bits)
{
    if (fit_samples.empty())
        throw std::invalid_argument("fit_codec_on: no samples");
    const CoordinateGrid grid(static_cast<int>(fit_samples.front().rows()), static_cast<int>(fit_samples.front().cols()));
    const Matrix<float> coords = grid.points<float>();
    std::vector<Vector<float>> codewords;
    for (const auto &H : fit_samples)
        codewords.push_back(inner_adapt(params, coords, to_planes<float>(H), inner_steps, inner_lr));
    return fit_codec(codewords, bits);
}

SweepSpec SweepSpec::from_config(const KeyValueConfig &cfg)
{
    SweepSpec spec;
    spec.dataset = cfg.require("dataset");
    spec.output = cfg.get("output").value_or("");
    for (const auto &[key, value] : cfg.values())
        if (key.rfind("checkpoint.", 0) == 0)
            spec.checkpoints[std::stoi(key.substr(11))] = value;
    for (const auto &v : cfg.list("n"))
        spec.codeword_dims.push_back(std::stoi(v));
    for (const auto &v : cfg.list("bits"))
        spec.bits.push_back(v == "none" ? std::nullopt : std::optional<int>(std::stoi(v)));
    for (const auto &v : cfg.list("s_in"))
        spec.inner_steps.push_back(std::stoi(v));
    spec.fit_offset = parse_size(cfg, "fit_offset", 0);
    spec.fit_count = parse_size(cfg, "fit_count", 0);
    spec.test_offset = parse_size(cfg, "test_offset", 0);
    spec.test_count = parse_size(cfg, "test_count", 0);
    if (const auto lr = cfg.get("inner_lr"))
        spec.inner_lr = std::stod(*lr);
    spec.validate();
    return spec;
}

void SweepSpec::validate() const
{
    if (codeword_dims.empty() || bits.empty() || inner_steps.empty())
        throw std::invalid_argument("SweepSpec: n, bits and s_in must be nonempty");
    for (const auto &b : bits)
        if (b && (*b < 1 || *b > 16))
            throw std::invalid_argument("SweepSpec: bits must lie in [1, 16] or be 'none'");
    for (int s : inner_steps)
        if (s < 0)
            throw std::invalid_argument("SweepSpec: s_in must be >= 0");
    if (test_count == 0)
        throw std::invalid_argument("SweepSpec: test_count must be > 0");
    for (const auto &b : bits)
        if (b && fit_count == 0)
            throw std::invalid_argument("SweepSpec: quantized cells need fit_count > 0");
}

std::vector<SweepRow> rd_sweep(const SweepSpec &spec, const Dataset &dataset,
                               const std::map<int, ModelParams<float>> &models,
                               const std::map<int, std::string> &load_errors)
{
    spec.validate();
    if (spec.test_offset + spec.test_count > dataset.size() || spec.fit_offset + spec.fit_count > dataset.size())
        throw std::invalid_argument("rd_sweep: fit/test ranges exceed the dataset");
    const std::span<const Eigen::MatrixXcf> all(dataset.samples);
    const auto test = all.subspan(spec.test_offset, spec.test_count);
    const auto fit = all.subspan(spec.fit_offset, spec.fit_count);

    std::vector<SweepRow> rows;
    for (int n : spec.codeword_dims)
    {
        const auto model = models.find(n);
        std::string digest = "missing";
        if (model != models.end())
            digest = model_digest(model->second);
        for (int s_in : spec.inner_steps)
        {
            // Test codewords are shared by every bit width of this (n, s_in).
            std::optional<CodecEvaluation> unquantized;
            for (const auto &bits : spec.bits)
            {
                SweepRow row;
                row.codeword_dim = n;
                row.bits = bits;
                row.inner_steps = s_in;
                std::ostringstream canon;
                canon << "dataset_seed=" << dataset.seed << ";scale=" << format_number(dataset.scale)
                      << ";rows=" << dataset.rows() << ";cols=" << dataset.cols() << ";model=" << digest << ";n=" << n
                      << ";bits=" << (bits ? std::to_string(*bits) : "none") << ";s_in=" << s_in
                      << ";fit=" << spec.fit_offset << "+" << spec.fit_count << ";test=" << spec.test_offset << "+"
                      << spec.test_count << ";lr=" << format_number(spec.inner_lr);
                row.fingerprint = fingerprint(canon.str());

                const auto nan = std::numeric_limits<double>::quiet_NaN();
                if (model == models.end())
                {
                    const auto err = load_errors.find(n);
                    row.status = "error: " + (err != load_errors.end() ? err->second : "no checkpoint for n=" + std::to_string(n));
                    row.nmse_linear = row.nmse_db = row.raw_bits = row.payload_bits = row.bit_rate = nan;
                    row.compression_ratio = n / (2.0 * dataset.rows() * dataset.cols());
                    rows.push_back(row);
                    continue;
                }
                const auto &params = model->second;
                CodecEvaluation eval;
                if (bits)
                {
                    const auto sidecar = fit_codec_on(params, fit, s_in, spec.inner_lr, *bits);
                    eval = evaluate_codec(params, test, s_in, spec.inner_lr, &sidecar);
                }
                else
                {
                    if (!unquantized)
                        unquantized = evaluate_codec(params, test, s_in, spec.inner_lr, nullptr);
                    eval = *unquantized;
                }
                row.nmse_linear = eval.report.mean.linear;
                row.nmse_db = eval.report.mean.db;
                row.raw_bits = eval.report.raw_bits_per_sample;
                row.payload_bits = eval.report.coded_bits_per_sample;
                row.bit_rate = eval.report.rates.bit_rate;
                row.compression_ratio = eval.report.rates.compression_ratio;
                row.coding_gain = eval.report.rates.coding_gain;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<SweepRow> rd_sweep(const SweepSpec &spec)
{
    const auto dataset = load_dataset(spec.dataset);
    std::map<int, ModelParams<float>> models;
    std::map<int, std::string> errors;
    for (int n : spec.codeword_dims)
    {
        const auto it = spec.checkpoints.find(n);
        if (it == spec.checkpoints.end())
        {
            errors[n] = "no checkpoint configured for n=" + std::to_string(n);
            continue;
        }
        try
        {
            auto params = load_checkpoint(it->second);
            if (params.arch.codeword_dim != n)
                throw std::runtime_error("checkpoint '" + it->second + "' has n=" +
                                         std::to_string(params.arch.codeword_dim));
            models.emplace(n, std::move(params));
        }
        catch (const std::exception &e)
        {
            errors[n] = e.what();
        }
    }
    return rd_sweep(spec, dataset, models, errors);
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v < 0 ? "-inf" : "inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string &s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

namespace
{
constexpr const char *sweep_header =
    "n,bits,s_in,nmse_linear,nmse_db,raw_bits,payload_bits,bit_rate,compression_ratio,coding_gain,status,fingerprint";
}

std::string sweep_csv(const std::vector<SweepRow> &rows)
{
    std::ostringstream os;
    os << sweep_header << "\n";
    for (const auto &r : rows)
    {
        std::string status = r.status;
        for (auto &c : status)
            if (c == ',' || c == '\n')
                c = ';';
        os << r.codeword_dim << "," << (r.bits ? std::to_string(*r.bits) : "none") << "," << r.inner_steps << ","
           << format_number(r.nmse_linear) << "," << format_number(r.nmse_db) << "," << format_number(r.raw_bits)
           << "," << format_number(r.payload_bits) << "," << format_number(r.bit_rate) << ","
           << format_number(r.compression_ratio) << "," << (r.coding_gain ? format_number(*r.coding_gain) : "") << ","
           << status << "," << r.fingerprint << "\n";
    }
    return os.str();
}

std::vector<SweepRow> parse_sweep_csv(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != sweep_header)
        throw std::invalid_argument("sweep CSV: unexpected header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line))
    {
        if (trim(line).empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 12)
            throw std::invalid_argument("sweep CSV: expected 12 fields, got " + std::to_string(f.size()));
        SweepRow r;
        r.codeword_dim = std::stoi(f[0]);
        r.bits = f[1] == "none" ? std::nullopt : std::optional<int>(std::stoi(f[1]));
        r.inner_steps = std::stoi(f[2]);
        r.nmse_linear = parse_number(f[3]);
        r.nmse_db = parse_number(f[4]);
        r.raw_bits = parse_number(f[5]);
        r.payload_bits = parse_number(f[6]);
        r.bit_rate = parse_number(f[7]);
        r.compression_ratio = parse_number(f[8]);
        if (!f[9].empty())
            r.coding_gain = parse_number(f[9]);
        r.status = f[10];
        r.fingerprint = f[11];
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace csiinr
