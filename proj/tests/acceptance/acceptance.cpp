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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
// Usage: acceptance [--epochs N] [--only K]   (defaults: the pinned desk budget, all criteria)

#include "csiinr/channel.hpp"
#include "csiinr/dataset.hpp"
#include "csiinr/diff_engine.hpp"
#include "csiinr/feedback.hpp"
#include "csiinr/meta_train.hpp"
#include "csiinr/metrics.hpp"
#include "csiinr/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <random>
#include <string>

using namespace csiinr;

namespace
{

// Tolerances and budgets.
constexpr double channel_tolerance = 1e-12;
constexpr double channel_seconds = 5.0;
constexpr double gradient_tolerance = 1e-4;
constexpr double gradient_seconds = 60.0;
constexpr double codec_overhead_bits = 48.0;
constexpr double codec_seconds = 60.0;
constexpr double training_gain_db = 10.0;
constexpr double training_minutes = 60.0;
constexpr double inner_step_slack_db = 0.5;
constexpr double quantization_gap_db = 1.0;
constexpr double quantization_slack_db = 0.5;

// Desk-scale training problem.
constexpr std::uint64_t desk_seed = 20260101;
constexpr std::size_t desk_train = 2048, desk_val = 256, desk_test = 512;
constexpr int desk_epochs = 560; // about 48 min at the measured 5.1 s/epoch on one core
constexpr double desk_modulation_init = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int id, bool pass, const std::string &detail)
{
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(const char *format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// 1 -----------------------------------------------------------------------------------------
void channel_equivalence()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> dim(1, 8), npaths(1, 5);
    std::uniform_real_distribution<double> f0(1e9, 6e9), bw(10e6, 200e6);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial)
    {
        // Narrowband array: the element-wise form assumes one phase slope for every subcarrier.
        const auto cfg = SystemConfig::make(dim(rng), dim(rng), npaths(rng), f0(rng), bw(rng));
        const auto paths = sample_paths(rng, cfg.num_paths, SamplingSpec{});
        const auto H = channel_matrix(paths, cfg);
        for (int n = 0; n < cfg.num_antennas; ++n)
            for (int m = 0; m < cfg.num_subcarriers; ++m)
                worst = std::max(worst, std::abs(H(n, m) - channel_element(n, m, paths, cfg)));
    }
    const double elapsed = seconds_since(t0);
    verdict(1, worst <= channel_tolerance && elapsed < channel_seconds,
            fmt("200 configs, max |diff| %.3e (tol %.0e), %.2f s (limit %.0f s)", worst, channel_tolerance, elapsed,
                channel_seconds));
}

// 2 -----------------------------------------------------------------------------------------
void gradient_correctness()
{
    const auto t0 = Clock::now();
    ArchConfig arch;
    arch.hidden_dim = 32;
    arch.num_layers = 3;
    arch.codeword_dim = 8;
    double worst = 0.0;
    std::string worst_block;
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        const auto params = init_params(seed, arch, 0.1).cast<double>();
        std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
        std::uniform_real_distribution<double> coord(-1.0, 1.0);
        std::normal_distribution<double> normal;
        Vector<double> codeword(arch.codeword_dim);
        for (auto &m : codeword)
            m = 0.3 * normal(rng);
        Matrix<double> x(2, 8), t(2, 8);
        for (auto &v : x.reshaped())
            v = coord(rng);
        for (auto &v : t.reshaped())
            v = 0.5 * normal(rng);
        const auto report = finite_diff_check(params, codeword, x, t, 1e-5);
        for (const auto &b : report.blocks)
            if (b.max_rel_error > worst)
            {
                worst = b.max_rel_error;
                worst_block = b.name;
            }
    }
    const double elapsed = seconds_since(t0);
    verdict(2, worst < gradient_tolerance && elapsed < gradient_seconds,
            fmt("50 configs, max rel err %.3e in %s (tol %.0e), %.1f s (limit %.0f s)", worst, worst_block.c_str(),
                gradient_tolerance, elapsed, gradient_seconds));
}

// 3 -----------------------------------------------------------------------------------------
void codec_exactness()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> bits_dist(1, 8);
    std::uniform_int_distribution<int> n_dist(4, 128);
    std::normal_distribution<double> normal;
    std::exponential_distribution<double> expo(1.0);
    int lossy = 0;
    double worst_excess = -1e300;
    for (int trial = 0; trial < 10000; ++trial)
    {
        const int bits = bits_dist(rng);
        const int n = n_dist(rng);
        const std::size_t alphabet = std::size_t{1} << bits;
        // Training symbols from a random skewed distribution; test symbols from the same or uniform.
        std::vector<double> weights(alphabet);
        for (auto &w : weights)
            w = std::pow(expo(rng), 3.0) + 1e-3;
        std::discrete_distribution<std::uint32_t> skewed(weights.begin(), weights.end());
        std::vector<Symbols> training(16, Symbols(static_cast<std::size_t>(n)));
        for (auto &s : training)
            for (auto &v : s)
                v = skewed(rng);
        const auto table = fit_frequency_table(training, bits);
        Symbols symbols(static_cast<std::size_t>(n));
        const bool uniform = trial % 5 == 0;
        for (auto &v : symbols)
            v = uniform ? static_cast<std::uint32_t>(rng() % alphabet) : skewed(rng);
        const auto coded = entropy_encode(symbols, table);
        if (entropy_decode(coded, table, symbols.size()) != symbols)
            ++lossy;
        worst_excess = std::max(worst_excess, static_cast<double>(coded.payload.bit_length) - n * bits);
    }
    // Quantizer: dense grid over random bounds, error at most half a step.
    double worst_ratio = 0.0;
    for (int bits = 1; bits <= 8; ++bits)
    {
        QuantizerConfig q;
        q.bits = bits;
        q.lower = Eigen::VectorXd(4);
        q.upper = Eigen::VectorXd(4);
        for (int k = 0; k < 4; ++k)
        {
            q.lower[k] = normal(rng);
            q.upper[k] = q.lower[k] + 0.01 + std::abs(normal(rng));
        }
        for (int i = 0; i <= 10000; ++i)
        {
            Eigen::VectorXd x(4);
            for (int k = 0; k < 4; ++k)
                x[k] = q.lower[k] + (q.upper[k] - q.lower[k]) * i / 10000.0;
            const auto y = dequantize(quantize(x, q), q);
            for (int k = 0; k < 4; ++k)
                worst_ratio = std::max(worst_ratio, std::abs(y[k] - x[k]) / (q.step(k) / 2));
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = lossy == 0 && worst_excess <= codec_overhead_bits && worst_ratio <= 1.0 + 1e-9 &&
                      elapsed < codec_seconds;
    verdict(3, pass,
            fmt("1e4 round trips, %d lossy, max payload - n*b = %.0f bits (limit +%.0f), max quant err %.6f * step/2, "
                "%.1f s (limit %.0f s)",
                lossy, worst_excess, codec_overhead_bits, worst_ratio, elapsed, codec_seconds));
}

// 4 -----------------------------------------------------------------------------------------
void table_identity()
{
    // payload = n b (1 - gain) on the 32 x 32 reference channel
    const auto r3 = rates(32, 3, 32.0 * 3 * (1 - 0.2459), 32, 32);
    const auto r8 = rates(32, 8, 32.0 * 8 * (1 - 0.0773), 32, 32);
    const double b3 = truncate_significant(r3.bit_rate, 4);
    const double b8 = truncate_significant(r8.bit_rate, 4);
    const bool pass = std::abs(b3 - 0.03534) < 1e-12 && std::abs(b8 - 0.1153) < 1e-12;
    verdict(4, pass, fmt("bit rate %.4g (b=3, expect 0.03534), %.4g (b=8, expect 0.1153)", b3, b8));
}

// 5-8 ---------------------------------------------------------------------------------------
struct DeskRun
{
    Dataset dataset;
    TrainResult result;
    double minutes = 0.0;
};

DeskRun desk_training(int epochs)
{
    DeskRun run;
    run.dataset = generate_dataset(desk_train + desk_val + desk_test, desk_seed, SystemConfig::make(16, 16, 3));
    const auto split = split_dataset(run.dataset, desk_train, desk_val);

    ArchConfig arch;
    arch.hidden_dim = 64;
    arch.num_layers = 5;
    arch.codeword_dim = 16;
    TrainConfig cfg;
    cfg.inner_steps = 3;
    cfg.inner_lr = 1e-2;
    cfg.outer_lr = 1e-6;
    cfg.batch_size = 64;
    cfg.max_epochs = epochs;
    cfg.patience = epochs;
    cfg.seed = desk_seed;
    cfg.modulation_init = desk_modulation_init;
    cfg.on_epoch = [](const TrainLog::Epoch &e) {
        if (e.epoch % 20 == 0 || e.epoch <= 3)
        {
            std::printf("  epoch %4d  val %.4f dB  %.0f s\n", e.epoch, e.val_nmse_db, e.wall_seconds);
            std::fflush(stdout);
        }
    };
    const auto t0 = Clock::now();
    run.result = train(split.train, split.validation, arch, cfg, run.dataset.scale);
    run.minutes = seconds_since(t0) / 60.0;
    return run;
}

void training_efficacy(const DeskRun &run)
{
    const auto &epochs = run.result.log.epochs;
    const double initial = epochs.front().val_nmse_db;
    const double final_db = epochs.back().val_nmse_db;
    double best = initial;
    for (const auto &e : epochs)
        best = std::min(best, e.val_nmse_db);
    verdict(5, final_db <= initial - training_gain_db && run.minutes <= training_minutes,
            fmt("val NMSE epoch 0 %.3f dB -> final %.3f dB (best %.3f dB, %zu epochs), gain %.3f dB (need %.0f), "
                "%.1f min (limit %.0f)",
                initial, final_db, best, epochs.size() - 1, initial - final_db, training_gain_db, run.minutes,
                training_minutes));
}

void inner_step_trend(const DeskRun &run, std::span<const Eigen::MatrixXcf> test)
{
    const auto &params = run.result.params;
    std::vector<MetricReport> reports;
    std::string detail;
    bool pass = true;
    for (int s : {2, 3, 5, 8})
    {
        reports.push_back(evaluate_codec(params, test, s, 1e-2, nullptr).report);
        detail += fmt("s_in=%d %.3f dB; ", s, reports.back().mean.db);
        if (reports.size() > 1 && reports.back().mean.db > reports[reports.size() - 2].mean.db + inner_step_slack_db)
            pass = false;
    }
    // Share of samples whose NMSE does not get worse from s_in = 2 to 8 (reported only).
    std::size_t monotone = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        monotone += reports.back().per_sample_nmse[i] <= reports.front().per_sample_nmse[i];
    detail += fmt("per-sample non-increasing 2->8: %.1f%%", 100.0 * monotone / test.size());
    verdict(6, pass, detail);
}

void quantization_trends(const DeskRun &run, std::span<const Eigen::MatrixXcf> fit,
                         std::span<const Eigen::MatrixXcf> test)
{
    const auto &params = run.result.params;
    const int n = params.arch.codeword_dim;
    const double unquantized = evaluate_codec(params, test, 3, 1e-2, nullptr).report.mean.db;
    std::string detail = fmt("unquantized %.3f dB; ", unquantized);
    std::string gains = "coding gain:";
    bool monotone = true;
    double b8 = 0.0, previous = 0.0;
    std::optional<CodecSidecar> sidecar3;
    for (int bits = 8; bits >= 3; --bits)
    {
        const auto sidecar = fit_codec_on(params, fit, 3, 1e-2, bits);
        const auto eval = evaluate_codec(params, test, 3, 1e-2, &sidecar);
        const double db = eval.report.mean.db;
        detail += fmt("b=%d %.3f dB; ", bits, db);
        gains += fmt(" b=%d %.2f%%", bits, 100.0 * eval.report.rates.coding_gain.value_or(0.0));
        if (bits == 8)
            b8 = db;
        else if (db < previous - quantization_slack_db)
            monotone = false;
        previous = db;
        if (bits == 3)
            sidecar3 = sidecar;
    }
    verdict(7, std::abs(b8 - unquantized) <= quantization_gap_db && monotone, detail);
    std::printf("  info: %s\n", gains.c_str());

    // 8: entropy-coded vs raw-packed streams of the same symbols at b = 3.
    const CoordinateGrid grid(run.dataset.rows(), run.dataset.cols());
    double payload = 0.0;
    std::size_t mismatches = 0, coded = 0;
    for (const auto &H : test)
    {
        const Eigen::MatrixXcf original = H * static_cast<float>(run.dataset.scale);
        const auto stream = Bitstream::parse(encode_sample(params, original, 3, 1e-2, &*sidecar3).serialize());
        payload += static_cast<double>(stream.payload.bit_length);
        coded += stream.mode == PayloadMode::entropy_coded;
        const auto symbols = entropy_decode({stream.mode, stream.payload}, sidecar3->table, n);
        Bitstream raw = stream;
        raw.mode = PayloadMode::raw;
        raw.payload = pack_bits(symbols, 3);
        if (!(decode_sample(params, stream, grid, &*sidecar3) == decode_sample(params, raw, grid, &*sidecar3)))
            ++mismatches;
    }
    payload /= static_cast<double>(test.size());
    verdict(8, payload < n * 3.0 && mismatches == 0,
            fmt("b=3 mean payload %.2f bits vs n*b = %d, %zu/%zu streams entropy coded, %zu reconstruction mismatches",
                payload, n * 3, coded, test.size(), mismatches));
}

// 9 -----------------------------------------------------------------------------------------
struct Artifacts
{
    std::vector<std::uint8_t> dataset, checkpoint, bitstream;
    std::string train_log, sweep;
};

Artifacts small_pipeline()
{
    Artifacts a;
    const auto ds = generate_dataset(48, 99, SystemConfig::make(4, 6, 2));
    a.dataset = serialize_dataset(ds);
    const auto split = split_dataset(ds, 32, 8);
    ArchConfig arch;
    arch.hidden_dim = 12;
    arch.num_layers = 2;
    arch.codeword_dim = 4;
    TrainConfig cfg;
    cfg.batch_size = 8;
    cfg.max_epochs = 2;
    cfg.outer_lr = 1e-4;
    cfg.seed = 5;
    cfg.modulation_init = desk_modulation_init;
    const auto result = train(split.train, split.validation, arch, cfg, ds.scale);
    a.checkpoint = serialize_checkpoint(result.params);
    a.train_log = result.log.to_csv();
    const auto sidecar = fit_codec_on(result.params, split.train, 3, 1e-2, 3);
    const Eigen::MatrixXcf H = ds.samples[44] * static_cast<float>(ds.scale);
    a.bitstream = encode_sample(result.params, H, 3, 1e-2, &sidecar).serialize();

    SweepSpec spec;
    spec.dataset = "in-memory";
    spec.codeword_dims = {4};
    spec.bits = {std::nullopt, 3, 6};
    spec.inner_steps = {1, 3};
    spec.fit_count = 32;
    spec.test_offset = 40;
    spec.test_count = 8;
    a.sweep = sweep_csv(rd_sweep(spec, ds, {{4, result.params}}));
    return a;
}

void determinism()
{
    const auto first = small_pipeline();
    const auto second = small_pipeline();
    std::string detail;
    const auto same = [&](const char *name, bool equal) {
        detail += fmt("%s %s; ", name, equal ? "identical" : "DIFFER");
        return equal;
    };
    bool pass = same("dataset", first.dataset == second.dataset);
    pass = same("checkpoint", first.checkpoint == second.checkpoint) && pass;
    pass = same("bitstream", first.bitstream == second.bitstream) && pass;
    pass = same("training log", first.train_log == second.train_log) && pass;
    pass = same("sweep CSV", first.sweep == second.sweep) && pass;
    verdict(9, pass, detail);
}

} // namespace

int main(int argc, char **argv)
{
    int epochs = desk_epochs;
    int only = 0;
    for (int i = 1; i + 1 < argc; i += 2)
    {
        if (std::strcmp(argv[i], "--epochs") == 0)
            epochs = std::atoi(argv[i + 1]);
        else if (std::strcmp(argv[i], "--only") == 0)
            only = std::atoi(argv[i + 1]);
    }
    const auto selected = [&](int id) { return only == 0 || only == id; };
    try
    {
        if (selected(1))
            channel_equivalence();
        if (selected(2))
            gradient_correctness();
        if (selected(3))
            codec_exactness();
        if (selected(4))
            table_identity();
        if (only == 0 || (only >= 5 && only <= 8))
        {
            std::printf("desk training: %d epochs max\n", epochs);
            const auto run = desk_training(epochs);
            const auto split = split_dataset(run.dataset, desk_train, desk_val);
            if (selected(5))
                training_efficacy(run);
            if (selected(6))
                inner_step_trend(run, split.test);
            if (selected(7) || selected(8))
                quantization_trends(run, split.train, split.test);
        }
        if (selected(9))
            determinism();
    }
    catch (const std::exception &e)
    {
        std::printf("acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
