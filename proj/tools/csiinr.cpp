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

// Command-line front end: dataset generation, training, codec fitting, encode/decode, evaluation
// and rate-distortion sweeps. Every subcommand accepts --seed and --config (key = value lines whose
// keys are long option names) and prints a fingerprint of its resolved configuration.

#include "csiinr/dataset.hpp"
#include "csiinr/diff_engine.hpp"
#include "csiinr/feedback.hpp"
#include "csiinr/kv_config.hpp"
#include "csiinr/meta_train.hpp"
#include "csiinr/metrics.hpp"
#include "csiinr/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace csiinr;

namespace
{

std::string long_name(const CLI::Option *opt)
{
    const auto &names = opt->get_lnames();
    return names.empty() ? opt->get_name() : names.front();
}

// Fills options left unset on the command line from a key = value file. Keys may use '-' or '_'.
void apply_config(CLI::App *sub, const std::string &path)
{
    const auto cfg = KeyValueConfig::load(path);
    for (CLI::Option *opt : sub->get_options())
    {
        const std::string name = long_name(opt);
        if (name == "help" || name == "config" || opt->count() > 0)
            continue;
        std::string alt = name;
        std::replace(alt.begin(), alt.end(), '-', '_');
        auto value = cfg.get(name);
        if (!value)
            value = cfg.get(alt);
        if (!value)
            continue;
        if (opt->get_type_size_max() == 0) // flag
        {
            if (*value == "true" || *value == "1")
                opt->add_result("true");
        }
        else
            for (const auto &item : opt->get_expected_max() > 1 ? split(*value, ',') : std::vector<std::string>{*value})
                opt->add_result(trim(item));
        opt->run_callback();
    }
}

// Required options live in their own help group so that a config file may supply them.
void check_required(CLI::App *sub)
{
    for (CLI::Option *opt : sub->get_options())
        if (opt->get_group() == "Required" && opt->count() == 0)
            throw std::invalid_argument("--" + long_name(opt) + " is required (command line or --config)");
}

std::string config_fingerprint(const CLI::App *sub)
{
    std::ostringstream canon;
    canon << sub->get_name();
    for (const CLI::Option *opt : sub->get_options())
    {
        const std::string name = long_name(opt);
        if (name == "help" || name == "config")
            continue;
        canon << ';' << name << '=';
        if (opt->count() > 0)
            for (const auto &r : opt->results())
                canon << r << ',';
        else
            canon << opt->get_default_str();
    }
    return fingerprint(canon.str());
}

struct ArchFlags
{
    ArchConfig arch;

    void add(CLI::App *sub)
    {
        sub->add_option("--hidden-dim", arch.hidden_dim, "Hidden width d_h");
        sub->add_option("--layers", arch.num_layers, "Number of modulated SIREN layers L_t");
        sub->add_option("--codeword-dim", arch.codeword_dim, "Codeword length n");
        sub->add_option("--omega0", arch.omega0, "Sinusoid frequency factor");
        sub->add_option("--fourier-scale", arch.fourier_scale, "Standard deviation of the Fourier matrix");
    }
};

Eigen::MatrixXcf original_domain(const Dataset &ds, std::size_t index)
{
    if (index >= ds.size())
        throw std::out_of_range("sample index " + std::to_string(index) + " out of range (dataset has " +
                                std::to_string(ds.size()) + ")");
    return ds.samples[index] * static_cast<float>(ds.scale);
}

std::span<const Eigen::MatrixXcf> slice(const Dataset &ds, std::size_t offset, std::size_t count)
{
    if (offset > ds.size())
        throw std::out_of_range("offset beyond dataset");
    if (count == 0)
        count = ds.size() - offset;
    if (offset + count > ds.size())
        throw std::out_of_range("range beyond dataset");
    return std::span<const Eigen::MatrixXcf>(ds.samples).subspan(offset, count);
}

void write_text(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"csi-inr: implicit neural representation codec for MIMO-OFDM channel feedback"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    std::uint64_t seed = 0;
    std::string config_path;
    std::vector<std::pair<CLI::App *, std::function<int()>>> commands;
    const auto command = [&](const std::string &name, const std::string &help) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--config", config_path, "Key-value config file for options not given on the command line");
        return sub;
    };

    // gen-data
    std::size_t count = 0;
    int antennas = 32, subcarriers = 32, paths = 10;
    double f0 = 3.5e9, bandwidth = 100e6;
    SamplingSpec sampling;
    bool wideband = false;
    std::string out_path;
    {
        auto *sub = command("gen-data", "Synthesize a multipath channel dataset");
        sub->add_option("--count", count, "Number of channel matrices")->group("Required");
        sub->add_option("--antennas", antennas, "Transmit antennas N_t");
        sub->add_option("--subcarriers", subcarriers, "Subcarriers N_c");
        sub->add_option("--paths", paths, "Paths per channel P");
        sub->add_option("--f0", f0, "Base carrier frequency [Hz]");
        sub->add_option("--bandwidth", bandwidth, "Total bandwidth [Hz]");
        sub->add_option("--max-delay", sampling.max_delay, "Largest path delay [s]");
        sub->add_flag("--wideband", wideband, "Evaluate steering vectors at each subcarrier frequency");
        sub->add_option("--out", out_path, "Output dataset file")->group("Required");
        commands.emplace_back(sub, [&] {
            auto cfg = SystemConfig::make(antennas, subcarriers, paths, f0, bandwidth);
            cfg.wideband_steering = wideband;
            const auto ds = generate_dataset(count, seed, cfg, sampling);
            save_dataset(ds, out_path);
            std::printf("wrote %zu samples (%d x %d, scale %.6g) to %s\n", ds.size(), ds.rows(), ds.cols(), ds.scale,
                        out_path.c_str());
            return 0;
        });
    }

    // train
    ArchFlags arch_flags;
    TrainConfig train_cfg;
    std::string dataset_path, log_path;
    std::size_t train_count = 0, val_count = 0;
    {
        auto *sub = command("train", "Meta-train the shared base network");
        sub->add_option("--dataset", dataset_path, "Dataset file")->group("Required");
        sub->add_option("--train-count", train_count, "Training samples taken from the front (0: all but validation)");
        sub->add_option("--val-count", val_count, "Validation samples following the training split (0: one tenth)");
        arch_flags.add(sub);
        sub->add_option("--inner-steps", train_cfg.inner_steps, "Inner gradient steps s");
        sub->add_option("--inner-lr", train_cfg.inner_lr, "Inner learning rate");
        sub->add_option("--outer-lr", train_cfg.outer_lr, "Outer (Adam) learning rate");
        sub->add_option("--batch", train_cfg.batch_size, "Batch size");
        sub->add_option("--epochs", train_cfg.max_epochs, "Maximum epochs");
        sub->add_option("--patience", train_cfg.patience, "Early-stopping patience in epochs");
        sub->add_option("--grad-clip", train_cfg.grad_clip, "Global-norm clip of the outer gradient (0: off)");
        sub->add_option("--modulation-init", train_cfg.modulation_init, "Init range of the modulation weights");
        sub->add_option("--out", out_path, "Output checkpoint")->group("Required");
        sub->add_option("--log", log_path, "Training log CSV (default: <out>.log.csv)");
        commands.emplace_back(sub, [&] {
            const auto ds = load_dataset(dataset_path);
            const std::size_t val = val_count ? val_count : std::max<std::size_t>(1, ds.size() / 10);
            if (val >= ds.size())
                throw std::invalid_argument("validation split leaves no training data");
            const std::size_t trn = train_count ? train_count : ds.size() - val;
            const auto splits = split_dataset(ds, trn, val);
            train_cfg.seed = seed;
            train_cfg.on_epoch = [](const TrainLog::Epoch &e) {
                std::printf("epoch %4d  step %8lld  val NMSE %8.3f dB  %.1fs\n", e.epoch, static_cast<long long>(e.step),
                            e.val_nmse_db, e.wall_seconds);
                std::fflush(stdout);
            };
            const auto result = train(splits.train, splits.validation, arch_flags.arch, train_cfg, ds.scale);
            save_checkpoint(result.params, out_path);
            write_text(log_path.empty() ? out_path + ".log.csv" : log_path, result.log.to_csv());
            std::printf("best epoch %d, checkpoint %s\n", result.best_epoch, out_path.c_str());
            return 0;
        });
    }

    // fit-codec
    std::string checkpoint_path, sidecar_path;
    int bits = 8, inner_steps = 3;
    double inner_lr = 1e-2;
    std::size_t offset = 0;
    {
        auto *sub = command("fit-codec", "Fit quantizer bounds and the frequency table");
        sub->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->group("Required");
        sub->add_option("--dataset", dataset_path, "Dataset file")->group("Required");
        sub->add_option("--bits", bits, "Bits per codeword entry")->check(CLI::Range(1, 16));
        sub->add_option("--inner-steps", inner_steps, "Inner steps used to produce codewords");
        sub->add_option("--inner-lr", inner_lr, "Inner learning rate");
        sub->add_option("--offset", offset, "First sample used for fitting");
        sub->add_option("--count", count, "Samples used for fitting (0: to the end)");
        sub->add_option("--out", out_path, "Output sidecar")->group("Required");
        commands.emplace_back(sub, [&] {
            const auto params = load_checkpoint(checkpoint_path);
            const auto ds = load_dataset(dataset_path);
            const auto sidecar = fit_codec_on(params, slice(ds, offset, count), inner_steps, inner_lr, bits);
            save_sidecar(sidecar, out_path);
            std::printf("sidecar %s: n=%d b=%d hash %016llx\n", out_path.c_str(), sidecar.quantizer.dims(), bits,
                        static_cast<unsigned long long>(sidecar.hash()));
            return 0;
        });
    }

    // encode
    std::size_t index = 0;
    std::string stream_path;
    {
        auto *sub = command("encode", "Encode one channel matrix into a bitstream");
        sub->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->group("Required");
        sub->add_option("--sidecar", sidecar_path, "Codec sidecar (omit for unquantized codewords)");
        sub->add_option("--dataset", dataset_path, "Dataset or single-sample file")->group("Required");
        sub->add_option("--index", index, "Sample index");
        sub->add_option("--inner-steps", inner_steps, "Inner steps s_in");
        sub->add_option("--inner-lr", inner_lr, "Inner learning rate");
        sub->add_option("--out", stream_path, "Output bitstream")->group("Required");
        commands.emplace_back(sub, [&] {
            const auto params = load_checkpoint(checkpoint_path);
            const auto ds = load_dataset(dataset_path);
            std::optional<CodecSidecar> sidecar;
            if (!sidecar_path.empty())
                sidecar = load_sidecar(sidecar_path);
            const auto stream =
                encode_sample(params, original_domain(ds, index), inner_steps, inner_lr, sidecar ? &*sidecar : nullptr);
            const auto bytes = stream.serialize();
            write_file(stream_path, bytes);
            std::printf("payload %zu bits, stream %zu bytes\n", stream.payload.bit_length, bytes.size());
            return 0;
        });
    }

    // decode
    {
        auto *sub = command("decode", "Reconstruct a channel matrix from a bitstream");
        sub->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->group("Required");
        sub->add_option("--sidecar", sidecar_path, "Codec sidecar (omit for unquantized codewords)");
        sub->add_option("--stream", stream_path, "Input bitstream")->group("Required");
        sub->add_option("--antennas", antennas, "Rows of the reconstructed matrix");
        sub->add_option("--subcarriers", subcarriers, "Columns of the reconstructed matrix");
        sub->add_option("--dataset", dataset_path, "Optional reference dataset for an NMSE report");
        sub->add_option("--index", index, "Reference sample index");
        sub->add_option("--out", out_path, "Output CSV (antenna,subcarrier,re,im)")->group("Required");
        commands.emplace_back(sub, [&] {
            const auto params = load_checkpoint(checkpoint_path);
            std::optional<CodecSidecar> sidecar;
            if (!sidecar_path.empty())
                sidecar = load_sidecar(sidecar_path);
            const auto stream = Bitstream::parse(read_file(stream_path));
            const auto H = decode_sample(params, stream, CoordinateGrid(antennas, subcarriers), sidecar ? &*sidecar : nullptr);
            std::ostringstream csv;
            csv << "antenna,subcarrier,re,im\n";
            for (Eigen::Index r = 0; r < H.rows(); ++r)
                for (Eigen::Index c = 0; c < H.cols(); ++c)
                    csv << r << ',' << c << ',' << format_number(H(r, c).real()) << ','
                        << format_number(H(r, c).imag()) << '\n';
            write_text(out_path, csv.str());
            if (!dataset_path.empty())
            {
                const auto ds = load_dataset(dataset_path);
                std::printf("NMSE %.3f dB\n", nmse(original_domain(ds, index), H).db);
            }
            return 0;
        });
    }

    // eval
    {
        auto *sub = command("eval", "Evaluate NMSE and rates on a dataset range");
        sub->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->group("Required");
        sub->add_option("--dataset", dataset_path, "Dataset file")->group("Required");
        sub->add_option("--sidecar", sidecar_path, "Codec sidecar (omit for unquantized codewords)");
        sub->add_option("--inner-steps", inner_steps, "Inner steps s_in");
        sub->add_option("--inner-lr", inner_lr, "Inner learning rate");
        sub->add_option("--offset", offset, "First evaluated sample");
        sub->add_option("--count", count, "Evaluated samples (0: to the end)");
        sub->add_option("--out", out_path, "Per-sample CSV (index,nmse_linear,nmse_db)");
        commands.emplace_back(sub, [&] {
            const auto params = load_checkpoint(checkpoint_path);
            const auto ds = load_dataset(dataset_path);
            std::optional<CodecSidecar> sidecar;
            if (!sidecar_path.empty())
                sidecar = load_sidecar(sidecar_path);
            const auto eval =
                evaluate_codec(params, slice(ds, offset, count), inner_steps, inner_lr, sidecar ? &*sidecar : nullptr);
            const auto &r = eval.report;
            std::printf("NMSE %s dB (%.6g linear) over %zu samples\n", format_number(r.mean.db).c_str(), r.mean.linear,
                        r.per_sample_nmse.size());
            std::printf("bits/sample %.3f (raw %.0f), bit rate %.6g, CR %.6g", r.coded_bits_per_sample,
                        r.raw_bits_per_sample, r.rates.bit_rate, r.rates.compression_ratio);
            if (r.rates.coding_gain)
                std::printf(", coding gain %.2f%%", 100.0 * *r.rates.coding_gain);
            std::printf("\n");
            if (!out_path.empty())
            {
                std::ostringstream csv;
                csv << "index,nmse_linear,nmse_db\n";
                for (std::size_t i = 0; i < r.per_sample_nmse.size(); ++i)
                    csv << offset + i << ',' << format_number(r.per_sample_nmse[i]) << ','
                        << format_number(to_db(r.per_sample_nmse[i])) << '\n';
                write_text(out_path, csv.str());
            }
            return 0;
        });
    }

    // sweep
    std::string spec_path;
    {
        auto *sub = command("sweep", "Rate-distortion sweep over (n, b, s_in)");
        sub->add_option("--spec", spec_path, "Sweep spec (key = value)")->group("Required");
        sub->add_option("--out", out_path, "Output CSV (overrides the output key of the sweep file)");
        commands.emplace_back(sub, [&] {
            auto spec = SweepSpec::from_config(KeyValueConfig::load(spec_path));
            if (!out_path.empty())
                spec.output = out_path;
            const auto csv = sweep_csv(rd_sweep(spec));
            if (spec.output.empty())
                std::cout << csv;
            else
                write_text(spec.output, csv);
            return 0;
        });
    }

    // baseline-svd
    int svd_dim = 32;
    std::size_t test_offset = 0, test_count = 0;
    {
        auto *sub = command("baseline-svd", "Truncated-SVD linear baseline at equal codeword length");
        sub->add_option("--dataset", dataset_path, "Dataset file")->group("Required");
        sub->add_option("--n", svd_dim, "Retained coefficients");
        sub->add_option("--train-count", train_count, "Samples used to learn the basis (from the front)")->group("Required");
        sub->add_option("--test-offset", test_offset, "First test sample (0: right after training)");
        sub->add_option("--test-count", test_count, "Test samples (0: to the end)");
        commands.emplace_back(sub, [&] {
            const auto ds = load_dataset(dataset_path);
            const auto train_span = slice(ds, 0, train_count);
            const auto test_span = slice(ds, test_offset ? test_offset : train_count, test_count);
            const auto report = svd_baseline(train_span, test_span, svd_dim);
            std::printf("SVD baseline n=%d: NMSE %s dB over %zu samples, CR %.6g\n", svd_dim,
                        format_number(report.mean.db).c_str(), report.per_sample_nmse.size(),
                        report.rates.compression_ratio);
            return 0;
        });
    }

    // gradcheck
    ArchFlags grad_arch;
    grad_arch.arch.hidden_dim = 32;
    grad_arch.arch.num_layers = 3;
    grad_arch.arch.codeword_dim = 8;
    int coords = 8;
    double step = 1e-5, tolerance = 1e-4, modulation_init = 0.1;
    {
        auto *sub = command("gradcheck", "Compare analytic gradients with finite differences");
        grad_arch.add(sub);
        sub->add_option("--coords", coords, "Random coordinates in the probe");
        sub->add_option("--step", step, "Finite-difference step h");
        sub->add_option("--tolerance", tolerance, "Largest accepted relative error");
        sub->add_option("--modulation-init", modulation_init, "Init range of the modulation weights");
        commands.emplace_back(sub, [&] {
            const auto params = init_params(seed, grad_arch.arch, modulation_init).cast<double>();
            std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
            std::uniform_real_distribution<double> coord(-1.0, 1.0);
            std::normal_distribution<double> normal;
            Vector<double> codeword(grad_arch.arch.codeword_dim);
            for (auto &m : codeword)
                m = 0.3 * normal(rng);
            Matrix<double> x(2, coords), t(2, coords);
            for (auto &v : x.reshaped())
                v = coord(rng);
            for (auto &v : t.reshaped())
                v = 0.5 * normal(rng);
            const auto report = finite_diff_check(params, codeword, x, t, step);
            for (const auto &b : report.blocks)
                std::printf("%-22s %10.3e  (%zu entries)\n", b.name.c_str(), b.max_rel_error, b.entries);
            const bool ok = report.max_rel_error() < tolerance;
            std::printf("max relative error %.3e: %s\n", report.max_rel_error(), ok ? "ok" : "FAILED");
            return ok ? 0 : 1;
        });
    }

    try
    {
        app.parse(argc, argv);
        for (auto &[sub, run] : commands)
            if (sub->parsed())
            {
                if (!config_path.empty())
                    apply_config(sub, config_path);
                check_required(sub);
                std::printf("config fingerprint %s\n", config_fingerprint(sub).c_str());
                return run();
            }
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
