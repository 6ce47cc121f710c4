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

#include "catch_amalgamated.hpp"

#include "csiinr/binary_io.hpp"
#include "csiinr/channel.hpp"
#include "csiinr/dataset.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace csiinr;
using cd = std::complex<double>;

namespace
{

// Direct per-path summation, written from the physical model without any library helper.
cd brute_force_entry(int n, int m, const PathSet &paths, const SystemConfig &cfg, bool wideband)
{
    const double f = cfg.base_frequency + m * cfg.subcarrier_spacing;
    const double f_array = wideband ? f : cfg.base_frequency;
    const double chi = 2.0 * M_PI * cfg.antenna_spacing * f_array / cfg.light_speed;
    cd h = 0.0;
    for (const auto &p : paths)
        h += p.gain * std::exp(cd(0.0, -2.0 * M_PI * f * p.delay + p.phase)) * std::exp(cd(0.0, -chi * n * std::sin(p.aod)));
    return h;
}

PathSet random_paths(std::mt19937_64 &rng, int count)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PathSet paths(count);
    for (auto &p : paths)
        p = {u(rng), 1e-6 * u(rng), 2.0 * M_PI * u(rng), M_PI * (u(rng) - 0.5)};
    return paths;
}

SystemConfig random_config(std::mt19937_64 &rng, int max_dim, int max_paths)
{
    std::uniform_int_distribution<int> dim(1, max_dim), npaths(1, max_paths);
    std::uniform_real_distribution<double> f0(1e9, 6e9), bw(10e6, 200e6);
    return SystemConfig::make(dim(rng), dim(rng), npaths(rng), f0(rng), bw(rng));
}

} // namespace

TEST_CASE("steering vector has unit-modulus entries and the half-wavelength phase progression")
{
    const auto cfg = SystemConfig::make(16, 4, 1);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-M_PI / 2, M_PI / 2);
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto a = steering_vector(angle(rng), cfg.base_frequency, cfg);
        REQUIRE(a.size() == 16);
        for (Eigen::Index k = 0; k < a.size(); ++k)
            CHECK(std::abs(std::abs(a[k]) - 1.0) < 1e-14);
    }
    const auto broadside = steering_vector(0.0, cfg.base_frequency, cfg);
    CHECK((broadside - Eigen::VectorXcd::Ones(16)).norm() < 1e-15);
    // d = lambda/2 and theta = pi/2: adjacent antennas differ by exactly pi.
    const auto endfire = steering_vector(M_PI / 2, cfg.base_frequency, cfg);
    CHECK(std::abs(endfire[1] - cd(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(endfire[2] - cd(1.0, 0.0)) < 1e-12);
}

TEST_CASE("channel matrix matches brute-force per-path summation")
{
    std::mt19937_64 rng(11);
    for (bool wideband : {false, true})
        for (int trial = 0; trial < 40; ++trial)
        {
            auto cfg = random_config(rng, 8, 5);
            cfg.wideband_steering = wideband;
            const auto paths = random_paths(rng, cfg.num_paths);
            const auto H = channel_matrix(paths, cfg);
            REQUIRE(H.rows() == cfg.num_antennas);
            REQUIRE(H.cols() == cfg.num_subcarriers);
            for (int n = 0; n < cfg.num_antennas; ++n)
                for (int m = 0; m < cfg.num_subcarriers; ++m)
                    CHECK(std::abs(H(n, m) - brute_force_entry(n, m, paths, cfg, wideband)) < 1e-9);
        }
}

TEST_CASE("channel_element agrees with channel_matrix entrywise")
{
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto cfg = random_config(rng, 8, 5);
        const auto paths = random_paths(rng, cfg.num_paths);
        const auto H = channel_matrix(paths, cfg);
        for (int n = 0; n < cfg.num_antennas; ++n)
            for (int m = 0; m < cfg.num_subcarriers; ++m)
                worst = std::max(worst, std::abs(H(n, m) - channel_element(n, m, paths, cfg)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("channel matrix examples")
{
    std::mt19937_64 rng(5);
    const auto paths = random_paths(rng, 4);

    SECTION("a single subcarrier is the channel vector at f0")
    {
        const auto cfg = SystemConfig::make(6, 1, 4);
        const auto H = channel_matrix(paths, cfg);
        REQUIRE(H.cols() == 1);
        CHECK((H.col(0) - channel_vector(cfg.base_frequency, paths, cfg)).norm() < 1e-12);
    }
    SECTION("one unit-gain path gives unit-modulus entries")
    {
        const auto cfg = SystemConfig::make(8, 8, 1);
        PathSet one{{1.0, 3.3e-7, 1.2, 0.4}};
        const auto H = channel_matrix(one, cfg);
        CHECK((H.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
    SECTION("first antenna and first subcarrier carry the summed complex gains")
    {
        const auto cfg = SystemConfig::make(4, 4, 4);
        // Extended precision keeps the oracle's own phase error (|2 pi f tau| ~ 1e4 rad) well below the tolerance.
        std::complex<long double> sum = 0.0L;
        for (const auto &p : paths)
        {
            const long double cycles = static_cast<long double>(cfg.base_frequency) * p.delay;
            const long double phase = -2.0L * 3.14159265358979323846264338327950288L * (cycles - std::floor(cycles)) + p.phase;
            sum += static_cast<long double>(p.gain) * std::complex<long double>(std::cos(phase), std::sin(phase));
        }
        const cd expected(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
        CHECK(std::abs(channel_element(0, 0, paths, cfg) - expected) < 1e-12);
    }
    SECTION("out-of-range indices are rejected")
    {
        const auto cfg = SystemConfig::make(4, 4, 4);
        CHECK_THROWS_AS(channel_element(4, 0, paths, cfg), std::out_of_range);
        CHECK_THROWS_AS(channel_element(0, -1, paths, cfg), std::out_of_range);
    }
}

TEST_CASE("triangle bound and linearity in paths")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto cfg = random_config(rng, 8, 5);
        const auto a = random_paths(rng, 3), b = random_paths(rng, 2);
        PathSet both = a;
        both.insert(both.end(), b.begin(), b.end());
        const auto Ha = channel_matrix(a, cfg), Hb = channel_matrix(b, cfg), Hab = channel_matrix(both, cfg);
        CHECK((Hab - Ha - Hb).cwiseAbs().maxCoeff() < 1e-12);
        double gain_sum = 0.0;
        for (const auto &p : both)
            gain_sum += p.gain;
        CHECK(Hab.cwiseAbs().maxCoeff() <= gain_sum + 1e-12);
    }
}

TEST_CASE("invalid configurations and paths are rejected")
{
    auto cfg = SystemConfig::make(4, 4, 2);
    cfg.num_antennas = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(validate_paths({{-1.0, 0.0, 0.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_paths({{1.0, 0.0, 0.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("path sampling follows the default distribution")
{
    std::mt19937_64 rng(9);
    const SamplingSpec spec;
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto paths = sample_paths(rng, 3, spec);
        double energy = 0.0;
        for (const auto &p : paths)
        {
            energy += p.gain * p.gain;
            CHECK(p.delay >= 0.0);
            CHECK(p.delay <= spec.max_delay);
            CHECK(p.phase >= 0.0);
            CHECK(p.phase < 2.0 * M_PI);
            CHECK(std::abs(p.aod) <= M_PI / 2);
        }
        CHECK(energy == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("dataset generation is normalized and deterministic")
{
    const auto cfg = SystemConfig::make(8, 8, 3);
    const auto a = generate_dataset(64, 42, cfg);
    const auto b = generate_dataset(64, 42, cfg);
    CHECK(serialize_dataset(a) == serialize_dataset(b));
    CHECK(serialize_dataset(a) != serialize_dataset(generate_dataset(64, 43, cfg)));

    double peak = 0.0;
    for (const auto &H : a.samples)
        peak = std::max({peak, static_cast<double>(H.real().cwiseAbs().maxCoeff()),
                         static_cast<double>(H.imag().cwiseAbs().maxCoeff())});
    CHECK(std::abs(peak - 1.0) < 1e-6);

    // Sample i depends only on (seed, i): a prefix of a larger set is the smaller set up to scale.
    const auto big = generate_dataset(128, 42, cfg);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(((big.samples[i].cast<std::complex<double>>() * big.scale) -
               (a.samples[i].cast<std::complex<double>>() * a.scale))
                  .cwiseAbs()
                  .maxCoeff() < 1e-5);
}

TEST_CASE("dataset mean entry magnitude matches an independent Monte-Carlo estimate")
{
    const auto cfg = SystemConfig::make(8, 8, 3);
    const auto ds = generate_dataset(4096, 1, cfg);
    double mean_dataset = 0.0;
    for (const auto &H : ds.samples)
        mean_dataset += H.cwiseAbs().cast<double>().mean();
    mean_dataset = mean_dataset / ds.size() * ds.scale;

    // Independent re-derivation: own RNG, own path draws, brute-force entries.
    std::mt19937_64 rng(987654321);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double mean_oracle = 0.0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t)
    {
        PathSet paths(3);
        double energy = 0.0;
        for (int p = 0; p < 3; ++p)
        {
            const double g = std::exp(-(p + 1) / 3.0) * (0.5 + 0.5 * u(rng));
            paths[p] = {g, 1e-6 * u(rng), 2.0 * M_PI * u(rng), M_PI * (u(rng) - 0.5)};
            energy += g * g;
        }
        for (auto &p : paths)
            p.gain /= std::sqrt(energy);
        double sum = 0.0;
        for (int n = 0; n < 8; ++n)
            for (int m = 0; m < 8; ++m)
                sum += std::abs(brute_force_entry(n, m, paths, cfg, false));
        mean_oracle += sum / 64.0;
    }
    mean_oracle /= trials;
    CHECK(std::abs(mean_dataset - mean_oracle) < 0.2 * mean_oracle);
}

TEST_CASE("dataset file round trip and corruption handling")
{
    const auto ds = generate_dataset(5, 8, SystemConfig::make(4, 6, 2));
    const auto bytes = serialize_dataset(ds);
    const auto back = deserialize_dataset(bytes);
    CHECK(serialize_dataset(back) == bytes);
    CHECK(back.scale == ds.scale);
    CHECK(back.seed == ds.seed);
    REQUIRE(back.size() == 5);
    CHECK(back.samples[3] == ds.samples[3]);

    auto truncated = bytes;
    truncated.resize(bytes.size() - 3);
    CHECK_THROWS_AS(deserialize_dataset(truncated), FormatError);
    auto bad_magic = bytes;
    bad_magic[0] ^= 0xFF;
    CHECK_THROWS_AS(deserialize_dataset(bad_magic), FormatError);
}

TEST_CASE("dataset splits are disjoint and ordered")
{
    const auto ds = generate_dataset(10, 8, SystemConfig::make(2, 2, 1));
    const auto s = split_dataset(ds, 6, 3);
    CHECK(s.train.size() == 6);
    CHECK(s.validation.size() == 3);
    CHECK(s.test.size() == 1);
    CHECK(s.validation.data() == ds.samples.data() + 6);
    CHECK_THROWS(split_dataset(ds, 8, 3));
}
