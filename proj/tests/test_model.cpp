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
#include "csiinr/diff_engine.hpp"
#include "csiinr/metrics.hpp"
#include "csiinr/model.hpp"

#include <cmath>
#include <random>

using namespace csiinr;

namespace
{

ArchConfig desk_arch()
{
    ArchConfig a;
    a.hidden_dim = 64;
    a.num_layers = 5;
    a.codeword_dim = 16;
    return a;
}

// Plain SIREN stack with Fourier features and no modulation at all.
Matrix<double> unmodulated_stack(const ModelParams<double> &p, const Matrix<double> &x)
{
    const Matrix<double> proj = 2.0 * M_PI * (p.fourier * x);
    Matrix<double> F(2 * p.arch.hidden_dim, x.cols());
    F << proj.array().cos().matrix(), proj.array().sin().matrix();
    for (const auto &layer : p.net.layers)
    {
        const Matrix<double> E = (layer.weight * F).colwise() + layer.bias;
        F = (p.arch.omega0 * E.array()).sin().matrix();
    }
    return (p.net.out_weight * F).colwise() + p.net.out_bias;
}

} // namespace

TEST_CASE("init is deterministic and has the documented structure")
{
    const auto arch = desk_arch();
    const auto a = init_params(7, arch), b = init_params(7, arch), c = init_params(8, arch);
    CHECK(serialize_checkpoint(a) == serialize_checkpoint(b));
    CHECK(serialize_checkpoint(a) != serialize_checkpoint(c));

    const double d = arch.hidden_dim;
    REQUIRE(a.net.layers.size() == 5);
    CHECK(a.fourier.rows() == 64);
    CHECK(a.fourier.cols() == 2);
    for (std::size_t i = 0; i < a.net.layers.size(); ++i)
    {
        const auto &l = a.net.layers[i];
        const double fan_in = i == 0 ? 2 * d : d;
        CHECK(l.weight.rows() == 64);
        CHECK(l.weight.cols() == fan_in);
        CHECK(l.scale_weight.cols() == 16);
        CHECK(l.shift_weight.cols() == 16);
        const double bound = i == 0 ? 1.0 / fan_in : std::sqrt(6.0 / fan_in) / arch.omega0;
        CHECK(l.weight.cwiseAbs().maxCoeff() <= bound);
        CHECK(l.bias.isZero(0.0));
        CHECK(l.scale_bias.isOnes(0.0));
        CHECK(l.shift_bias.isZero(0.0));
    }
    CHECK(a.net.out_weight.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / d) / arch.omega0);
    CHECK(a.net.out_bias.isZero(0.0));
}

TEST_CASE("Fourier matrix entries have standard deviation sigma_b")
{
    ArchConfig arch;
    arch.hidden_dim = 512;
    arch.num_layers = 1;
    arch.codeword_dim = 4;
    for (double sigma : {1.0, 10.0})
    {
        arch.fourier_scale = sigma;
        const auto p = init_params(3, arch);
        const Eigen::ArrayXd v = p.fourier.cast<double>().reshaped().array();
        const double sd = std::sqrt((v - v.mean()).square().sum() / (v.size() - 1));
        CHECK(std::abs(sd - sigma) < 0.1 * sigma);
    }
}

TEST_CASE("zero codeword reproduces the unmodulated SIREN stack exactly")
{
    auto arch = desk_arch();
    arch.num_layers = 3;
    const auto p = init_params(21, arch, 0.3).cast<double>();
    const Matrix<double> x = CoordinateGrid(5, 7).points<double>();
    const Matrix<double> out = predict(p, Vector<double>(Vector<double>::Zero(16)), x);
    CHECK(out == unmodulated_stack(p, x));
}

TEST_CASE("parameter count and checkpoint size follow the layer shapes")
{
    const auto arch = desk_arch();
    const auto p = init_params(1, arch);
    std::size_t from_shapes = p.fourier.size();
    for_each_block([&](const auto &block) { from_shapes += block.size(); }, p.net);
    // d_h*2 + (2d_h*d_h + d_h) + 4*(d_h^2 + d_h) + 5*2*(d_h*n + d_h) + 2*d_h + 2
    const std::size_t closed_form = 128 + (8192 + 64) + 4 * (4096 + 64) + 10 * (1024 + 64) + 128 + 2;
    CHECK(from_shapes == closed_form);
    CHECK(parameter_count(arch) == closed_form);
    CHECK(serialize_checkpoint(p).size() == checkpoint_header_bytes + 4 * closed_form);
    CHECK(checkpoint_header_bytes == 44);
}

TEST_CASE("checkpoint round trip is bitwise and corruption is detected")
{
    auto p = init_params(5, desk_arch(), 0.05);
    p.channel_scale = 3.25;
    const auto bytes = serialize_checkpoint(p);
    const auto back = deserialize_checkpoint(bytes);
    CHECK(serialize_checkpoint(back) == bytes);
    CHECK(back.channel_scale == 3.25);
    CHECK(back.arch.omega0 == p.arch.omega0);
    CHECK(back.fourier == p.fourier);
    CHECK(back.net.layers[2].shift_weight == p.net.layers[2].shift_weight);

    auto truncated = bytes;
    truncated.pop_back();
    CHECK_THROWS_AS(deserialize_checkpoint(truncated), FormatError);
    auto longer = bytes;
    longer.push_back(0);
    CHECK_THROWS_AS(deserialize_checkpoint(longer), FormatError);
    auto bad_magic = bytes;
    bad_magic[1] = 'X';
    CHECK_THROWS_AS(deserialize_checkpoint(bad_magic), FormatError);
    auto bad_version = bytes;
    bad_version[4] = 99;
    CHECK_THROWS_AS(deserialize_checkpoint(bad_version), FormatError);
    CHECK_THROWS_AS(deserialize_checkpoint(std::span<const std::uint8_t>(bytes.data(), 10)), FormatError);
}

TEST_CASE("coordinate grid is a bijection onto [-1, 1]^2")
{
    for (auto [rows, cols] : {std::pair{16, 16}, std::pair{1, 5}, std::pair{7, 1}, std::pair{3, 32}})
    {
        const CoordinateGrid g(rows, cols);
        const auto X = g.points<double>();
        REQUIRE(X.cols() == rows * cols);
        CHECK(X.cwiseAbs().maxCoeff() <= 1.0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
            {
                const auto [x, y] = g.normalized(r, c);
                CHECK(X(0, r * cols + c) == x);
                CHECK(X(1, r * cols + c) == y);
                CHECK(g.index_of(x, y) == std::pair{r, c});
            }
        if (rows == 1)
            CHECK(g.normalized(0, 0).first == 0.0);
        if (rows > 1)
        {
            CHECK(g.normalized(0, 0).first == -1.0);
            CHECK(g.normalized(rows - 1, 0).first == 1.0);
        }
    }
    CHECK_THROWS_AS(CoordinateGrid(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(CoordinateGrid(2, 2).normalized(2, 0), std::out_of_range);
}

TEST_CASE("plane conversion round trips in row-major order")
{
    Eigen::MatrixXcd H(2, 3);
    H << std::complex<double>(1, 2), std::complex<double>(3, 4), std::complex<double>(5, 6),
        std::complex<double>(7, 8), std::complex<double>(9, 10), std::complex<double>(11, 12);
    const auto P = to_planes<double>(H);
    CHECK(P(0, 1) == 3.0);
    CHECK(P(1, 3) == 8.0);
    CHECK(from_planes<double>(P, 2, 3) == H);
}

TEST_CASE("reconstruction scales by s_norm and its NMSE does not")
{
    const auto p = init_params(9, desk_arch(), 0.2).cast<double>();
    const CoordinateGrid grid(16, 16);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal(0.0, 0.1);
    Vector<double> M(16);
    for (auto &m : M)
        m = normal(rng);

    const auto H1 = reconstruct(p, M, grid, 1.0);
    CHECK(H1.rows() == 16);
    CHECK(H1.cols() == 16);
    CHECK(H1 == from_planes<double>(predict(p, M, grid.points<double>()), 16, 16));

    Eigen::MatrixXcd target(16, 16);
    for (auto &h : target.reshaped())
        h = {normal(rng), normal(rng)};
    const auto H37 = reconstruct(p, M, grid, 3.7);
    CHECK((H37 - 3.7 * H1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(nmse(target, H1).linear - nmse(3.7 * target, H37).linear) < 1e-10);
}

TEST_CASE("invalid architectures are rejected")
{
    ArchConfig a;
    a.hidden_dim = 0;
    CHECK_THROWS_AS(init_params(0, a), std::invalid_argument);
    a = ArchConfig{};
    a.omega0 = -1.0;
    CHECK_THROWS_AS(a.validate(), std::invalid_argument);
}
