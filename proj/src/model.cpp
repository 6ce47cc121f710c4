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

#include "csiinr/model.hpp"

#include "csiinr/binary_io.hpp"
#include "csiinr/diff_engine.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace csiinr
{

namespace
{

constexpr std::uint32_t checkpoint_version = 1;

template <typename Scalar>
ModulatedLayer<Scalar> zero_layer(int hidden, int fan_in, int codeword)
{
    return {Matrix<Scalar>::Zero(hidden, fan_in), Vector<Scalar>::Zero(hidden), Matrix<Scalar>::Zero(hidden, codeword),
            Vector<Scalar>::Zero(hidden),        Matrix<Scalar>::Zero(hidden, codeword), Vector<Scalar>::Zero(hidden)};
}

template <typename Derived, typename Dist>
void fill(Eigen::MatrixBase<Derived> &m, Dist &dist, std::mt19937_64 &rng)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = static_cast<typename Derived::Scalar>(dist(rng));
}

void put_block(ByteWriter &w, const auto &m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            w.put<float>(m(r, c));
}

void get_block(ByteReader &r, auto &m)
{
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(i, c) = r.get<float>();
}

} // namespace

void ArchConfig::validate() const
{
    if (hidden_dim < 1 || num_layers < 1 || codeword_dim < 1)
        throw std::invalid_argument("ArchConfig: hidden_dim, num_layers and codeword_dim must be >= 1");
    if (!(omega0 > 0.0) || !(fourier_scale > 0.0) || !std::isfinite(omega0) || !std::isfinite(fourier_scale))
        throw std::invalid_argument("ArchConfig: omega0 and fourier_scale must be positive");
}

template <typename Scalar>
NetworkWeights<Scalar> NetworkWeights<Scalar>::zeros(const ArchConfig &arch)
{
    NetworkWeights<Scalar> w;
    for (int i = 0; i < arch.num_layers; ++i)
        w.layers.push_back(zero_layer<Scalar>(arch.hidden_dim, i == 0 ? 2 * arch.hidden_dim : arch.hidden_dim,
                                              arch.codeword_dim));
    w.out_weight = Matrix<Scalar>::Zero(2, arch.hidden_dim);
    w.out_bias = Vector<Scalar>::Zero(2);
    return w;
}

template struct NetworkWeights<float>;
template struct NetworkWeights<double>;

std::size_t parameter_count(const ArchConfig &arch)
{
    const std::size_t d = static_cast<std::size_t>(arch.hidden_dim);
    const std::size_t n = static_cast<std::size_t>(arch.codeword_dim);
    const std::size_t L = static_cast<std::size_t>(arch.num_layers);
    const std::size_t first = d * 2 * d + d;
    const std::size_t deeper = d * d + d;
    const std::size_t modulation = 2 * (d * n + d);
    return 2 * d + first + (L - 1) * deeper + L * modulation + 2 * d + 2;
}

ModelParams<float> init_params(std::uint64_t seed, const ArchConfig &arch, double modulation_init)
{
    arch.validate();
    if (!(modulation_init >= 0.0) || !std::isfinite(modulation_init))
        throw std::invalid_argument("init_params: modulation_init must be finite and >= 0");
    std::mt19937_64 rng(seed);
    ModelParams<float> params;
    params.arch = arch;
    params.fourier.resize(arch.hidden_dim, 2);
    std::normal_distribution<double> gauss(0.0, arch.fourier_scale);
    fill(params.fourier, gauss, rng);

    params.net = NetworkWeights<float>::zeros(arch);
    const double d = arch.hidden_dim;
    for (int i = 0; i < arch.num_layers; ++i)
    {
        auto &layer = params.net.layers[static_cast<std::size_t>(i)];
        const double fan_in = static_cast<double>(layer.weight.cols());
        const double bound = i == 0 ? 1.0 / fan_in : std::sqrt(6.0 / fan_in) / arch.omega0;
        std::uniform_real_distribution<double> w(-bound, bound);
        fill(layer.weight, w, rng);
        if (modulation_init > 0.0)
        {
            std::uniform_real_distribution<double> mod(-modulation_init, modulation_init);
            fill(layer.scale_weight, mod, rng);
            fill(layer.shift_weight, mod, rng);
        }
        layer.scale_bias.setOnes();
    }
    const double out_bound = std::sqrt(6.0 / d) / arch.omega0;
    std::uniform_real_distribution<double> out(-out_bound, out_bound);
    fill(params.net.out_weight, out, rng);
    return params;
}

CoordinateGrid::CoordinateGrid(int rows, int cols) : rows_(rows), cols_(cols)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("CoordinateGrid: both axes must be >= 1");
}

std::pair<double, double> CoordinateGrid::normalized(int row, int col) const
{
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
        throw std::out_of_range("CoordinateGrid: index outside grid");
    const auto axis = [](int i, int size) { return size == 1 ? 0.0 : 2.0 * i / (size - 1) - 1.0; };
    return {axis(row, rows_), axis(col, cols_)};
}

std::pair<int, int> CoordinateGrid::index_of(double x, double y) const
{
    const auto axis = [](double v, int size) {
        return size == 1 ? 0 : static_cast<int>(std::lround((v + 1.0) * (size - 1) / 2.0));
    };
    const int row = axis(x, rows_);
    const int col = axis(y, cols_);
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
        throw std::out_of_range("CoordinateGrid: coordinate outside [-1, 1]");
    return {row, col};
}

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
reconstruct(const ModelParams<Scalar> &params, const Vector<Scalar> &codeword, const CoordinateGrid &grid, double scale)
{
    const Matrix<Scalar> out = predict(params, codeword, grid.points<Scalar>());
    auto H = from_planes<Scalar>(out, grid.rows(), grid.cols());
    if (scale != 1.0)
        H *= static_cast<Scalar>(scale);
    return H;
}

template Eigen::Matrix<std::complex<float>, Eigen::Dynamic, Eigen::Dynamic>
reconstruct(const ModelParams<float> &, const Vector<float> &, const CoordinateGrid &, double);
template Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>
reconstruct(const ModelParams<double> &, const Vector<double> &, const CoordinateGrid &, double);

std::vector<std::uint8_t> serialize_checkpoint(const ModelParams<float> &params)
{
    const auto &arch = params.arch;
    ByteWriter w;
    w.magic("CSIN");
    w.put<std::uint32_t>(checkpoint_version);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(arch.hidden_dim));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(arch.num_layers));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(arch.codeword_dim));
    w.put<double>(arch.omega0);
    w.put<double>(arch.fourier_scale);
    w.put<double>(params.channel_scale);
    put_block(w, params.fourier);
    for_each_block([&](const auto &block) { put_block(w, block); }, params.net);
    return w.take();
}

ModelParams<float> deserialize_checkpoint(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    r.expect_magic("CSIN");
    if (const auto version = r.get<std::uint32_t>(); version != checkpoint_version)
        throw FormatError("unsupported checkpoint version " + std::to_string(version));
    ModelParams<float> params;
    auto &arch = params.arch;
    arch.hidden_dim = static_cast<int>(r.get<std::uint32_t>());
    arch.num_layers = static_cast<int>(r.get<std::uint32_t>());
    arch.codeword_dim = static_cast<int>(r.get<std::uint32_t>());
    arch.omega0 = r.get<double>();
    arch.fourier_scale = r.get<double>();
    params.channel_scale = r.get<double>();
    try
    {
        arch.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw FormatError(std::string("checkpoint header: ") + e.what());
    }
    if (arch.hidden_dim > (1 << 16) || arch.num_layers > 4096 || arch.codeword_dim > (1 << 16))
        throw FormatError("checkpoint header: implausible architecture");
    if (r.remaining() != parameter_count(arch) * sizeof(float))
        throw FormatError("checkpoint payload size does not match its architecture");

    params.fourier.resize(arch.hidden_dim, 2);
    get_block(r, params.fourier);
    params.net = NetworkWeights<float>::zeros(arch);
    for_each_block([&](auto &block) { get_block(r, block); }, params.net);
    return params;
}

void save_checkpoint(const ModelParams<float> &params, const std::string &path)
{
    write_file(path, serialize_checkpoint(params));
}

ModelParams<float> load_checkpoint(const std::string &path) { return deserialize_checkpoint(read_file(path)); }

} // namespace csiinr
