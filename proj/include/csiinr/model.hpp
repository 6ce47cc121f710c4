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

// Parameterisation of the modulated sinusoidal coordinate network:
//
//   F_0 = [cos(2 pi B x); sin(2 pi B x)]
//   E_i = W_i F_{i-1} + b_i
//   F_i = sin(omega0 (gamma_i .* E_i + eta_i)),  gamma_i = Wg_i M + bg_i,  eta_i = We_i M + be_i
//   out = W_out F_L + b_out  -> (Re, Im)

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace csiinr
{

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct ArchConfig
{
    int hidden_dim = 512;
    int num_layers = 10;
    int codeword_dim = 32;
    double omega0 = 50.0;
    double fourier_scale = 10.0;

    void validate() const;
};

template <typename Scalar>
struct ModulatedLayer
{
    Matrix<Scalar> weight; // d_h x fan_in
    Vector<Scalar> bias;
    Matrix<Scalar> scale_weight; // d_h x n
    Vector<Scalar> scale_bias;
    Matrix<Scalar> shift_weight; // d_h x n
    Vector<Scalar> shift_bias;
};

// Every trainable block; the Fourier matrix is deliberately not part of it.
template <typename Scalar>
struct NetworkWeights
{
    std::vector<ModulatedLayer<Scalar>> layers;
    Matrix<Scalar> out_weight; // 2 x d_h
    Vector<Scalar> out_bias;   // 2

    static NetworkWeights zeros(const ArchConfig &arch);

    template <typename Other>
    NetworkWeights<Other> cast() const
    {
        NetworkWeights<Other> out;
        for (const auto &l : layers)
            out.layers.push_back({l.weight.template cast<Other>(), l.bias.template cast<Other>(),
                                  l.scale_weight.template cast<Other>(), l.scale_bias.template cast<Other>(),
                                  l.shift_weight.template cast<Other>(), l.shift_bias.template cast<Other>()});
        out.out_weight = out_weight.template cast<Other>();
        out.out_bias = out_bias.template cast<Other>();
        return out;
    }
};

// Calls f once per trainable block, passing the matching block of every argument.
// Blocks are visited in checkpoint order.
template <typename F, typename First, typename... Rest>
void for_each_block(F &&f, First &&first, Rest &&...rest)
{
    for (std::size_t i = 0; i < first.layers.size(); ++i)
    {
        f(first.layers[i].weight, rest.layers[i].weight...);
        f(first.layers[i].bias, rest.layers[i].bias...);
        f(first.layers[i].scale_weight, rest.layers[i].scale_weight...);
        f(first.layers[i].scale_bias, rest.layers[i].scale_bias...);
        f(first.layers[i].shift_weight, rest.layers[i].shift_weight...);
        f(first.layers[i].shift_bias, rest.layers[i].shift_bias...);
    }
    f(first.out_weight, rest.out_weight...);
    f(first.out_bias, rest.out_bias...);
}

template <typename Scalar>
struct ModelParams
{
    ArchConfig arch;
    Matrix<Scalar> fourier; // d_h x 2, fixed after init
    NetworkWeights<Scalar> net;
    double channel_scale = 1.0; // dataset normalisation the model was trained under

    template <typename Other>
    ModelParams<Other> cast() const
    {
        return {arch, fourier.template cast<Other>(), net.template cast<Other>(), channel_scale};
    }
};

// Number of trainable scalars plus the Fourier matrix, i.e. the checkpoint payload.
std::size_t parameter_count(const ArchConfig &arch);

// Fourier matrix ~ N(0, sigma_b^2). Sinusoidal init: W_1 ~ U(+-1/fan_in), deeper W_i and
// W_out ~ U(+-sqrt(6/fan_in)/omega0). bg = 1 and be = 0 make the zero codeword the identity
// modulation; Wg and We start at U(+-modulation_init), so that codeword gradients are nonzero
// (0 gives all-zero modulation weights).
ModelParams<float> init_params(std::uint64_t seed, const ArchConfig &arch, double modulation_init = 1e-2);

// Row-major normalised coordinates of an rows x cols matrix: entry (i, j) maps to
// (2i/(rows-1) - 1, 2j/(cols-1) - 1); a size-1 axis maps to 0.
class CoordinateGrid
{
public:
    CoordinateGrid(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int size() const { return rows_ * cols_; }

    std::pair<double, double> normalized(int row, int col) const;
    std::pair<int, int> index_of(double x, double y) const;

    // 2 x (rows*cols), column k = (row, col) with k = row*cols + col.
    template <typename Scalar>
    Matrix<Scalar> points() const
    {
        Matrix<Scalar> X(2, size());
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
            {
                const auto [x, y] = normalized(r, c);
                X(0, r * cols_ + c) = static_cast<Scalar>(x);
                X(1, r * cols_ + c) = static_cast<Scalar>(y);
            }
        return X;
    }

private:
    int rows_;
    int cols_;
};

// Complex matrix <-> 2 x (rows*cols) planes (row 0 real, row 1 imaginary), grid order.
template <typename Scalar, typename Derived>
Matrix<Scalar> to_planes(const Eigen::MatrixBase<Derived> &H)
{
    Matrix<Scalar> planes(2, H.size());
    for (Eigen::Index r = 0; r < H.rows(); ++r)
        for (Eigen::Index c = 0; c < H.cols(); ++c)
        {
            planes(0, r * H.cols() + c) = static_cast<Scalar>(std::real(H(r, c)));
            planes(1, r * H.cols() + c) = static_cast<Scalar>(std::imag(H(r, c)));
        }
    return planes;
}

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> from_planes(const Matrix<Scalar> &planes, int rows,
                                                                                  int cols)
{
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> H(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            H(r, c) = {planes(0, r * cols + c), planes(1, r * cols + c)};
    return H;
}

// Network output over the grid mapped back to the channel domain (times `scale`).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
reconstruct(const ModelParams<Scalar> &params, const Vector<Scalar> &codeword, const CoordinateGrid &grid, double scale);

// Little-endian "CSIN" v1: magic, version u32, d_h u32, L_t u32, n u32, omega0 f64,
// sigma_b f64, channel_scale f64, then f32 blocks: B, per layer (W, b, Wg, bg, We, be), W_out, b_out.
// Matrices are stored row-major.
inline constexpr std::size_t checkpoint_header_bytes = 4 + 4 + 3 * 4 + 3 * 8;

std::vector<std::uint8_t> serialize_checkpoint(const ModelParams<float> &params);
ModelParams<float> deserialize_checkpoint(std::span<const std::uint8_t> bytes);
void save_checkpoint(const ModelParams<float> &params, const std::string &path);
ModelParams<float> load_checkpoint(const std::string &path);

} // namespace csiinr
