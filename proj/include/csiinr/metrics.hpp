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

#include "csiinr/model.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace csiinr
{

struct Nmse
{
    double linear = 0.0;
    double db = 0.0; // -inf for a perfect reconstruction
};

inline double to_db(double linear)
{
    return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

// ||H - H_hat||_F^2 / ||H||_F^2. Throws std::invalid_argument for shape mismatch or zero-norm H.
template <typename DerivedA, typename DerivedB>
Nmse nmse(const Eigen::MatrixBase<DerivedA> &H, const Eigen::MatrixBase<DerivedB> &H_hat)
{
    if (H.rows() != H_hat.rows() || H.cols() != H_hat.cols())
        throw std::invalid_argument("nmse: shapes differ");
    double num = 0.0, denom = 0.0;
    for (Eigen::Index c = 0; c < H.cols(); ++c)
        for (Eigen::Index r = 0; r < H.rows(); ++r)
        {
            const std::complex<double> h(H(r, c));
            num += std::norm(h - std::complex<double>(H_hat(r, c)));
            denom += std::norm(h);
        }
    if (!(denom > 0.0))
        throw std::invalid_argument("nmse: target has zero norm");
    const double linear = num / denom;
    return {linear, to_db(linear)};
}

// Same ratio on 2 x K real/imaginary planes.
template <typename Scalar>
Nmse nmse_planes(const Matrix<Scalar> &target, const Matrix<Scalar> &estimate)
{
    if (target.rows() != estimate.rows() || target.cols() != estimate.cols())
        throw std::invalid_argument("nmse: shapes differ");
    const double denom = target.template cast<double>().squaredNorm();
    if (!(denom > 0.0))
        throw std::invalid_argument("nmse: target has zero norm");
    const double linear = (target.template cast<double>() - estimate.template cast<double>()).squaredNorm() / denom;
    return {linear, to_db(linear)};
}

// Dataset NMSE: mean of the per-sample ratios.
Nmse mean_nmse(std::span<const double> per_sample_linear);

struct Rates
{
    double compression_ratio = 0.0; // n / (2 N_t N_c)
    double bit_rate = 0.0;          // payload_bits / (2 N_t N_c)
    std::optional<double> coding_gain; // 1 - payload_bits / (n b); absent when unquantized
};

Rates rates(int codeword_dim, std::optional<int> bits, double payload_bits, int num_antennas, int num_subcarriers);

// Rounds toward zero to `digits` significant figures.
double truncate_significant(double value, int digits);

struct MetricReport
{
    std::vector<double> per_sample_nmse;
    Nmse mean;
    double raw_bits_per_sample = 0.0;
    double coded_bits_per_sample = 0.0;
    Rates rates;
    std::string fingerprint;
};

// Linear comparator: top-n principal directions of the real-stacked training channels,
// n unquantised coefficients per test sample. n = 0 is the mean predictor.
MetricReport svd_baseline(std::span<const Eigen::MatrixXcf> train, std::span<const Eigen::MatrixXcf> test, int n);

// 16 hex digits of FNV-1a over a canonical "key=value;" description.
std::string fingerprint(std::string_view canonical);

} // namespace csiinr
