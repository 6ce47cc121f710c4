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

#include "csiinr/metrics.hpp"

#include "csiinr/binary_io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace csiinr
{

Nmse mean_nmse(std::span<const double> per_sample_linear)
{
    if (per_sample_linear.empty())
        throw std::invalid_argument("mean_nmse: no samples");
    double sum = 0.0;
    for (double v : per_sample_linear)
        sum += v;
    const double linear = sum / static_cast<double>(per_sample_linear.size());
    return {linear, to_db(linear)};
}

Rates rates(int codeword_dim, std::optional<int> bits, double payload_bits, int num_antennas, int num_subcarriers)
{
    if (codeword_dim < 1 || num_antennas < 1 || num_subcarriers < 1 || (bits && *bits < 1))
        throw std::invalid_argument("rates: dimensions must be positive");
    const double real_dims = 2.0 * num_antennas * num_subcarriers;
    Rates r;
    r.compression_ratio = codeword_dim / real_dims;
    r.bit_rate = payload_bits / real_dims;
    if (bits)
        r.coding_gain = 1.0 - payload_bits / (static_cast<double>(codeword_dim) * *bits);
    return r;
}

double truncate_significant(double value, int digits)
{
    if (value == 0.0 || !std::isfinite(value))
        return value;
    const double exponent = std::floor(std::log10(std::abs(value)));
    const double unit = std::pow(10.0, exponent - digits + 1);
    // Guard against representation error just below an exact boundary.
    return std::trunc(value / unit * (1.0 + 1e-12)) * unit;
}

MetricReport svd_baseline(std::span<const Eigen::MatrixXcf> train, std::span<const Eigen::MatrixXcf> test, int n)
{
    if (train.empty() || test.empty())
        throw std::invalid_argument("svd_baseline: empty split");
    const auto rows = train.front().rows();
    const auto cols = train.front().cols();
    const Eigen::Index dims = 2 * rows * cols;
    if (n < 0 || n > dims)
        throw std::invalid_argument("svd_baseline: n must lie in [0, 2 N_t N_c]");

    const auto flatten = [&](const Eigen::MatrixXcf &H) {
        if (H.rows() != rows || H.cols() != cols)
            throw std::invalid_argument("svd_baseline: inconsistent sample shapes");
        const Matrix<double> planes = to_planes<double>(H);
        return Vector<double>(Eigen::Map<const Vector<double>>(planes.data(), planes.size()));
    };

    Matrix<double> X(dims, static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i)
        X.col(static_cast<Eigen::Index>(i)) = flatten(train[i]);
    const Vector<double> mean = X.rowwise().mean();
    X.colwise() -= mean;
    const Matrix<double> covariance = (X * X.transpose()) / static_cast<double>(train.size());
    Eigen::SelfAdjointEigenSolver<Matrix<double>> eig(covariance);
    // Eigenvalues ascend; the full eigenvector basis stays orthonormal when the covariance is rank deficient.
    const Matrix<double> basis = eig.eigenvectors().rightCols(n).rowwise().reverse();

    MetricReport report;
    for (const auto &H : test)
    {
        const Vector<double> x = flatten(H);
        const Vector<double> coeffs = basis.transpose() * (x - mean);
        const Vector<double> recon = mean + basis * coeffs;
        const double denom = x.squaredNorm();
        if (!(denom > 0.0))
            throw std::invalid_argument("svd_baseline: test sample has zero norm");
        report.per_sample_nmse.push_back((x - recon).squaredNorm() / denom);
    }
    report.mean = mean_nmse(report.per_sample_nmse);
    report.raw_bits_per_sample = 32.0 * n;
    report.coded_bits_per_sample = report.raw_bits_per_sample;
    report.rates = rates(std::max(n, 1), std::nullopt, report.coded_bits_per_sample, static_cast<int>(rows),
                         static_cast<int>(cols));
    report.rates.compression_ratio = n / static_cast<double>(dims);
    report.fingerprint = fingerprint("svd_baseline;rows=" + std::to_string(rows) + ";cols=" + std::to_string(cols) +
                                     ";train=" + std::to_string(train.size()) + ";test=" + std::to_string(test.size()) +
                                     ";n=" + std::to_string(n));
    return report;
}

std::string fingerprint(std::string_view canonical)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
    return buf;
}

} // namespace csiinr
