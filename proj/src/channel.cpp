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

#include "csiinr/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csiinr
{

namespace
{
constexpr std::complex<double> j{0.0, 1.0};

// Fractional part of a*b (in cycles), exact up to the final rounding.
double fractional_cycles(double a, double b)
{
    const double p = a * b;
    const double err = std::fma(a, b, -p);
    return (p - std::round(p)) + err;
}

// alpha * exp(-j 2 pi (f0 + offset) tau + j phi), with the carrier phase reduced to cycles.
std::complex<double> path_coefficient(const Path &path, double f0, double offset)
{
    const double cycles = fractional_cycles(f0, path.delay) + fractional_cycles(offset, path.delay);
    return path.gain * std::exp(j * (path.phase - 2.0 * M_PI * cycles));
}

Eigen::VectorXcd channel_column(double f0, double offset, const PathSet &paths, const SystemConfig &cfg)
{
    const double steering_frequency = cfg.wideband_steering ? f0 + offset : cfg.base_frequency;
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(cfg.num_antennas);
    for (const auto &path : paths)
        h += path_coefficient(path, f0, offset) * steering_vector(path.aod, steering_frequency, cfg);
    return h;
}
} // namespace

SystemConfig SystemConfig::make(int antennas, int subcarriers, int paths, double f0, double bandwidth)
{
    SystemConfig cfg;
    cfg.num_antennas = antennas;
    cfg.num_subcarriers = subcarriers;
    cfg.num_paths = paths;
    cfg.base_frequency = f0;
    cfg.subcarrier_spacing = bandwidth / subcarriers;
    cfg.antenna_spacing = cfg.light_speed / (2.0 * f0);
    return cfg;
}

void SystemConfig::validate() const
{
    if (num_antennas < 1 || num_subcarriers < 1 || num_paths < 1)
        throw std::invalid_argument("SystemConfig: antenna, subcarrier and path counts must be >= 1");
    if (!(base_frequency > 0.0) || !(subcarrier_spacing > 0.0) || !(antenna_spacing > 0.0) || !(light_speed > 0.0))
        throw std::invalid_argument("SystemConfig: frequencies, spacing and light speed must be positive");
}

void validate_paths(const PathSet &paths)
{
    if (paths.empty())
        throw std::invalid_argument("PathSet is empty");
    for (std::size_t p = 0; p < paths.size(); ++p)
    {
        const auto &path = paths[p];
        if (!(path.gain >= 0.0) || !std::isfinite(path.gain) || !std::isfinite(path.delay) || !std::isfinite(path.phase))
            throw std::invalid_argument("path " + std::to_string(p) + ": gain must be finite and >= 0");
        if (!(std::abs(path.aod) <= M_PI / 2.0))
            throw std::invalid_argument("path " + std::to_string(p) + ": angle of departure outside [-pi/2, pi/2]");
    }
}

Eigen::VectorXcd steering_vector(double aod, double frequency, const SystemConfig &cfg)
{
    cfg.validate();
    const double step = cfg.phase_slope(frequency) * std::sin(aod);
    Eigen::VectorXcd a(cfg.num_antennas);
    for (int k = 0; k < cfg.num_antennas; ++k)
        a[k] = std::exp(-j * (step * k));
    return a;
}

Eigen::VectorXcd channel_vector(double frequency, const PathSet &paths, const SystemConfig &cfg)
{
    cfg.validate();
    validate_paths(paths);
    return channel_column(frequency, 0.0, paths, cfg);
}

ChannelMatrix channel_matrix(const PathSet &paths, const SystemConfig &cfg)
{
    cfg.validate();
    validate_paths(paths);
    ChannelMatrix H(cfg.num_antennas, cfg.num_subcarriers);
    for (int m = 0; m < cfg.num_subcarriers; ++m)
        H.col(m) = channel_column(cfg.base_frequency, m * cfg.subcarrier_spacing, paths, cfg);
    return H;
}

std::complex<double> channel_element(int antenna, int subcarrier, const PathSet &paths, const SystemConfig &cfg)
{
    cfg.validate();
    validate_paths(paths);
    if (antenna < 0 || antenna >= cfg.num_antennas || subcarrier < 0 || subcarrier >= cfg.num_subcarriers)
        throw std::out_of_range("channel_element: index (" + std::to_string(antenna) + ", " +
                                std::to_string(subcarrier) + ") outside the channel matrix");

    const double chi = cfg.phase_slope(cfg.base_frequency);
    std::complex<double> sum = 0.0;
    for (const auto &path : paths)
    {
        const auto coeff = path_coefficient(path, cfg.base_frequency, 0.0);
        const double cycles = fractional_cycles(subcarrier * cfg.subcarrier_spacing, path.delay);
        const double phase = 2.0 * M_PI * cycles + chi * antenna * std::sin(path.aod);
        sum += coeff * std::exp(-j * phase);
    }
    return sum;
}

} // namespace csiinr
