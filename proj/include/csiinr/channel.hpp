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

// Closed-form multipath MIMO-OFDM channel for a uniform linear array.
//
// Row index of a channel matrix is the antenna, column index the subcarrier.
// All indices in this API are zero-based.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace csiinr
{

inline constexpr double speed_of_light = 2.99792458e8;

struct SystemConfig
{
    int num_antennas = 32;
    int num_subcarriers = 32;
    double base_frequency = 3.5e9;             // lowest subcarrier frequency [Hz]
    double subcarrier_spacing = 100e6 / 32.0;  // 100 MHz split over the subcarriers [Hz]
    double antenna_spacing = speed_of_light / (2.0 * 3.5e9); // half wavelength at base_frequency [m]
    double light_speed = speed_of_light;
    int num_paths = 10;
    // When false the antenna phase slope is evaluated at base_frequency for every
    // subcarrier (narrowband array), which makes channel_matrix and channel_element
    // agree exactly. When true each subcarrier uses its own frequency.
    bool wideband_steering = false;

    // Half-wavelength ULA at f0 with the given bandwidth split uniformly over the subcarriers.
    static SystemConfig make(int antennas, int subcarriers, int paths, double f0 = 3.5e9, double bandwidth = 100e6);

    // Throws std::invalid_argument on a non-physical configuration.
    void validate() const;

    // Phase slope between adjacent antennas, 2*pi*d*f/c.
    double phase_slope(double frequency) const { return 2.0 * M_PI * antenna_spacing * frequency / light_speed; }
    double subcarrier_frequency(int subcarrier) const { return base_frequency + subcarrier * subcarrier_spacing; }
};

struct Path
{
    double gain = 0.0;  // alpha >= 0
    double delay = 0.0; // tau [s]
    double phase = 0.0; // initial phase [rad]
    double aod = 0.0;   // angle of departure in [-pi/2, pi/2]
};

using PathSet = std::vector<Path>;
using ChannelMatrix = Eigen::MatrixXcd;

void validate_paths(const PathSet &paths);

Eigen::VectorXcd steering_vector(double aod, double frequency, const SystemConfig &cfg);

// Sum over paths of alpha * exp(-j 2 pi f tau + j phi) * a(theta), with a(theta)
// evaluated at f, or at f0 unless wideband_steering is set.
Eigen::VectorXcd channel_vector(double frequency, const PathSet &paths, const SystemConfig &cfg);

// Column m is channel_vector at f0 + m * f_delta.
ChannelMatrix channel_matrix(const PathSet &paths, const SystemConfig &cfg);

// Element-wise form: sum_p A_p exp(-j[2 pi m f_delta tau_p + chi n sin(theta_p)]) with
// A_p = alpha_p exp(-j 2 pi f0 tau_p + j phi_p) and chi taken at f0. Matches
// channel_matrix for narrowband steering; throws std::out_of_range on bad indices.
std::complex<double> channel_element(int antenna, int subcarrier, const PathSet &paths, const SystemConfig &cfg);

} // namespace csiinr
