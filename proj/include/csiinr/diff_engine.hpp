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

// Forward evaluation and exact reverse-mode gradients for the fixed modulated
// SIREN graph. Evaluation order is fixed (coordinates batched as columns, layers in
// order), so identical inputs give bit-identical outputs.

#pragma once

#include "csiinr/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace csiinr
{

template <typename Scalar>
struct ActivationTape
{
    Vector<Scalar> codeword;
    Matrix<Scalar> fourier_features;           // 2 d_h x K
    std::vector<Vector<Scalar>> scales;        // gamma_i
    std::vector<Vector<Scalar>> shifts;        // eta_i
    std::vector<Matrix<Scalar>> pre;           // E_i, d_h x K
    std::vector<Matrix<Scalar>> modulated;     // u_i = gamma_i .* E_i + eta_i
    std::vector<Matrix<Scalar>> post;          // F_i
    Matrix<Scalar> output;                     // 2 x K
};

template <typename Scalar>
struct GradientBundle
{
    Vector<Scalar> grad_codeword;
    std::optional<NetworkWeights<Scalar>> grad_params;
    Scalar loss = 0;
};

// Modulation vectors for every layer: gamma_i = Wg_i M + bg_i, eta_i = We_i M + be_i.
template <typename Scalar>
std::pair<std::vector<Vector<Scalar>>, std::vector<Vector<Scalar>>> modulations(const ModelParams<Scalar> &params,
                                                                                const Vector<Scalar> &codeword);

// Network output for coordinates (2 x K). Throws std::invalid_argument on shape mismatch.
template <typename Scalar>
Matrix<Scalar> predict(const ModelParams<Scalar> &params, const Vector<Scalar> &codeword, const Matrix<Scalar> &coords);

template <typename Scalar>
ActivationTape<Scalar> forward(const ModelParams<Scalar> &params, const Vector<Scalar> &codeword,
                               const Matrix<Scalar> &coords);

// Mean over coordinates of |pred - target|^2 (real and imaginary error summed).
template <typename Scalar>
Scalar loss_mse(const Matrix<Scalar> &predictions, const Matrix<Scalar> &targets);

// Mean of the per-sample losses over a batch.
template <typename Scalar>
Scalar batch_loss_mse(std::span<const Matrix<Scalar>> predictions, std::span<const Matrix<Scalar>> targets);

template <typename Scalar>
GradientBundle<Scalar> backward_codeword(const ActivationTape<Scalar> &tape, const ModelParams<Scalar> &params,
                                         const Matrix<Scalar> &targets);

// Gradients for every trainable block (B excluded) and for the codeword.
template <typename Scalar>
GradientBundle<Scalar> backward_params(const ActivationTape<Scalar> &tape, const ModelParams<Scalar> &params,
                                       const Matrix<Scalar> &targets);

struct FiniteDiffReport
{
    struct Block
    {
        std::string name;
        double max_rel_error = 0.0;
        std::size_t entries = 0;
    };
    std::vector<Block> blocks; // "codeword" first, then trainable blocks in checkpoint order

    double max_rel_error() const;
};

// Fourth-order central differences (8[f(x+h) - f(x-h)] - [f(x+2h) - f(x-2h)]) / 12h per scalar
// against the analytic gradients, relative error |a - n| / max(|a|, |n|, 1e-12); entries above 1e-6 in
// double are re-evaluated with long double losses. Requires h > 0.
FiniteDiffReport finite_diff_check(const ModelParams<double> &params, const Vector<double> &codeword,
                                   const Matrix<double> &coords, const Matrix<double> &targets, double h = 1e-5);

} // namespace csiinr
