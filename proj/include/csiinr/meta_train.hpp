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

#include "csiinr/diff_engine.hpp"
#include "csiinr/model.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiinr
{

// Non-finite loss or gradient during training or encoding.
class DivergenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct TrainLog
{
    struct Step
    {
        std::int64_t step = 0;
        int epoch = 0;
        double loss = 0.0; // batch mean loss at the adapted codewords, before the update
    };
    struct Epoch
    {
        int epoch = 0;
        std::int64_t step = 0;
        double val_nmse_db = 0.0;
        double wall_seconds = 0.0;
    };
    std::vector<Step> steps;
    std::vector<Epoch> epochs; // epoch 0 is the initial model

    bool empty() const { return steps.empty() && epochs.empty(); }
    // "step,loss,epoch,val_nmse_db": one row per outer step (val empty) and one per epoch (loss empty).
    std::string to_csv() const;
};

struct TrainConfig
{
    int inner_steps = 3;
    double inner_lr = 1e-2;
    double outer_lr = 1e-6;
    int batch_size = 64;
    int max_epochs = 100;
    int patience = 10;
    std::uint64_t seed = 0;
    double grad_clip = 0.0;       // global-norm clip of the outer gradient; 0 disables
    int validation_steps = -1;    // inner steps used for validation; < 0 means inner_steps
    double modulation_init = 1e-2; // see init_params
    std::function<void(const TrainLog::Epoch &)> on_epoch;

    void validate() const;
};

template <typename Scalar>
struct AdamState
{
    NetworkWeights<Scalar> first;
    NetworkWeights<Scalar> second;
    std::int64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState zeros(const ArchConfig &arch)
    {
        return {NetworkWeights<Scalar>::zeros(arch), NetworkWeights<Scalar>::zeros(arch)};
    }
};

// M_0 = 0; M_j = M_{j-1} - lr * grad_M loss(params, M_{j-1}) for j = 1..steps. Params are not touched.
template <typename Scalar>
Vector<Scalar> inner_adapt(const ModelParams<Scalar> &params, const Matrix<Scalar> &coords,
                           const Matrix<Scalar> &targets, int steps, double lr);

// Sum over the batch of per-sample parameter gradients with the codewords held fixed.
template <typename Scalar>
NetworkWeights<Scalar> outer_gradient(const ModelParams<Scalar> &params, const Matrix<Scalar> &coords,
                                      std::span<const Matrix<Scalar>> targets,
                                      std::span<const Vector<Scalar>> codewords, double *batch_loss = nullptr);

// One Adam update of every trainable block. Returns the batch mean loss before the update.
template <typename Scalar>
double outer_step(ModelParams<Scalar> &params, AdamState<Scalar> &adam, const Matrix<Scalar> &coords,
                  std::span<const Matrix<Scalar>> targets, std::span<const Vector<Scalar>> codewords, double lr,
                  double grad_clip = 0.0);

// Mean NMSE (dB) after `steps` inner steps per sample.
double evaluate_nmse_db(const ModelParams<float> &params, const Matrix<float> &coords,
                        std::span<const Matrix<float>> targets, int steps, double lr);

struct TrainResult
{
    ModelParams<float> params; // best validation epoch
    TrainLog log;
    int best_epoch = 0;
};

// Meta-training with validation-based early stopping. `channel_scale` is recorded in the
// returned params so that reconstruction can undo dataset normalisation.
TrainResult train(std::span<const Eigen::MatrixXcf> train_set, std::span<const Eigen::MatrixXcf> validation_set,
                  const ArchConfig &arch, const TrainConfig &cfg, double channel_scale = 1.0);

} // namespace csiinr
