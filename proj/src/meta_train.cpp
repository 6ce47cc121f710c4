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

#include "csiinr/meta_train.hpp"

#include "csiinr/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace csiinr
{

namespace
{

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived> &m)
{
    return m.allFinite();
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(9);
    os << v;
    return os.str();
}

} // namespace

std::string TrainLog::to_csv() const
{
    std::ostringstream os;
    os << "step,loss,epoch,val_nmse_db\n";
    std::size_t e = 0;
    // Epoch rows are interleaved after the last step that precedes them.
    const auto flush_epochs = [&](std::int64_t upto) {
        while (e < epochs.size() && epochs[e].step <= upto)
        {
            os << epochs[e].step << ",," << epochs[e].epoch << "," << format_double(epochs[e].val_nmse_db) << "\n";
            ++e;
        }
    };
    flush_epochs(0);
    for (const auto &s : steps)
    {
        os << s.step << "," << format_double(s.loss) << "," << s.epoch << ",\n";
        flush_epochs(s.step);
    }
    flush_epochs(std::numeric_limits<std::int64_t>::max());
    return os.str();
}

void TrainConfig::validate() const
{
    if (inner_steps < 0 || !(inner_lr > 0.0) || !(outer_lr >= 0.0) || batch_size < 1 || max_epochs < 0 ||
        patience < 1 || grad_clip < 0.0)
        throw std::invalid_argument("TrainConfig: invalid hyperparameters");
}

template <typename Scalar>
Vector<Scalar> inner_adapt(const ModelParams<Scalar> &params, const Matrix<Scalar> &coords,
                           const Matrix<Scalar> &targets, int steps, double lr)
{
    if (steps < 0)
        throw std::invalid_argument("inner_adapt: steps must be >= 0");
    Vector<Scalar> codeword = Vector<Scalar>::Zero(params.arch.codeword_dim);
    for (int j = 1; j <= steps; ++j)
    {
        const auto g = backward_codeword(forward(params, codeword, coords), params, targets);
        if (!std::isfinite(static_cast<double>(g.loss)) || !all_finite(g.grad_codeword))
            throw DivergenceError("inner loop diverged at step " + std::to_string(j));
        codeword -= static_cast<Scalar>(lr) * g.grad_codeword;
    }
    return codeword;
}

template <typename Scalar>
NetworkWeights<Scalar> outer_gradient(const ModelParams<Scalar> &params, const Matrix<Scalar> &coords,
                                      std::span<const Matrix<Scalar>> targets,
                                      std::span<const Vector<Scalar>> codewords, double *batch_loss)
{
    if (targets.size() != codewords.size() || targets.empty())
        throw std::invalid_argument("outer_gradient: need one codeword per target and a nonempty batch");
    auto total = NetworkWeights<Scalar>::zeros(params.arch);
    double loss = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i)
    {
        const auto g = backward_params(forward(params, codewords[i], coords), params, targets[i]);
        loss += static_cast<double>(g.loss);
        for_each_block([](auto &acc, const auto &grad) { acc += grad; }, total, *g.grad_params);
    }
    if (batch_loss)
        *batch_loss = loss / static_cast<double>(targets.size());
    return total;
}

template <typename Scalar>
double outer_step(ModelParams<Scalar> &params, AdamState<Scalar> &adam, const Matrix<Scalar> &coords,
                  std::span<const Matrix<Scalar>> targets, std::span<const Vector<Scalar>> codewords, double lr,
                  double grad_clip)
{
    double loss = 0.0;
    auto grad = outer_gradient(params, coords, targets, codewords, &loss);

    double norm2 = 0.0;
    for_each_block([&](const auto &g) { norm2 += g.template cast<double>().squaredNorm(); }, grad);
    if (!std::isfinite(loss) || !std::isfinite(norm2))
        throw DivergenceError("outer gradient is not finite");
    if (grad_clip > 0.0 && std::sqrt(norm2) > grad_clip)
    {
        const auto factor = static_cast<Scalar>(grad_clip / std::sqrt(norm2));
        for_each_block([&](auto &g) { g *= factor; }, grad);
    }

    ++adam.step;
    const auto b1 = static_cast<Scalar>(adam.beta1);
    const auto b2 = static_cast<Scalar>(adam.beta2);
    const auto c1 = static_cast<Scalar>(1.0 - std::pow(adam.beta1, static_cast<double>(adam.step)));
    const auto c2 = static_cast<Scalar>(1.0 - std::pow(adam.beta2, static_cast<double>(adam.step)));
    const auto rate = static_cast<Scalar>(lr);
    const auto eps = static_cast<Scalar>(adam.epsilon);
    for_each_block(
        [&](auto &p, auto &m, auto &v, const auto &g) {
            m = b1 * m + (Scalar(1) - b1) * g;
            v = b2 * v + (Scalar(1) - b2) * g.cwiseAbs2();
            p.array() -= rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
        },
        params.net, adam.first, adam.second, grad);
    return loss;
}

double evaluate_nmse_db(const ModelParams<float> &params, const Matrix<float> &coords,
                        std::span<const Matrix<float>> targets, int steps, double lr)
{
    std::vector<double> per_sample;
    per_sample.reserve(targets.size());
    for (const auto &t : targets)
    {
        const auto codeword = inner_adapt(params, coords, t, steps, lr);
        per_sample.push_back(nmse_planes(t, predict(params, codeword, coords)).linear);
    }
    return mean_nmse(per_sample).db;
}

TrainResult train(std::span<const Eigen::MatrixXcf> train_set, std::span<const Eigen::MatrixXcf> validation_set,
                  const ArchConfig &arch, const TrainConfig &cfg, double channel_scale)
{
    cfg.validate();
    arch.validate();

    TrainResult result;
    result.params = init_params(cfg.seed, arch, cfg.modulation_init);
    result.params.channel_scale = channel_scale;
    if (cfg.max_epochs == 0)
        return result;
    if (train_set.empty() || validation_set.empty())
        throw std::invalid_argument("train: training and validation sets must be nonempty");

    const int rows = static_cast<int>(train_set.front().rows());
    const int cols = static_cast<int>(train_set.front().cols());
    const CoordinateGrid grid(rows, cols);
    const Matrix<float> coords = grid.points<float>();
    const auto planes = [&](std::span<const Eigen::MatrixXcf> set) {
        std::vector<Matrix<float>> out;
        for (const auto &H : set)
        {
            if (H.rows() != rows || H.cols() != cols)
                throw std::invalid_argument("train: samples have inconsistent shapes");
            out.push_back(to_planes<float>(H));
        }
        return out;
    };
    const auto train_targets = planes(train_set);
    const auto val_targets = planes(validation_set);
    const int val_steps = cfg.validation_steps < 0 ? cfg.inner_steps : cfg.validation_steps;

    auto params = result.params;
    auto adam = AdamState<float>::zeros(arch);
    const auto t0 = std::chrono::steady_clock::now();
    const auto record_epoch = [&](int epoch, std::int64_t step, double val) {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.log.epochs.push_back({epoch, step, val, wall});
        if (cfg.on_epoch)
            cfg.on_epoch(result.log.epochs.back());
    };

    double best = evaluate_nmse_db(params, coords, val_targets, val_steps, cfg.inner_lr);
    record_epoch(0, 0, best);

    std::vector<std::size_t> order(train_targets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 shuffler(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::int64_t step = 0;
    int since_best = 0;
    std::vector<Matrix<float>> batch_targets;
    std::vector<Vector<float>> batch_codewords;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch)
    {
        std::shuffle(order.begin(), order.end(), shuffler);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size))
        {
            const auto end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            batch_targets.clear();
            batch_codewords.clear();
            try
            {
                for (auto k = start; k < end; ++k)
                {
                    batch_targets.push_back(train_targets[order[k]]);
                    batch_codewords.push_back(
                        inner_adapt(params, coords, batch_targets.back(), cfg.inner_steps, cfg.inner_lr));
                }
                const double loss = outer_step<float>(params, adam, coords, batch_targets, batch_codewords,
                                                      cfg.outer_lr, cfg.grad_clip);
                result.log.steps.push_back({++step, epoch, loss});
            }
            catch (const DivergenceError &e)
            {
                throw DivergenceError("epoch " + std::to_string(epoch) + ", outer step " + std::to_string(step + 1) +
                                      ": " + e.what());
            }
        }

        const double val = evaluate_nmse_db(params, coords, val_targets, val_steps, cfg.inner_lr);
        if (std::isnan(val))
            throw DivergenceError("epoch " + std::to_string(epoch) + ": validation NMSE is NaN");
        record_epoch(epoch, step, val);
        if (val < best)
        {
            best = val;
            result.params = params;
            result.best_epoch = epoch;
            since_best = 0;
        }
        else if (++since_best >= cfg.patience)
            break;
    }
    return result;
}

template Vector<float> inner_adapt(const ModelParams<float> &, const Matrix<float> &, const Matrix<float> &, int, double);
template Vector<double> inner_adapt(const ModelParams<double> &, const Matrix<double> &, const Matrix<double> &, int,
                                    double);
template NetworkWeights<float> outer_gradient(const ModelParams<float> &, const Matrix<float> &,
                                              std::span<const Matrix<float>>, std::span<const Vector<float>>, double *);
template NetworkWeights<double> outer_gradient(const ModelParams<double> &, const Matrix<double> &,
                                               std::span<const Matrix<double>>, std::span<const Vector<double>>,
                                               double *);
template double outer_step(ModelParams<float> &, AdamState<float> &, const Matrix<float> &,
                           std::span<const Matrix<float>>, std::span<const Vector<float>>, double, double);
template double outer_step(ModelParams<double> &, AdamState<double> &, const Matrix<double> &,
                           std::span<const Matrix<double>>, std::span<const Vector<double>>, double, double);

} // namespace csiinr
