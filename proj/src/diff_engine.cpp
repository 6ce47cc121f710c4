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

#include "csiinr/diff_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csiinr
{

namespace
{

template <typename Scalar>
void check_shapes(const ModelParams<Scalar> &params, const Vector<Scalar> &codeword, const Matrix<Scalar> &coords)
{
    const auto &arch = params.arch;
    if (codeword.size() != arch.codeword_dim)
        throw std::invalid_argument("codeword length " + std::to_string(codeword.size()) + " does not match n = " +
                                    std::to_string(arch.codeword_dim));
    if (coords.rows() != 2)
        throw std::invalid_argument("coordinates must be a 2 x K matrix");
    if (params.fourier.rows() != arch.hidden_dim || params.fourier.cols() != 2 ||
        static_cast<int>(params.net.layers.size()) != arch.num_layers || params.net.out_weight.rows() != 2 ||
        params.net.out_weight.cols() != arch.hidden_dim)
        throw std::invalid_argument("model parameters do not match their architecture");
}

template <typename Scalar>
Matrix<Scalar> fourier_features(const ModelParams<Scalar> &params, const Matrix<Scalar> &coords)
{
    const auto d = params.arch.hidden_dim;
    const Matrix<Scalar> proj = (Scalar(2) * std::numbers::pi_v<Scalar>) * (params.fourier * coords);
    Matrix<Scalar> features(2 * d, coords.cols());
    features.topRows(d) = proj.array().cos().matrix();
    features.bottomRows(d) = proj.array().sin().matrix();
    return features;
}

template <typename Scalar>
Matrix<Scalar> modulated_layer(const ModulatedLayer<Scalar> &layer, const Vector<Scalar> &scale,
                               const Vector<Scalar> &shift, const Matrix<Scalar> &input, Matrix<Scalar> &pre,
                               Matrix<Scalar> &modulated, Scalar omega0)
{
    pre.noalias() = layer.weight * input;
    pre.colwise() += layer.bias;
    modulated = (pre.array().colwise() * scale.array()).colwise() + shift.array();
    return (omega0 * modulated.array()).sin().matrix();
}

template <typename Scalar>
GradientBundle<Scalar> backward(const ActivationTape<Scalar> &tape, const ModelParams<Scalar> &params,
                                const Matrix<Scalar> &targets, bool want_params)
{
    const auto &arch = params.arch;
    const auto L = static_cast<std::size_t>(arch.num_layers);
    const auto K = tape.output.cols();
    if (tape.pre.size() != L || tape.post.size() != L || tape.codeword.size() != arch.codeword_dim ||
        tape.fourier_features.rows() != 2 * arch.hidden_dim || targets.rows() != 2 || targets.cols() != K ||
        (L > 0 && tape.pre.front().rows() != arch.hidden_dim))
        throw std::invalid_argument("activation tape does not match parameters or targets (stale tape)");

    const Scalar omega0 = static_cast<Scalar>(arch.omega0);
    const Matrix<Scalar> residual = tape.output - targets;

    GradientBundle<Scalar> g;
    g.loss = residual.squaredNorm() / static_cast<Scalar>(K);
    g.grad_codeword = Vector<Scalar>::Zero(arch.codeword_dim);

    const Matrix<Scalar> d_out = (Scalar(2) / static_cast<Scalar>(K)) * residual;
    NetworkWeights<Scalar> grads;
    if (want_params)
    {
        grads.layers.resize(L);
        grads.out_weight.noalias() = d_out * tape.post.back().transpose();
        grads.out_bias = d_out.rowwise().sum();
    }

    Matrix<Scalar> d_post = params.net.out_weight.transpose() * d_out;
    Matrix<Scalar> d_pre;
    for (std::size_t i = L; i-- > 0;)
    {
        const auto &layer = params.net.layers[i];
        const Matrix<Scalar> d_mod = d_post.cwiseProduct((omega0 * tape.modulated[i].array()).cos().matrix() * omega0);
        const Vector<Scalar> d_scale = d_mod.cwiseProduct(tape.pre[i]).rowwise().sum();
        const Vector<Scalar> d_shift = d_mod.rowwise().sum();
        d_pre = d_mod.array().colwise() * tape.scales[i].array();

        g.grad_codeword.noalias() += layer.scale_weight.transpose() * d_scale;
        g.grad_codeword.noalias() += layer.shift_weight.transpose() * d_shift;

        if (want_params)
        {
            auto &gl = grads.layers[i];
            const auto &input = i == 0 ? tape.fourier_features : tape.post[i - 1];
            gl.weight.noalias() = d_pre * input.transpose();
            gl.bias = d_pre.rowwise().sum();
            gl.scale_weight.noalias() = d_scale * tape.codeword.transpose();
            gl.scale_bias = d_scale;
            gl.shift_weight.noalias() = d_shift * tape.codeword.transpose();
            gl.shift_bias = d_shift;
        }
        if (i > 0)
            d_post.noalias() = layer.weight.transpose() * d_pre;
    }

    if (want_params)
        g.grad_params = std::move(grads);
    return g;
}

} // namespace

template <typename Scalar>
std::pair<std::vector<Vector<Scalar>>, std::vector<Vector<Scalar>>> modulations(const ModelParams<Scalar> &params,
                                                                                const Vector<Scalar> &codeword)
{
    std::vector<Vector<Scalar>> scales, shifts;
    for (const auto &layer : params.net.layers)
    {
        scales.push_back(layer.scale_weight * codeword + layer.scale_bias);
        shifts.push_back(layer.shift_weight * codeword + layer.shift_bias);
    }
    return {std::move(scales), std::move(shifts)};
}

template <typename Scalar>
Matrix<Scalar> predict(const ModelParams<Scalar> &params, const Vector<Scalar> &codeword, const Matrix<Scalar> &coords)
{
    check_shapes(params, codeword, coords);
    const auto [scales, shifts] = modulations(params, codeword);
    const Scalar omega0 = static_cast<Scalar>(params.arch.omega0);
    Matrix<Scalar> features = fourier_features(params, coords);
    Matrix<Scalar> pre, modulated;
    for (std::size_t i = 0; i < params.net.layers.size(); ++i)
        features = modulated_layer(params.net.layers[i], scales[i], shifts[i], features, pre, modulated, omega0);
    Matrix<Scalar> out = params.net.out_weight * features;
    out.colwise() += params.net.out_bias;
    return out;
}

template <typename Scalar>
ActivationTape<Scalar> forward(const ModelParams<Scalar> &params, const Vector<Scalar> &codeword,
                               const Matrix<Scalar> &coords)
{
    check_shapes(params, codeword, coords);
    const auto L = params.net.layers.size();
    const Scalar omega0 = static_cast<Scalar>(params.arch.omega0);

    ActivationTape<Scalar> tape;
    tape.codeword = codeword;
    std::tie(tape.scales, tape.shifts) = modulations(params, codeword);
    tape.fourier_features = fourier_features(params, coords);
    tape.pre.resize(L);
    tape.modulated.resize(L);
    tape.post.resize(L);
    for (std::size_t i = 0; i < L; ++i)
    {
        const auto &input = i == 0 ? tape.fourier_features : tape.post[i - 1];
        tape.post[i] = modulated_layer(params.net.layers[i], tape.scales[i], tape.shifts[i], input, tape.pre[i],
                                       tape.modulated[i], omega0);
    }
    const auto &last = L == 0 ? tape.fourier_features : tape.post.back();
    tape.output = params.net.out_weight * last;
    tape.output.colwise() += params.net.out_bias;
    return tape;
}

template <typename Scalar>
Scalar loss_mse(const Matrix<Scalar> &predictions, const Matrix<Scalar> &targets)
{
    if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols())
        throw std::invalid_argument("loss_mse: prediction and target shapes differ");
    if (predictions.cols() == 0)
        return Scalar(0);
    return (predictions - targets).squaredNorm() / static_cast<Scalar>(predictions.cols());
}

template <typename Scalar>
Scalar batch_loss_mse(std::span<const Matrix<Scalar>> predictions, std::span<const Matrix<Scalar>> targets)
{
    if (predictions.size() != targets.size())
        throw std::invalid_argument("batch_loss_mse: batch sizes differ");
    if (predictions.empty())
        return Scalar(0);
    Scalar total = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        total += loss_mse(predictions[i], targets[i]);
    return total / static_cast<Scalar>(predictions.size());
}

template <typename Scalar>
GradientBundle<Scalar> backward_codeword(const ActivationTape<Scalar> &tape, const ModelParams<Scalar> &params,
                                         const Matrix<Scalar> &targets)
{
    return backward(tape, params, targets, false);
}

template <typename Scalar>
GradientBundle<Scalar> backward_params(const ActivationTape<Scalar> &tape, const ModelParams<Scalar> &params,
                                       const Matrix<Scalar> &targets)
{
    return backward(tape, params, targets, true);
}

double FiniteDiffReport::max_rel_error() const
{
    double worst = 0.0;
    for (const auto &b : blocks)
        worst = std::max(worst, b.max_rel_error);
    return worst;
}

namespace
{

// Fourth-order central stencil on +-h, +-2h. With omega0 = 50 the plain two-point rule leaves a
// truncation error of order h^2 omega0^3, which swamps small gradient entries.
template <typename Fn>
double central_difference(double h, Fn &&loss_at)
{
    const long double f1 = loss_at(h) - loss_at(-h);
    const long double f2 = loss_at(2 * h) - loss_at(-2 * h);
    return static_cast<double>((8 * f1 - f2) / (12 * static_cast<long double>(h)));
}

} // namespace

FiniteDiffReport finite_diff_check(const ModelParams<double> &params, const Vector<double> &codeword,
                                   const Matrix<double> &coords, const Matrix<double> &targets, double h)
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("finite_diff_check: step h must be positive");

    const auto analytic = backward_params(forward(params, codeword, coords), params, targets);
    const auto rel_error = [](double a, double n) { return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-12}); };

    // Entries that disagree in double are re-evaluated with long double losses, so that forward
    // roundoff cannot masquerade as a gradient error on tiny entries.
    using Wide = long double;
    constexpr double refine_above = 1e-6;
    ModelParams<double> work = params;
    ModelParams<Wide> wide = params.cast<Wide>();
    const Matrix<Wide> wide_coords = coords.cast<Wide>();
    const Matrix<Wide> wide_targets = targets.cast<Wide>();

    FiniteDiffReport report;
    {
        FiniteDiffReport::Block block{"codeword", 0.0, static_cast<std::size_t>(codeword.size())};
        Vector<double> probe = codeword;
        Vector<Wide> wide_probe = codeword.cast<Wide>();
        for (Eigen::Index k = 0; k < probe.size(); ++k)
        {
            const double saved = probe[k];
            double err = rel_error(analytic.grad_codeword[k], central_difference(h, [&](double offset) {
                                       probe[k] = saved + offset;
                                       return loss_mse(predict(params, probe, coords), targets);
                                   }));
            probe[k] = saved;
            if (err > refine_above)
            {
                err = rel_error(analytic.grad_codeword[k], central_difference(h, [&](double offset) {
                                    wide_probe[k] = Wide(saved) + offset;
                                    return loss_mse(predict(wide, wide_probe, wide_coords), wide_targets);
                                }));
                wide_probe[k] = saved;
            }
            block.max_rel_error = std::max(block.max_rel_error, err);
        }
        report.blocks.push_back(block);
    }

    std::vector<std::string> names;
    for (std::size_t i = 0; i < params.net.layers.size(); ++i)
        for (const char *field : {"weight", "bias", "scale_weight", "scale_bias", "shift_weight", "shift_bias"})
            names.push_back("layer" + std::to_string(i) + "." + field);
    names.emplace_back("out_weight");
    names.emplace_back("out_bias");

    const Vector<Wide> wide_codeword = codeword.cast<Wide>();
    std::size_t index = 0;
    for_each_block(
        [&](auto &block, auto &wide_block, const auto &grad) {
            FiniteDiffReport::Block entry{names[index++], 0.0, static_cast<std::size_t>(block.size())};
            for (Eigen::Index k = 0; k < block.size(); ++k)
            {
                const double saved = block.data()[k];
                double err = rel_error(grad.data()[k], central_difference(h, [&](double offset) {
                                           block.data()[k] = saved + offset;
                                           return loss_mse(predict(work, codeword, coords), targets);
                                       }));
                block.data()[k] = saved;
                if (err > refine_above)
                {
                    err = rel_error(grad.data()[k], central_difference(h, [&](double offset) {
                                        wide_block.data()[k] = Wide(saved) + offset;
                                        return loss_mse(predict(wide, wide_codeword, wide_coords), wide_targets);
                                    }));
                    wide_block.data()[k] = saved;
                }
                entry.max_rel_error = std::max(entry.max_rel_error, err);
            }
            report.blocks.push_back(entry);
        },
        work.net, wide.net, *analytic.grad_params);
    return report;
}

#define CSIINR_INSTANTIATE(Scalar)                                                                                    \
    template std::pair<std::vector<Vector<Scalar>>, std::vector<Vector<Scalar>>> modulations(                         \
        const ModelParams<Scalar> &, const Vector<Scalar> &);                                                         \
    template Matrix<Scalar> predict(const ModelParams<Scalar> &, const Vector<Scalar> &, const Matrix<Scalar> &);     \
    template ActivationTape<Scalar> forward(const ModelParams<Scalar> &, const Vector<Scalar> &,                      \
                                            const Matrix<Scalar> &);                                                  \
    template Scalar loss_mse(const Matrix<Scalar> &, const Matrix<Scalar> &);                                         \
    template Scalar batch_loss_mse(std::span<const Matrix<Scalar>>, std::span<const Matrix<Scalar>>);                 \
    template GradientBundle<Scalar> backward_codeword(const ActivationTape<Scalar> &, const ModelParams<Scalar> &,     \
                                                      const Matrix<Scalar> &);                                        \
    template GradientBundle<Scalar> backward_params(const ActivationTape<Scalar> &, const ModelParams<Scalar> &,       \
                                                    const Matrix<Scalar> &);

CSIINR_INSTANTIATE(float)
CSIINR_INSTANTIATE(double)

#undef CSIINR_INSTANTIATE

} // namespace csiinr
