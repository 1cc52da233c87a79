// u2vsim UAV-to-vehicle mmWave channel simulator
// Copyright (C) 2026 u2vsim project
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

#ifndef u2v_gan_H
#define u2v_gan_H

#include "u2v/mlp.hpp"
#include "u2v/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace u2v
{

    enum class NoiseKind
    {
        uniform, // U(-1, 1) per component
        normal   // standard normal per component
    };

    // Generator/discriminator pair over scalar angle offsets. The generator
    // maps a noise vector to one offset in radians; the discriminator maps an
    // offset to a logit whose sigmoid is the probability of "real".
    struct GanModel
    {
        MlpModel generator;     // noise_dim -> ... -> 1, linear output
        MlpModel discriminator; // 1 -> ... -> 1, sigmoid output
        NoiseKind noise = NoiseKind::normal;
        int noise_dim = 8;
        // training data location/scale; the generator works in scaled space
        double data_loc = 0.0;
        double data_scale = 1.0;
        std::uint64_t seed = 0;
        int steps = 0;
    };

    // Binary cross entropy value played over one real and one noise batch:
    //   E[log d(x_real)] + E[log(1 - d(g(z)))]
    // Discriminator outputs are clamped to [1e-12, 1 - 1e-12] before the logs.
    double bce(const GanModel &m, const std::vector<double> &real_batch,
               const std::vector<std::vector<double>> &noise_batch);

    // Gradients of the bce value with respect to each player's parameters
    MlpGrads bce_disc_gradients(const GanModel &m, const std::vector<double> &real_batch,
                                const std::vector<std::vector<double>> &noise_batch);
    MlpGrads bce_gen_gradients(const GanModel &m,
                               const std::vector<std::vector<double>> &noise_batch);

    struct GanTrainConfig
    {
        std::vector<int> gen_hidden = {32, 32};
        std::vector<int> disc_hidden = {32, 32};
        NoiseKind noise = NoiseKind::normal;
        int noise_dim = 8;
        int steps = 20000;        // generator updates
        int disc_steps = 1;       // discriminator updates per generator update
        double lr = 2e-4;
        int batch = 256;
        double leaky_slope = 0.2;
        std::uint64_t seed = 1;
    };

    struct GanTrainResult
    {
        GanModel model;
        std::vector<double> loss_history; // BCE after each generator step
    };

    // Alternating minimax training over scalar offsets
    GanTrainResult train_gan(const std::vector<double> &offsets, const GanTrainConfig &cfg);

    // n generator evaluations on seeded noise, in radians
    std::vector<double> sample_offsets(const GanModel &m, std::size_t n, std::uint64_t seed);

    enum class BaselineFamily
    {
        gaussian,
        laplacian
    };

    struct FitBaseline
    {
        BaselineFamily family = BaselineFamily::gaussian;
        double location = 0.0;
        double scale = 1.0;
    };

    // Maximum-likelihood fit: Gaussian mean/std (population), Laplacian
    // median/mean-absolute-deviation
    FitBaseline fit_baseline(const std::vector<double> &samples, BaselineFamily family);

    double baseline_cdf(const FitBaseline &b, double x);

    // Two-sample Kolmogorov-Smirnov statistic
    double ks_two_sample(std::vector<double> a, std::vector<double> b);

    // One-sample Kolmogorov-Smirnov statistic against a fitted baseline
    double ks_against_baseline(std::vector<double> samples, const FitBaseline &b);

    // Model document round trip (same format family as the power nets)
    std::string gan_to_json_string(const GanModel &m);
    GanModel gan_from_json_string(const std::string &text);

} // namespace u2v

#endif
