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

#ifndef u2v_bpnn_H
#define u2v_bpnn_H

#include "u2v/mlp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace u2v
{

    // Per-path power level predictor: delay in microseconds -> power in dB.
    // One model per propagation condition (direct / reflected).
    struct PowerNet
    {
        MlpModel net; // 1 - 4 - 1 by default, sigmoid hidden, linear output
        std::uint64_t seed = 0;
        int epochs = 0;
        double final_cost = 0.0;
        double final_val_rmse = 0.0;
    };

    // Power in dB for a path delay in microseconds
    double power_db(const PowerNet &model, double delay_us);

    // Bundled reference weights for the urban direct-path and reflected-path
    // power levels (28 GHz air-to-ground fits).
    PowerNet builtin_los_power_net();
    PowerNet builtin_nlos_power_net();

    // Mean squared prediction error plus an L2 weight penalty:
    //   C = (1/L) sum (pred - truth)^2 + (lambda/2) sum ||W||^2
    double power_cost(const MlpModel &net, const std::vector<double> &delays_us,
                      const std::vector<double> &powers_db, double lambda);

    // Gradient of power_cost with respect to every weight and bias
    MlpGrads power_cost_gradients(const MlpModel &net, const std::vector<double> &delays_us,
                                  const std::vector<double> &powers_db, double lambda);

    // Root mean square prediction error, dB
    double power_rmse(const MlpModel &net, const std::vector<double> &delays_us,
                      const std::vector<double> &powers_db);

    struct PowerTrainConfig
    {
        std::vector<int> hidden_dims = {4};
        int epochs = 5000;
        double lr = 0.001;
        double lambda = 0.0;   // L2 penalty weight
        double split = 0.7;    // training fraction
        int batch = 0;         // 0 = full batch
        std::uint64_t seed = 1;
    };

    struct PowerTrainResult
    {
        PowerNet model;
        std::vector<double> cost_history;       // training cost per epoch
        std::vector<double> val_rmse_history;   // validation RMSE per epoch, dB
        std::vector<std::size_t> train_indices; // positions into the input data
        std::vector<std::size_t> val_indices;
        double train_rmse = 0.0;
        double val_rmse = 0.0;
    };

    // Train a power net on (delay_us, power_db) samples. Inputs and targets are
    // standardized internally for conditioning; the affine maps are folded back
    // into the first and last layers, so the returned net operates directly in
    // microseconds and dB. Throws std::runtime_error naming the epoch if the
    // cost turns non-finite.
    PowerTrainResult train_power_net(const std::vector<double> &delays_us,
                                     const std::vector<double> &powers_db,
                                     const PowerTrainConfig &cfg);

    // Serialization, including training metadata
    std::string power_net_to_json_string(const PowerNet &m);
    PowerNet power_net_from_json_string(const std::string &text);

} // namespace u2v

#endif
