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

#ifndef u2v_mlp_H
#define u2v_mlp_H

#include "u2v/rng.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace u2v
{

    enum class Activation
    {
        sigmoid,
        leaky_relu,
        linear
    };

    std::string activation_name(Activation a);
    Activation activation_from_name(const std::string &name);

    // Fully connected feed-forward network. weights[l] maps layer l activations
    // (dims[l]) to layer l+1 pre-activations (dims[l+1]); activations[l] is the
    // nonlinearity applied after that map.
    struct MlpModel
    {
        std::vector<int> layer_dims;
        std::vector<Eigen::MatrixXd> weights;
        std::vector<Eigen::VectorXd> biases;
        std::vector<Activation> activations;
        double leaky_slope = 0.01;
    };

    // Zero-weight model of the given shape
    MlpModel make_mlp(const std::vector<int> &dims, const std::vector<Activation> &acts,
                      double leaky_slope = 0.01);

    // In-place initializers drawing weights and biases from the stream
    void init_uniform(MlpModel &m, double lo, double hi, RandomStream &rng);
    void init_xavier(MlpModel &m, RandomStream &rng);

    // Batch forward pass; x is (in_dim x n), the result (out_dim x n)
    Eigen::MatrixXd forward(const MlpModel &m, const Eigen::MatrixXd &x);

    // Scalar convenience for 1-in / 1-out networks
    double forward_scalar(const MlpModel &m, double x);

    // Forward pass retaining per-layer activations for backpropagation.
    // a[0] is the input; a[l+1] = act(weights[l] a[l] + biases[l]).
    struct MlpCache
    {
        std::vector<Eigen::MatrixXd> z; // pre-activations per layer transition
        std::vector<Eigen::MatrixXd> a; // activations, a[0] = input
    };
    Eigen::MatrixXd forward_cached(const MlpModel &m, const Eigen::MatrixXd &x, MlpCache &cache);

    struct MlpGrads
    {
        std::vector<Eigen::MatrixXd> dw;
        std::vector<Eigen::VectorXd> db;
    };
    MlpGrads zero_grads(const MlpModel &m);

    // Backpropagate dL/d(output); accumulates into grads and returns dL/d(input)
    Eigen::MatrixXd backward(const MlpModel &m, const MlpCache &cache,
                             const Eigen::MatrixXd &dout, MlpGrads &grads);

    // Adam optimizer state over all weights and biases of one model
    struct AdamState
    {
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8;
        long steps = 0;
        std::vector<Eigen::MatrixXd> mw, vw;
        std::vector<Eigen::VectorXd> mb, vb;

        explicit AdamState(const MlpModel &m);
        void step(MlpModel &m, const MlpGrads &g, double lr);
    };

    // Structured-text (JSON) round trip; numbers survive bit-exactly
    std::string mlp_to_json_string(const MlpModel &m);
    MlpModel mlp_from_json_string(const std::string &text);

} // namespace u2v

#endif
