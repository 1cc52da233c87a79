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

#include "u2v/mlp.hpp"

#include "json.hpp"

#include <cmath>
#include <stdexcept>

namespace u2v
{

    std::string activation_name(Activation a)
    {
        switch (a)
        {
        case Activation::sigmoid:
            return "sigmoid";
        case Activation::leaky_relu:
            return "leaky_relu";
        case Activation::linear:
            return "linear";
        }
        throw std::logic_error("unknown activation");
    }

    Activation activation_from_name(const std::string &name)
    {
        if (name == "sigmoid")
            return Activation::sigmoid;
        if (name == "leaky_relu")
            return Activation::leaky_relu;
        if (name == "linear")
            return Activation::linear;
        throw std::invalid_argument("unknown activation name: " + name);
    }

    MlpModel make_mlp(const std::vector<int> &dims, const std::vector<Activation> &acts,
                      double leaky_slope)
    {
        if (dims.size() < 2)
            throw std::invalid_argument("make_mlp: need at least input and output dims.");
        if (acts.size() != dims.size() - 1)
            throw std::invalid_argument("make_mlp: one activation per layer transition required.");
        for (int d : dims)
            if (d <= 0)
                throw std::invalid_argument("make_mlp: layer dims must be positive.");

        MlpModel m;
        m.layer_dims = dims;
        m.activations = acts;
        m.leaky_slope = leaky_slope;
        for (std::size_t l = 0; l + 1 < dims.size(); ++l)
        {
            m.weights.emplace_back(Eigen::MatrixXd::Zero(dims[l + 1], dims[l]));
            m.biases.emplace_back(Eigen::VectorXd::Zero(dims[l + 1]));
        }
        return m;
    }

    void init_uniform(MlpModel &m, double lo, double hi, RandomStream &rng)
    {
        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            for (Eigen::Index i = 0; i < m.weights[l].rows(); ++i)
                for (Eigen::Index j = 0; j < m.weights[l].cols(); ++j)
                    m.weights[l](i, j) = rng.uniform(lo, hi);
            for (Eigen::Index i = 0; i < m.biases[l].size(); ++i)
                m.biases[l](i) = rng.uniform(lo, hi);
        }
    }

    void init_xavier(MlpModel &m, RandomStream &rng)
    {
        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            double fan_in = static_cast<double>(m.weights[l].cols());
            double fan_out = static_cast<double>(m.weights[l].rows());
            double bound = std::sqrt(6.0 / (fan_in + fan_out));
            for (Eigen::Index i = 0; i < m.weights[l].rows(); ++i)
                for (Eigen::Index j = 0; j < m.weights[l].cols(); ++j)
                    m.weights[l](i, j) = rng.uniform(-bound, bound);
            m.biases[l].setZero();
        }
    }

    namespace
    {
        inline double act_apply(Activation a, double x, double slope)
        {
            switch (a)
            {
            case Activation::sigmoid:
                return 1.0 / (1.0 + std::exp(-x));
            case Activation::leaky_relu:
                return x > 0.0 ? x : slope * x;
            case Activation::linear:
                return x;
            }
            return x;
        }

        // derivative expressed through the activation value where cheap
        inline double act_deriv(Activation a, double z, double y, double slope)
        {
            switch (a)
            {
            case Activation::sigmoid:
                return y * (1.0 - y);
            case Activation::leaky_relu:
                return z > 0.0 ? 1.0 : slope;
            case Activation::linear:
                return 1.0;
            }
            return 1.0;
        }

        void check_shapes(const MlpModel &m, const Eigen::MatrixXd &x)
        {
            if (m.weights.empty())
                throw std::invalid_argument("network has no layers.");
            if (x.rows() != m.layer_dims.front())
                throw std::invalid_argument("input dimension mismatch.");
        }
    } // namespace

    Eigen::MatrixXd forward(const MlpModel &m, const Eigen::MatrixXd &x)
    {
        check_shapes(m, x);
        Eigen::MatrixXd a = x;
        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            Eigen::MatrixXd z = (m.weights[l] * a).colwise() + m.biases[l];
            for (Eigen::Index i = 0; i < z.size(); ++i)
                z(i) = act_apply(m.activations[l], z(i), m.leaky_slope);
            a = std::move(z);
        }
        return a;
    }

    double forward_scalar(const MlpModel &m, double x)
    {
        if (m.layer_dims.front() != 1 || m.layer_dims.back() != 1)
            throw std::invalid_argument("forward_scalar requires a 1-in / 1-out network.");
        Eigen::MatrixXd in(1, 1);
        in(0, 0) = x;
        return forward(m, in)(0, 0);
    }

    Eigen::MatrixXd forward_cached(const MlpModel &m, const Eigen::MatrixXd &x, MlpCache &cache)
    {
        check_shapes(m, x);
        cache.z.clear();
        cache.a.clear();
        cache.a.push_back(x);
        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            Eigen::MatrixXd z = (m.weights[l] * cache.a.back()).colwise() + m.biases[l];
            Eigen::MatrixXd a = z;
            for (Eigen::Index i = 0; i < a.size(); ++i)
                a(i) = act_apply(m.activations[l], a(i), m.leaky_slope);
            cache.z.push_back(std::move(z));
            cache.a.push_back(std::move(a));
        }
        return cache.a.back();
    }

    MlpGrads zero_grads(const MlpModel &m)
    {
        MlpGrads g;
        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            g.dw.emplace_back(Eigen::MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
            g.db.emplace_back(Eigen::VectorXd::Zero(m.biases[l].size()));
        }
        return g;
    }

    Eigen::MatrixXd backward(const MlpModel &m, const MlpCache &cache,
                             const Eigen::MatrixXd &dout, MlpGrads &grads)
    {
        if (cache.z.size() != m.weights.size())
            throw std::invalid_argument("backward: cache does not match the model.");

        Eigen::MatrixXd da = dout;
        for (std::size_t li = m.weights.size(); li-- > 0;)
        {
            const Eigen::MatrixXd &z = cache.z[li];
            const Eigen::MatrixXd &y = cache.a[li + 1];
            Eigen::MatrixXd dz = da;
            for (Eigen::Index i = 0; i < dz.size(); ++i)
                dz(i) *= act_deriv(m.activations[li], z(i), y(i), m.leaky_slope);

            grads.dw[li] += dz * cache.a[li].transpose();
            grads.db[li] += dz.rowwise().sum();
            da = m.weights[li].transpose() * dz;
        }
        return da;
    }

    AdamState::AdamState(const MlpModel &m)
    {
        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            mw.emplace_back(Eigen::MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
            vw.emplace_back(Eigen::MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
            mb.emplace_back(Eigen::VectorXd::Zero(m.biases[l].size()));
            vb.emplace_back(Eigen::VectorXd::Zero(m.biases[l].size()));
        }
    }

    void AdamState::step(MlpModel &m, const MlpGrads &g, double lr)
    {
        ++steps;
        double c1 = 1.0 - std::pow(beta1, static_cast<double>(steps));
        double c2 = 1.0 - std::pow(beta2, static_cast<double>(steps));
        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            mw[l] = beta1 * mw[l] + (1.0 - beta1) * g.dw[l];
            vw[l] = beta2 * vw[l] + (1.0 - beta2) * g.dw[l].cwiseProduct(g.dw[l]);
            m.weights[l].array() -= lr * (mw[l].array() / c1) / ((vw[l].array() / c2).sqrt() + eps);

            mb[l] = beta1 * mb[l] + (1.0 - beta1) * g.db[l];
            vb[l] = beta2 * vb[l] + (1.0 - beta2) * g.db[l].cwiseProduct(g.db[l]);
            m.biases[l].array() -= lr * (mb[l].array() / c1) / ((vb[l].array() / c2).sqrt() + eps);
        }
    }

    std::string mlp_to_json_string(const MlpModel &m)
    {
        nlohmann::ordered_json j;
        j["kind"] = "mlp";
        j["layer_dims"] = m.layer_dims;
        std::vector<std::string> acts;
        for (Activation a : m.activations)
            acts.push_back(activation_name(a));
        j["activations"] = acts;
        j["leaky_slope"] = m.leaky_slope;

        nlohmann::ordered_json weights = nlohmann::ordered_json::array();
        nlohmann::ordered_json biases = nlohmann::ordered_json::array();
        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            nlohmann::ordered_json wl = nlohmann::ordered_json::array();
            for (Eigen::Index r = 0; r < m.weights[l].rows(); ++r)
            {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (Eigen::Index c = 0; c < m.weights[l].cols(); ++c)
                    row.push_back(m.weights[l](r, c));
                wl.push_back(row);
            }
            weights.push_back(wl);

            nlohmann::ordered_json bl = nlohmann::ordered_json::array();
            for (Eigen::Index r = 0; r < m.biases[l].size(); ++r)
                bl.push_back(m.biases[l](r));
            biases.push_back(bl);
        }
        j["weights"] = weights;
        j["biases"] = biases;
        return j.dump(2);
    }

    MlpModel mlp_from_json_string(const std::string &text)
    {
        nlohmann::json j = nlohmann::json::parse(text);
        if (j.value("kind", "") != "mlp")
            throw std::invalid_argument("not an mlp document.");

        std::vector<int> dims = j.at("layer_dims").get<std::vector<int>>();
        std::vector<Activation> acts;
        for (const auto &name : j.at("activations"))
            acts.push_back(activation_from_name(name.get<std::string>()));

        MlpModel m = make_mlp(dims, acts, j.value("leaky_slope", 0.01));
        const auto &weights = j.at("weights");
        const auto &biases = j.at("biases");
        if (weights.size() != m.weights.size() || biases.size() != m.biases.size())
            throw std::invalid_argument("layer count mismatch in mlp document.");

        for (std::size_t l = 0; l < m.weights.size(); ++l)
        {
            const auto &wl = weights[l];
            if (static_cast<Eigen::Index>(wl.size()) != m.weights[l].rows())
                throw std::invalid_argument("weight row count mismatch in mlp document.");
            for (Eigen::Index r = 0; r < m.weights[l].rows(); ++r)
            {
                const auto &row = wl[r];
                if (static_cast<Eigen::Index>(row.size()) != m.weights[l].cols())
                    throw std::invalid_argument("weight column count mismatch in mlp document.");
                for (Eigen::Index c = 0; c < m.weights[l].cols(); ++c)
                    m.weights[l](r, c) = row[c].get<double>();
            }
            const auto &bl = biases[l];
            if (static_cast<Eigen::Index>(bl.size()) != m.biases[l].size())
                throw std::invalid_argument("bias count mismatch in mlp document.");
            for (Eigen::Index r = 0; r < m.biases[l].size(); ++r)
                m.biases[l](r) = bl[r].get<double>();
        }
        return m;
    }

} // namespace u2v
