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

#include "u2v/gan.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace u2v
{

    namespace
    {
        constexpr double prob_clamp = 1e-12;

        double clamped(double p)
        {
            // NaN must reach the loss so training can report the failing step
            if (std::isnan(p))
                return p;
            return std::min(1.0 - prob_clamp, std::max(prob_clamp, p));
        }

        // log derivative through the clamp: flat outside the window
        double dlog_clamped(double p)
        {
            return (p > prob_clamp && p < 1.0 - prob_clamp) ? 1.0 / p : 0.0;
        }

        Eigen::MatrixXd noise_matrix(const std::vector<std::vector<double>> &noise, int dim)
        {
            if (noise.empty())
                throw std::invalid_argument("empty noise batch.");
            Eigen::MatrixXd z(dim, noise.size());
            for (std::size_t i = 0; i < noise.size(); ++i)
            {
                if (static_cast<int>(noise[i].size()) != dim)
                    throw std::invalid_argument("noise vector length differs from noise dim.");
                for (int j = 0; j < dim; ++j)
                    z(j, i) = noise[i][j];
            }
            return z;
        }

        Eigen::MatrixXd row_matrix(const std::vector<double> &v)
        {
            Eigen::MatrixXd x(1, v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                x(0, i) = v[i];
            return x;
        }

        void fill_noise(RandomStream &rng, NoiseKind kind, std::vector<double> &z)
        {
            for (double &v : z)
                v = kind == NoiseKind::uniform ? rng.uniform(-1.0, 1.0) : rng.normal();
        }
    } // namespace

    double bce(const GanModel &m, const std::vector<double> &real_batch,
               const std::vector<std::vector<double>> &noise_batch)
    {
        if (real_batch.empty() || noise_batch.empty())
            throw std::invalid_argument("bce needs non-empty batches.");

        Eigen::MatrixXd p_real = forward(m.discriminator, row_matrix(real_batch));
        Eigen::MatrixXd fake = forward(m.generator, noise_matrix(noise_batch, m.noise_dim));
        Eigen::MatrixXd p_fake = forward(m.discriminator, fake);

        double v = 0.0;
        for (int i = 0; i < p_real.cols(); ++i)
            v += std::log(clamped(p_real(0, i)));
        v /= static_cast<double>(p_real.cols());
        double w = 0.0;
        for (int i = 0; i < p_fake.cols(); ++i)
            w += std::log(clamped(1.0 - p_fake(0, i)));
        w /= static_cast<double>(p_fake.cols());
        return v + w;
    }

    MlpGrads bce_disc_gradients(const GanModel &m, const std::vector<double> &real_batch,
                                const std::vector<std::vector<double>> &noise_batch)
    {
        if (real_batch.empty() || noise_batch.empty())
            throw std::invalid_argument("bce needs non-empty batches.");

        MlpGrads g = zero_grads(m.discriminator);

        MlpCache real_cache;
        Eigen::MatrixXd p_real =
            forward_cached(m.discriminator, row_matrix(real_batch), real_cache);
        Eigen::MatrixXd dout_real(1, p_real.cols());
        for (int i = 0; i < p_real.cols(); ++i)
            dout_real(0, i) = dlog_clamped(p_real(0, i)) / static_cast<double>(p_real.cols());
        backward(m.discriminator, real_cache, dout_real, g);

        Eigen::MatrixXd fake = forward(m.generator, noise_matrix(noise_batch, m.noise_dim));
        MlpCache fake_cache;
        Eigen::MatrixXd p_fake = forward_cached(m.discriminator, fake, fake_cache);
        Eigen::MatrixXd dout_fake(1, p_fake.cols());
        for (int i = 0; i < p_fake.cols(); ++i)
            dout_fake(0, i) =
                -dlog_clamped(1.0 - p_fake(0, i)) / static_cast<double>(p_fake.cols());
        backward(m.discriminator, fake_cache, dout_fake, g);
        return g;
    }

    MlpGrads bce_gen_gradients(const GanModel &m,
                               const std::vector<std::vector<double>> &noise_batch)
    {
        if (noise_batch.empty())
            throw std::invalid_argument("bce needs non-empty batches.");

        MlpCache gen_cache;
        Eigen::MatrixXd fake =
            forward_cached(m.generator, noise_matrix(noise_batch, m.noise_dim), gen_cache);
        MlpCache disc_cache;
        Eigen::MatrixXd p_fake = forward_cached(m.discriminator, fake, disc_cache);

        Eigen::MatrixXd dout_fake(1, p_fake.cols());
        for (int i = 0; i < p_fake.cols(); ++i)
            dout_fake(0, i) =
                -dlog_clamped(1.0 - p_fake(0, i)) / static_cast<double>(p_fake.cols());

        MlpGrads disc_scratch = zero_grads(m.discriminator);
        Eigen::MatrixXd dfake =
            backward(m.discriminator, disc_cache, dout_fake, disc_scratch);

        MlpGrads g = zero_grads(m.generator);
        backward(m.generator, gen_cache, dfake, g);
        return g;
    }

    namespace
    {
        MlpGrads negated(MlpGrads g)
        {
            for (auto &w : g.dw)
                w = -w;
            for (auto &b : g.db)
                b = -b;
            return g;
        }
    } // namespace

    GanTrainResult train_gan(const std::vector<double> &offsets, const GanTrainConfig &cfg)
    {
        if (offsets.size() < 100)
            throw std::invalid_argument("gan training needs at least 100 offsets.");
        if (cfg.steps < 1 || cfg.disc_steps < 1)
            throw std::invalid_argument("step counts must be positive.");
        if (cfg.batch < 1)
            throw std::invalid_argument("batch size must be positive.");
        if (cfg.noise_dim < 1)
            throw std::invalid_argument("noise dim must be positive.");

        const std::size_t n = offsets.size();
        RandomStream rng(cfg.seed);

        GanTrainResult out;
        GanModel &m = out.model;
        m.noise = cfg.noise;
        m.noise_dim = cfg.noise_dim;
        m.seed = cfg.seed;
        m.steps = cfg.steps;

        double mean = 0.0;
        for (double x : offsets)
            mean += x;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double x : offsets)
            ss += (x - mean) * (x - mean);
        double sd = std::sqrt(ss / static_cast<double>(n));
        m.data_loc = mean;
        m.data_scale = sd < 1e-12 ? 1.0 : sd;

        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i)
            scaled[i] = (offsets[i] - m.data_loc) / m.data_scale;

        std::vector<int> gen_dims = {cfg.noise_dim};
        for (int h : cfg.gen_hidden)
            gen_dims.push_back(h);
        gen_dims.push_back(1);
        std::vector<Activation> gen_acts(gen_dims.size() - 1, Activation::leaky_relu);
        gen_acts.back() = Activation::linear;
        m.generator = make_mlp(gen_dims, gen_acts, cfg.leaky_slope);
        init_xavier(m.generator, rng);

        std::vector<int> disc_dims = {1};
        for (int h : cfg.disc_hidden)
            disc_dims.push_back(h);
        disc_dims.push_back(1);
        std::vector<Activation> disc_acts(disc_dims.size() - 1, Activation::leaky_relu);
        disc_acts.back() = Activation::sigmoid;
        m.discriminator = make_mlp(disc_dims, disc_acts, cfg.leaky_slope);
        init_xavier(m.discriminator, rng);

        AdamState adam_g(m.generator);
        AdamState adam_d(m.discriminator);
        // low first-moment decay damps the adversarial oscillation that plain
        // momentum amplifies when the two players chase each other
        adam_g.beta1 = 0.5;
        adam_d.beta1 = 0.5;

        // the raw minimax pair orbits the equilibrium instead of settling on
        // it; an averaged snapshot of the generator tracks the orbit center,
        // so the returned model samples from that average
        constexpr double ema_decay = 0.999;
        MlpModel ema = m.generator;

        std::vector<double> real(cfg.batch);
        std::vector<std::vector<double>> noise(cfg.batch,
                                               std::vector<double>(cfg.noise_dim));
        auto draw_batches = [&] {
            for (double &x : real)
                x = scaled[rng.below(n)];
            for (auto &z : noise)
                fill_noise(rng, cfg.noise, z);
        };

        for (int step = 0; step < cfg.steps; ++step)
        {
            for (int k = 0; k < cfg.disc_steps; ++k)
            {
                draw_batches();
                // ascend the value: feed ADAM the negated gradient
                MlpGrads g = negated(bce_disc_gradients(m, real, noise));
                adam_d.step(m.discriminator, g, cfg.lr);
            }

            draw_batches();
            MlpGrads g = bce_gen_gradients(m, noise);
            adam_g.step(m.generator, g, cfg.lr);

            for (std::size_t l = 0; l < ema.weights.size(); ++l)
            {
                ema.weights[l] =
                    ema_decay * ema.weights[l] + (1.0 - ema_decay) * m.generator.weights[l];
                ema.biases[l] =
                    ema_decay * ema.biases[l] + (1.0 - ema_decay) * m.generator.biases[l];
            }

            double v = bce(m, real, noise);
            if (!std::isfinite(v))
                throw std::runtime_error("gan training diverged at step " +
                                         std::to_string(step) + ".");
            out.loss_history.push_back(v);
        }
        m.generator = ema;
        return out;
    }

    std::vector<double> sample_offsets(const GanModel &m, std::size_t n, std::uint64_t seed)
    {
        if (n < 1)
            throw std::invalid_argument("sample count must be positive.");
        RandomStream rng(seed);
        Eigen::MatrixXd z(m.noise_dim, n);
        std::vector<double> buf(m.noise_dim);
        for (std::size_t i = 0; i < n; ++i)
        {
            fill_noise(rng, m.noise, buf);
            for (int j = 0; j < m.noise_dim; ++j)
                z(j, i) = buf[j];
        }
        Eigen::MatrixXd g = forward(m.generator, z);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = m.data_loc + m.data_scale * g(0, i);
        return out;
    }

    FitBaseline fit_baseline(const std::vector<double> &samples, BaselineFamily family)
    {
        if (samples.size() < 2)
            throw std::invalid_argument("baseline fits need at least 2 samples.");
        FitBaseline b;
        b.family = family;
        if (family == BaselineFamily::gaussian)
        {
            double mean = 0.0;
            for (double x : samples)
                mean += x;
            mean /= static_cast<double>(samples.size());
            double ss = 0.0;
            for (double x : samples)
                ss += (x - mean) * (x - mean);
            b.location = mean;
            b.scale = std::sqrt(ss / static_cast<double>(samples.size()));
        }
        else
        {
            std::vector<double> sorted = samples;
            std::sort(sorted.begin(), sorted.end());
            std::size_t h = sorted.size() / 2;
            double median = (sorted.size() % 2 == 1)
                                ? sorted[h]
                                : 0.5 * (sorted[h - 1] + sorted[h]);
            double mad = 0.0;
            for (double x : sorted)
                mad += std::abs(x - median);
            mad /= static_cast<double>(sorted.size());
            b.location = median;
            b.scale = mad;
        }
        if (b.scale <= 0.0)
            throw std::invalid_argument("baseline fit has zero scale.");
        return b;
    }

    double baseline_cdf(const FitBaseline &b, double x)
    {
        double t = x - b.location;
        if (b.family == BaselineFamily::gaussian)
            return 0.5 * (1.0 + std::erf(t / (b.scale * std::sqrt(2.0))));
        return t < 0.0 ? 0.5 * std::exp(t / b.scale) : 1.0 - 0.5 * std::exp(-t / b.scale);
    }

    double ks_two_sample(std::vector<double> a, std::vector<double> b)
    {
        if (a.empty() || b.empty())
            throw std::invalid_argument("ks statistic needs non-empty samples.");
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        double d = 0.0;
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size())
        {
            // advance through every copy of the next value on both sides so
            // ties are compared after the joint step, not mid-step
            double x = (i < a.size() && (j >= b.size() || a[i] <= b[j])) ? a[i] : b[j];
            while (i < a.size() && a[i] == x)
                ++i;
            while (j < b.size() && b[j] == x)
                ++j;
            double fa = static_cast<double>(i) / static_cast<double>(a.size());
            double fb = static_cast<double>(j) / static_cast<double>(b.size());
            d = std::max(d, std::abs(fa - fb));
        }
        return d;
    }

    double ks_against_baseline(std::vector<double> samples, const FitBaseline &b)
    {
        if (samples.empty())
            throw std::invalid_argument("ks statistic needs non-empty samples.");
        std::sort(samples.begin(), samples.end());
        double d = 0.0;
        double n = static_cast<double>(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            double f = baseline_cdf(b, samples[i]);
            d = std::max(d, std::abs(f - static_cast<double>(i) / n));
            d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        }
        return d;
    }

    std::string gan_to_json_string(const GanModel &m)
    {
        nlohmann::ordered_json j;
        j["kind"] = "gan";
        j["schema_version"] = 1;
        j["noise"] = m.noise == NoiseKind::uniform ? "uniform" : "normal";
        j["noise_dim"] = m.noise_dim;
        j["data_loc"] = m.data_loc;
        j["data_scale"] = m.data_scale;
        j["seed"] = m.seed;
        j["steps"] = m.steps;
        j["generator"] = nlohmann::ordered_json::parse(mlp_to_json_string(m.generator));
        j["discriminator"] =
            nlohmann::ordered_json::parse(mlp_to_json_string(m.discriminator));
        return j.dump(2);
    }

    GanModel gan_from_json_string(const std::string &text)
    {
        nlohmann::json j = nlohmann::json::parse(text);
        if (j.value("kind", "") != "gan")
            throw std::invalid_argument("not a gan document.");
        GanModel m;
        std::string noise = j.value("noise", "normal");
        if (noise == "uniform")
            m.noise = NoiseKind::uniform;
        else if (noise == "normal")
            m.noise = NoiseKind::normal;
        else
            throw std::invalid_argument("unknown noise kind: " + noise + ".");
        m.noise_dim = j.value("noise_dim", 8);
        if (m.noise_dim < 1)
            throw std::invalid_argument("noise dim must be positive.");
        m.data_loc = j.value("data_loc", 0.0);
        m.data_scale = j.value("data_scale", 1.0);
        m.seed = j.value("seed", 0ull);
        m.steps = j.value("steps", 0);
        m.generator = mlp_from_json_string(j.at("generator").dump());
        m.discriminator = mlp_from_json_string(j.at("discriminator").dump());
        if (m.generator.layer_dims.front() != m.noise_dim)
            throw std::invalid_argument("generator input dim differs from noise dim.");
        return m;
    }

} // namespace u2v
