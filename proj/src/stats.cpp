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

#include "u2v/stats.hpp"

#include "u2v/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace u2v
{

    namespace
    {
        constexpr double time_tol = 1e-9; // snapshot lookup tolerance, s

        std::size_t index_of_time(const PairCir &channel, double t, const char *what)
        {
            const auto &snaps = channel.snapshots;
            std::size_t lo = 0, hi = snaps.size();
            while (lo < hi)
            {
                std::size_t mid = (lo + hi) / 2;
                if (snaps[mid].t < t)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            for (std::size_t cand : {lo == 0 ? lo : lo - 1, lo})
                if (cand < snaps.size() && std::abs(snaps[cand].t - t) <= time_tol)
                    return cand;
            throw std::invalid_argument(std::string(what) + " " + std::to_string(t) +
                                        " s is not on the snapshot grid.");
        }

        void validate(const PairCir &channel, const StatsConfig &cfg)
        {
            if (channel.snapshots.empty())
                throw std::invalid_argument("channel has no snapshots.");
            if (channel.carrier_hz <= 0.0)
                throw std::invalid_argument("channel carrier frequency must be positive.");
            if (cfg.ensemble < 1)
                throw std::invalid_argument("ensemble size must be positive.");
        }

        // One Monte Carlo member of the transfer function at cfg.freq_hz, with
        // each ray rotated by the member's re-randomization phase and, when
        // displaced, by its antenna spacing phase.
        Complex member_field(const CirSnapshot &snap, const Vec3 &dd_tx, const Vec3 &dd_rx,
                             bool displaced, const Mat3 &attitude, double f0, int member,
                             const StatsConfig &cfg)
        {
            Complex h{0.0, 0.0};
            for (const PathSnapshot &path : snap.paths)
            {
                RandomStream chi = RandomStream::substream(
                    cfg.seed, {static_cast<std::uint64_t>(member),
                               static_cast<std::uint64_t>(path.path_id)});
                Complex sum{0.0, 0.0};
                for (const Ray &ray : path.rays)
                {
                    double extra = chi.uniform(-pi, pi);
                    if (displaced)
                        extra += rotation_phase(ray.angles, snap.rv_tx, attitude,
                                                snap.rv_rx, dd_tx, dd_rx, f0);
                    sum += ray.phasor * Complex{std::cos(extra), std::sin(extra)};
                }
                double arg = -2.0 * pi * cfg.freq_hz * path.delay_s;
                h += std::sqrt(path.power_lin / static_cast<double>(path.rays.size())) *
                     sum * Complex{std::cos(arg), std::sin(arg)};
            }
            return h;
        }
    } // namespace

    std::vector<std::pair<double, double>> pdp(const CirSnapshot &snapshot)
    {
        std::vector<std::pair<double, double>> out;
        out.reserve(snapshot.paths.size());
        for (const PathSnapshot &path : snapshot.paths)
            out.emplace_back(path.delay_s, path.power_lin);
        return out;
    }

    StcfResult stcf(const PairCir &channel, double t, const std::vector<double> &dt_grid,
                    const SpacingGrid &spacing, const Mat3 &attitude, const StatsConfig &cfg)
    {
        validate(channel, cfg);
        if (dt_grid.empty() || spacing.lags.empty())
            throw std::invalid_argument("correlation grids must be non-empty.");

        const double lambda = speed_of_light / channel.carrier_hz;
        const std::size_t ref = index_of_time(channel, t, "reference time");
        const CirSnapshot &a_snap = channel.snapshots[ref];

        std::vector<Complex> a(cfg.ensemble);
        double energy_a = 0.0;
        for (int e = 0; e < cfg.ensemble; ++e)
        {
            a[e] = member_field(a_snap, Vec3::Zero(), Vec3::Zero(), false, attitude,
                                channel.carrier_hz, e, cfg);
            energy_a += std::norm(a[e]);
        }

        StcfResult out;
        out.dt = dt_grid;
        out.lags = spacing.lags;
        out.rho.resize(dt_grid.size());

        const std::size_t n_lags = spacing.lags.size();
        for (std::size_t i = 0; i < dt_grid.size(); ++i)
        {
            const std::size_t bi = index_of_time(channel, t + dt_grid[i], "displaced time");
            const CirSnapshot &b_snap = channel.snapshots[bi];
            out.rho[i].assign(n_lags, Complex{0.0, 0.0});

            // spacing phase is linear in the lag: precompute per-ray phasors
            // for every lag once, then sweep members with plain products
            std::size_t n_rays = 0;
            for (const PathSnapshot &path : b_snap.paths)
                n_rays += path.rays.size();
            std::vector<Complex> shift(n_lags * n_rays);
            {
                std::size_t r = 0;
                for (const PathSnapshot &path : b_snap.paths)
                    for (const Ray &ray : path.rays)
                    {
                        double grad = rotation_phase(ray.angles, b_snap.rv_tx, attitude,
                                                     b_snap.rv_rx, lambda * spacing.dir_tx,
                                                     lambda * spacing.dir_rx,
                                                     channel.carrier_hz);
                        for (std::size_t j = 0; j < n_lags; ++j)
                        {
                            double arg = spacing.lags[j] * grad;
                            shift[j * n_rays + r] = Complex{std::cos(arg), std::sin(arg)};
                        }
                        ++r;
                    }
            }

            std::vector<Complex> num(n_lags, Complex{0.0, 0.0});
            std::vector<double> energy_b(n_lags, 0.0);
            std::vector<Complex> base(n_rays);
            std::vector<double> scale;
            std::vector<Complex> delay;
            for (const PathSnapshot &path : b_snap.paths)
            {
                scale.push_back(std::sqrt(path.power_lin /
                                          static_cast<double>(path.rays.size())));
                double arg = -2.0 * pi * cfg.freq_hz * path.delay_s;
                delay.push_back(Complex{std::cos(arg), std::sin(arg)});
            }

            for (int e = 0; e < cfg.ensemble; ++e)
            {
                std::size_t r = 0, pi_idx = 0;
                for (const PathSnapshot &path : b_snap.paths)
                {
                    RandomStream chi = RandomStream::substream(
                        cfg.seed, {static_cast<std::uint64_t>(e),
                                   static_cast<std::uint64_t>(path.path_id)});
                    Complex w = scale[pi_idx] * delay[pi_idx];
                    for (const Ray &ray : path.rays)
                    {
                        double x = chi.uniform(-pi, pi);
                        base[r++] = w * ray.phasor * Complex{std::cos(x), std::sin(x)};
                    }
                    ++pi_idx;
                }
                for (std::size_t j = 0; j < n_lags; ++j)
                {
                    Complex b{0.0, 0.0};
                    const Complex *row = shift.data() + j * n_rays;
                    for (std::size_t k = 0; k < n_rays; ++k)
                        b += base[k] * row[k];
                    num[j] += std::conj(a[e]) * b;
                    energy_b[j] += std::norm(b);
                }
            }

            for (std::size_t j = 0; j < n_lags; ++j)
            {
                if (dt_grid[i] == 0.0 && spacing.lags[j] == 0.0)
                {
                    // definitional normalization point
                    out.rho[i][j] = a_snap.paths.empty() ? Complex{0.0, 0.0}
                                                         : Complex{1.0, 0.0};
                    continue;
                }
                double den = std::sqrt(energy_a * energy_b[j]);
                out.rho[i][j] = den > 0.0 ? num[j] / den : Complex{0.0, 0.0};
            }
        }
        return out;
    }

    std::vector<Complex> acf(const PairCir &channel, double t,
                             const std::vector<double> &dt_grid, const StatsConfig &cfg)
    {
        SpacingGrid zero;
        zero.dir_tx = Vec3::Zero();
        zero.lags = {0.0};
        StcfResult s = stcf(channel, t, dt_grid, zero, Mat3::Identity(), cfg);
        std::vector<Complex> out(dt_grid.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = s.rho[i][0];
        return out;
    }

    std::vector<double> ccf(const PairCir &channel, double t, const SpacingGrid &spacing,
                            const Mat3 &attitude, const StatsConfig &cfg)
    {
        StcfResult s = stcf(channel, t, {0.0}, spacing, attitude, cfg);
        std::vector<double> out(spacing.lags.size());
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = s.rho[0][j].real();
        return out;
    }

    DpsdResult dpsd(const PairCir &channel, double t_center, double window_s, int nfft)
    {
        validate(channel, StatsConfig{});
        if (window_s <= 0.0)
            throw std::invalid_argument("window length must be positive.");

        const std::size_t center = index_of_time(channel, t_center, "center time");
        const auto &snaps = channel.snapshots;
        if (snaps.size() < 3)
            throw std::invalid_argument("spectrum needs at least three snapshots.");

        const double dt = center + 1 < snaps.size()
                              ? snaps[center + 1].t - snaps[center].t
                              : snaps[center].t - snaps[center - 1].t;
        const int half = static_cast<int>(std::floor(window_s / (2.0 * dt) + time_tol));
        if (half < 1)
            throw std::invalid_argument("window spans fewer than three snapshots.");
        if (static_cast<int>(center) - half < 0 ||
            center + static_cast<std::size_t>(half) >= snaps.size())
            throw std::invalid_argument("window leaves the simulated span.");
        if (nfft < 2 * half + 1)
            throw std::invalid_argument("fft size is smaller than the window.");

        double bound = 0.0;
        for (int k = -half; k <= half; ++k)
        {
            const CirSnapshot &s = snaps[center + k];
            if (k > -half)
            {
                double step = s.t - snaps[center + k - 1].t;
                if (std::abs(step - dt) > time_tol)
                    throw std::invalid_argument("window requires a uniform snapshot grid.");
            }
            bound = std::max(bound, s.doppler_bound_hz);
        }

        // un-normalized correlation against the center snapshot; random initial
        // phases cancel on the ray diagonal and every cross term has zero mean
        const CirSnapshot &ctr = snaps[center];
        std::vector<Complex> corr(2 * half + 1);
        for (int k = -half; k <= half; ++k)
        {
            const CirSnapshot &other = snaps[center + k];
            Complex num{0.0, 0.0};
            for (const PathSnapshot &pa : ctr.paths)
                for (const PathSnapshot &pb : other.paths)
                {
                    if (pb.path_id != pa.path_id)
                        continue;
                    std::size_t m = std::min(pa.rays.size(), pb.rays.size());
                    Complex rays{0.0, 0.0};
                    for (std::size_t r = 0; r < m; ++r)
                        rays += std::conj(pa.rays[r].phasor) * pb.rays[r].phasor;
                    num += std::sqrt(pa.power_lin * pb.power_lin) /
                           static_cast<double>(m) * rays;
                }
            double hann = 0.5 * (1.0 + std::cos(pi * k / static_cast<double>(half)));
            corr[k + half] = hann * num;
        }

        DpsdResult out;
        out.aliasing_risk = 1.0 / dt < 2.0 * bound;
        out.freq_hz.resize(nfft);
        out.power.resize(nfft);
        for (int j = 0; j < nfft; ++j)
        {
            int bin = j - nfft / 2;
            Complex s{0.0, 0.0};
            for (int k = -half; k <= half; ++k)
            {
                double arg = -2.0 * pi * bin * k / static_cast<double>(nfft);
                s += corr[k + half] * Complex{std::cos(arg), std::sin(arg)};
            }
            out.freq_hz[j] = bin / (nfft * dt);
            out.power[j] = std::abs(s) * dt;
        }
        return out;
    }

} // namespace u2v
