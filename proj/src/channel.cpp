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

#include "u2v/channel.hpp"

#include "u2v/rng.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace u2v
{

    Complex path_coefficient(const PathSnapshot &path)
    {
        if (path.rays.empty())
            return {0.0, 0.0};
        Complex sum{0.0, 0.0};
        for (const Ray &ray : path.rays)
            sum += ray.phasor;
        return sum / std::sqrt(static_cast<double>(path.rays.size()));
    }

    Complex transfer_function(const CirSnapshot &snapshot, double f_hz)
    {
        Complex h{0.0, 0.0};
        for (const PathSnapshot &path : snapshot.paths)
        {
            double arg = -2.0 * pi * f_hz * path.delay_s;
            h += std::sqrt(path.power_lin) * path_coefficient(path) *
                 Complex{std::cos(arg), std::sin(arg)};
        }
        return h;
    }

    namespace
    {
        // Per-ray state a path carries while it lives
        struct PathState
        {
            std::vector<double> psi_i;      // initial phases
            std::vector<double> phase_move; // accumulated Doppler phase
            std::vector<double> last_freq;  // Doppler at the previous snapshot
            std::vector<double> off_aaod, off_eaod, off_aaoa, off_eaoa;
        };

        PathState born_state(const PathGeometry &path, int rays, std::uint64_t seed,
                             int birth, const GanModel &gan_azimuth,
                             const GanModel &gan_elevation)
        {
            std::uint64_t pid = static_cast<std::uint64_t>(path.path_id);
            std::uint64_t b = static_cast<std::uint64_t>(birth);

            PathState st;
            st.psi_i.resize(rays);
            RandomStream rng = RandomStream::substream(seed, {pid, b, 0});
            for (double &psi : st.psi_i)
                psi = rng.uniform(-pi, pi);

            st.phase_move.assign(rays, 0.0);
            st.last_freq.assign(rays, 0.0);

            if (path.kind == PathKind::los)
            {
                st.off_aaod.assign(rays, 0.0);
                st.off_eaod.assign(rays, 0.0);
                st.off_aaoa.assign(rays, 0.0);
                st.off_eaoa.assign(rays, 0.0);
                return st;
            }

            // departure offsets fill the first half of each draw, arrival the rest
            std::size_t m = static_cast<std::size_t>(rays);
            std::vector<double> az =
                sample_offsets(gan_azimuth, 2 * m, derive_seed(seed, {pid, b, 1}));
            std::vector<double> el =
                sample_offsets(gan_elevation, 2 * m, derive_seed(seed, {pid, b, 2}));
            st.off_aaod.assign(az.begin(), az.begin() + m);
            st.off_aaoa.assign(az.begin() + m, az.end());
            st.off_eaod.assign(el.begin(), el.begin() + m);
            st.off_eaoa.assign(el.begin() + m, el.end());
            return st;
        }
    } // namespace

    std::vector<PairCir> build_cir(const Scenario &scenario, const PowerNet &los_net,
                                   const PowerNet &nlos_net, const GanModel &gan_azimuth,
                                   const GanModel &gan_elevation,
                                   const std::vector<double> &t_grid, std::uint64_t seed)
    {
        if (t_grid.empty())
            throw std::invalid_argument("time grid must be non-empty.");
        for (std::size_t i = 1; i < t_grid.size(); ++i)
            if (t_grid[i] <= t_grid[i - 1])
                throw std::invalid_argument("time grid must be strictly ascending.");
        if (scenario.carrier_hz <= 0.0)
            throw std::invalid_argument("carrier frequency must be positive.");
        if (scenario.rays_per_path < 1)
            throw std::invalid_argument("rays per path must be positive.");
        if (scenario.tx_array.elements.empty() || scenario.rx_array.elements.empty())
            throw std::invalid_argument("antenna arrays must have at least one element.");
        if (los_net.net.weights.empty() || nlos_net.net.weights.empty())
            throw std::invalid_argument("power models are untrained.");
        if (gan_azimuth.generator.weights.empty() || gan_elevation.generator.weights.empty())
            throw std::invalid_argument("offset models are untrained.");
        for (const Trajectory *traj : {&scenario.tx, &scenario.rx})
        {
            if (traj->t.empty())
                throw std::invalid_argument("trajectories must have waypoints.");
            if (t_grid.front() < traj->t.front() || t_grid.back() > traj->t.back())
                throw std::invalid_argument("time grid leaves the trajectory span.");
        }

        const double f0 = scenario.carrier_hz;
        const std::size_t n_tx = scenario.tx_array.elements.size();
        const std::size_t n_rx = scenario.rx_array.elements.size();

        std::vector<PairCir> out(n_tx * n_rx);
        for (std::size_t q = 0; q < n_tx; ++q)
            for (std::size_t p = 0; p < n_rx; ++p)
            {
                out[q * n_rx + p].tx_element = static_cast<int>(q);
                out[q * n_rx + p].rx_element = static_cast<int>(p);
                out[q * n_rx + p].carrier_hz = f0;
                out[q * n_rx + p].snapshots.reserve(t_grid.size());
            }

        std::map<int, PathState> live;
        std::map<int, int> births;

        for (std::size_t i = 0; i < t_grid.size(); ++i)
        {
            double t = t_grid[i];
            Vec3 tx_pos = position_at(scenario.tx, t);
            Vec3 rx_pos = position_at(scenario.rx, t);
            Vec3 v_tx = velocity_at(scenario.tx, t);
            Vec3 v_rx = velocity_at(scenario.rx, t);
            Vec3 att = attitude_at(scenario.tx, t);
            Mat3 attitude = rotation_from_attitude(att(0), att(1), att(2));
            Mat3 rv_tx = rotation_from_velocity(v_tx);
            Mat3 rv_rx = rotation_from_velocity(v_rx);

            std::vector<PathGeometry> paths;
            if ((tx_pos - rx_pos).norm() >= 1e-9)
                paths = enumerate_paths(scenario.scene, tx_pos, rx_pos);

            CirSnapshot blank;
            blank.t = t;
            blank.rv_tx = rv_tx;
            blank.rv_rx = rv_rx;
            blank.attitude = attitude;
            blank.doppler_bound_hz = f0 * (v_tx.norm() + v_rx.norm()) / speed_of_light;
            for (auto &pair : out)
                pair.snapshots.push_back(blank);

            std::map<int, PathState> next_live;
            for (const PathGeometry &path : paths)
            {
                int rays = path.kind == PathKind::los ? 1 : scenario.rays_per_path;

                auto it = live.find(path.path_id);
                bool continuing = it != live.end();
                PathState st = continuing
                                   ? std::move(it->second)
                                   : born_state(path, rays, seed, births[path.path_id]++,
                                                gan_azimuth, gan_elevation);

                const PowerNet &net = path.kind == PathKind::los ? los_net : nlos_net;
                double p_db = power_db(net, path.delay_s * 1e6);
                double p_lin = std::pow(10.0, p_db / 10.0);

                PathSnapshot base;
                base.path_id = path.path_id;
                base.kind = path.kind;
                base.delay_s = path.delay_s;
                base.power_db = p_db;
                base.power_lin = p_lin;
                base.rays.resize(rays);

                for (int m = 0; m < rays; ++m)
                {
                    Ray &ray = base.rays[m];
                    ray.ray_id = m;
                    if (path.kind == PathKind::los)
                        ray.angles = path.angles;
                    else
                    {
                        ray.angles.aaod = wrap_pi(path.angles.aaod + st.off_aaod[m]);
                        ray.angles.eaod = path.angles.eaod + st.off_eaod[m];
                        ray.angles.aaoa = wrap_pi(path.angles.aaoa + st.off_aaoa[m]);
                        ray.angles.eaoa = path.angles.eaoa + st.off_eaoa[m];
                    }

                    double f_now = doppler_frequency(ray.angles, v_tx, v_rx, f0);
                    if (continuing)
                        st.phase_move[m] += 2.0 * pi * 0.5 * (st.last_freq[m] + f_now) *
                                            (t - t_grid[i - 1]);
                    st.last_freq[m] = f_now;

                    ray.phase_initial = st.psi_i[m];
                    ray.phase_movement = st.phase_move[m];
                    ray.doppler_hz = f_now;
                }

                for (std::size_t q = 0; q < n_tx; ++q)
                    for (std::size_t p = 0; p < n_rx; ++p)
                    {
                        PathSnapshot snap = base;
                        for (Ray &ray : snap.rays)
                        {
                            ray.phase_rotation = rotation_phase(
                                ray.angles, rv_tx, attitude, rv_rx,
                                scenario.tx_array.elements[q],
                                scenario.rx_array.elements[p], f0);
                            double psi = ray.phase_initial + ray.phase_movement +
                                         ray.phase_rotation;
                            ray.phasor = Complex{std::cos(psi), std::sin(psi)};
                        }
                        out[q * n_rx + p].snapshots[i].paths.push_back(std::move(snap));
                    }

                next_live.emplace(path.path_id, std::move(st));
            }
            live = std::move(next_live);
        }
        return out;
    }

} // namespace u2v
