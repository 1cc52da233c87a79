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

#include "u2v/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace u2v
{

    namespace
    {
        void validate_mixture(const LaplacianMixture &mix, const char *which)
        {
            if (mix.scale_a <= 0.0 || mix.scale_b <= 0.0)
                throw std::invalid_argument(std::string(which) +
                                            " mixture scales must be positive.");
            if (mix.weight_a < 0.0 || mix.weight_a > 1.0)
                throw std::invalid_argument(std::string(which) +
                                            " mixture weight must lie in [0, 1].");
        }

        void validate_law(const PowerLaw &law, const char *which)
        {
            if (law.a <= 0.0 || law.b_us <= 0.0 || law.floor < 0.0)
                throw std::invalid_argument(std::string(which) +
                                            " power law needs a > 0, b > 0, floor >= 0.");
        }
    } // namespace

    double sample_mixture(const LaplacianMixture &mix, RandomStream &rng)
    {
        bool lobe_a = rng.uniform() < mix.weight_a;
        return lobe_a ? rng.laplace(mix.location_a, mix.scale_a)
                      : rng.laplace(mix.location_b, mix.scale_b);
    }

    double power_law_db(const PowerLaw &law, double delay_us)
    {
        double lin = law.a * std::exp(-delay_us / law.b_us) + law.floor;
        return 10.0 * std::log10(std::max(lin, 1e-30));
    }

    RtDataset generate_dataset(const Scene &scene, const std::vector<Vec3> &tx_grid,
                               const std::vector<Vec3> &rx_grid, const GroundTruth &truth,
                               int rays_per_path, std::uint64_t seed)
    {
        if (tx_grid.empty() || rx_grid.empty())
            throw std::invalid_argument("dataset grids must be non-empty.");
        if (rays_per_path < 1)
            throw std::invalid_argument("rays per path must be positive.");
        validate_law(truth.los, "direct");
        validate_law(truth.nlos, "reflected");
        validate_mixture(truth.azimuth, "azimuth");
        validate_mixture(truth.elevation, "elevation");
        if (truth.delay_jitter_us < 0.0 || truth.power_jitter_db < 0.0)
            throw std::invalid_argument("jitter scales must be non-negative.");

        RtDataset out;
        for (std::size_t ti = 0; ti < tx_grid.size(); ++ti)
            for (std::size_t ri = 0; ri < rx_grid.size(); ++ri)
            {
                std::uint64_t pair = ti * rx_grid.size() + ri;
                int channel = static_cast<int>(pair);

                // a coincident pair has no propagation direction
                if ((tx_grid[ti] - rx_grid[ri]).norm() < 1e-9)
                {
                    ++out.skipped_pairs;
                    continue;
                }
                std::vector<PathGeometry> paths =
                    enumerate_paths(scene, tx_grid[ti], rx_grid[ri]);
                if (paths.empty())
                {
                    ++out.skipped_pairs;
                    continue;
                }

                RandomStream rng = RandomStream::substream(seed, {pair});
                for (const PathGeometry &path : paths)
                {
                    const PowerLaw &law =
                        path.kind == PathKind::los ? truth.los : truth.nlos;
                    double p_db = power_law_db(law, path.delay_s * 1e6) +
                                  rng.normal(0.0, truth.power_jitter_db);

                    RayRecord rec;
                    rec.channel_id = channel;
                    rec.path_id = path.path_id;
                    rec.power_db = p_db;
                    rec.los = path.kind == PathKind::los;

                    if (path.kind == PathKind::los)
                    {
                        rec.delay_s = path.delay_s;
                        rec.aaoa = path.angles.aaoa;
                        rec.eaoa = path.angles.eaoa;
                        rec.aaod = path.angles.aaod;
                        rec.eaod = path.angles.eaod;
                        out.records.push_back(rec);
                        continue;
                    }

                    for (int m = 0; m < rays_per_path; ++m)
                    {
                        double jitter = rng.uniform(-truth.delay_jitter_us,
                                                    truth.delay_jitter_us) *
                                        1e-6;
                        rec.delay_s = path.delay_s + jitter;
                        if (rec.delay_s <= 0.0)
                            rec.delay_s = path.delay_s; // window wider than the delay
                        rec.aaoa = wrap_pi(path.angles.aaoa +
                                           sample_mixture(truth.azimuth, rng));
                        rec.eaoa = path.angles.eaoa + sample_mixture(truth.elevation, rng);
                        rec.aaod = wrap_pi(path.angles.aaod +
                                           sample_mixture(truth.azimuth, rng));
                        rec.eaod = path.angles.eaod + sample_mixture(truth.elevation, rng);
                        out.records.push_back(rec);
                    }
                }
            }
        return out;
    }

} // namespace u2v
