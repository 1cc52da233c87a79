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

#ifndef u2v_dataset_H
#define u2v_dataset_H

#include "u2v/rng.hpp"
#include "u2v/scene.hpp"
#include "u2v/types.hpp"

#include <cstdint>
#include <vector>

namespace u2v
{

    // Two-lobe Laplacian mixture over intra-path angle offsets, rad
    struct LaplacianMixture
    {
        double location_a = -0.06;
        double scale_a = 0.02;
        double location_b = 0.06;
        double scale_b = 0.02;
        double weight_a = 0.5; // probability of drawing lobe a
    };

    double sample_mixture(const LaplacianMixture &mix, RandomStream &rng);

    // Exponential power-delay law in linear scale, a e^(-tau/b) + floor,
    // evaluated at a delay in microseconds
    struct PowerLaw
    {
        double a = 2e-9;
        double b_us = 2.0;
        double floor = 0.0;
    };

    // Law value in dB; the linear value is kept above 1e-30 so extreme
    // delays cannot push the result to -infinity
    double power_law_db(const PowerLaw &law, double delay_us);

    // Known generating laws behind a synthetic dataset. The trained models
    // can be checked against these instead of an unverifiable ray tracer.
    struct GroundTruth
    {
        PowerLaw los{2e-9, 2.0, 0.0};
        PowerLaw nlos{5e-10, 1.0, 0.0};
        LaplacianMixture azimuth;
        LaplacianMixture elevation{-0.03, 0.012, 0.03, 0.012, 0.5};
        double delay_jitter_us = 0.01; // half-width of the per-ray delay window
        double power_jitter_db = 0.5;  // std of the per-path power jitter, dB
    };

    // One ray of one propagation path of one Tx-Rx channel
    struct RayRecord
    {
        int channel_id = 0;
        int path_id = 0;
        double delay_s = 0.0;
        double power_db = 0.0;
        double aaoa = 0.0;
        double eaoa = 0.0;
        double aaod = 0.0;
        double eaod = 0.0;
        bool los = false;
    };

    struct RtDataset
    {
        std::vector<RayRecord> records;
        int skipped_pairs = 0; // pairs with no usable propagation path
    };

    // Labeled ray dataset over the cross product of the two grids. Every pair
    // draws from its own stream derived from (seed, pair index), so the result
    // does not depend on evaluation order. The direct path yields one ray with
    // the exact geometric angles; every reflected path spawns rays_per_path
    // rays with jittered delays and mixture-sampled angle offsets.
    RtDataset generate_dataset(const Scene &scene, const std::vector<Vec3> &tx_grid,
                               const std::vector<Vec3> &rx_grid, const GroundTruth &truth,
                               int rays_per_path, std::uint64_t seed);

} // namespace u2v

#endif
