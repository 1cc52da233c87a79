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

#ifndef u2v_clustering_H
#define u2v_clustering_H

#include "u2v/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace u2v
{

    // One ray in (delay, azimuth, elevation) space
    struct RayPoint
    {
        double delay_us = 0.0;
        double azimuth = 0.0;   // rad
        double elevation = 0.0; // rad
    };

    // Per-coordinate multipliers applied inside the distance metric
    struct RayWeights
    {
        double delay = 1.0;
        double azimuth = 1.0;
        double elevation = 1.0;
    };

    // Inverse standard deviation of every coordinate over the set; a constant
    // coordinate keeps weight 1.
    RayWeights zscore_weights(const std::vector<RayPoint> &points);

    // Weighted Euclidean distance with wrapped angle differences
    double ray_distance(const RayPoint &a, const RayPoint &b, const RayWeights &w);

    struct ClusterResult
    {
        std::vector<int> assignments;    // per input point
        std::vector<RayPoint> centroids; // arithmetic mean of members
        std::vector<double> cluster_sse; // squared-distance total per cluster
        double sse = 0.0;
        std::vector<double> sse_history; // after each assignment pass
        int iterations = 0;
    };

    struct KmeansConfig
    {
        int restarts = 10;
        int max_iterations = 200;
        std::optional<RayWeights> weights; // default: zscore_weights(points)
    };

    // Lloyd iterations from seeded initial centroids, best of cfg.restarts runs
    ClusterResult kmeans(const std::vector<RayPoint> &points, int num_clusters,
                         std::uint64_t seed, const KmeansConfig &cfg = {});

    // Single run from explicit initial centroid indices
    ClusterResult kmeans_with_init(const std::vector<RayPoint> &points,
                                   const std::vector<std::size_t> &initial_indices,
                                   const RayWeights &weights, int max_iterations = 200);

    struct ElbowResult
    {
        int num_clusters = 0;
        bool qualified = false;       // false: no candidate met both thresholds
        std::vector<int> candidates;  // the evaluated cluster counts
        std::vector<double> sse;      // best-of-restarts SSE per candidate
        std::vector<double> normalized; // sse / sse at one cluster
    };

    // First cluster count whose normalized SSE falls below sse_threshold while
    // the forward decrease per added cluster stays below slope_threshold.
    ElbowResult elbow_select(const std::vector<RayPoint> &points, const std::vector<int> &range,
                             std::uint64_t seed, double sse_threshold = 0.15,
                             double slope_threshold = 0.005, const KmeansConfig &cfg = {});

    struct AngleOffset
    {
        double dazimuth = 0.0;
        double delevation = 0.0;
    };

    // Per-ray angle minus its cluster centroid angle, wrapped to (-pi, pi]
    std::vector<AngleOffset> extract_offsets(const ClusterResult &result,
                                             const std::vector<RayPoint> &points);

} // namespace u2v

#endif
