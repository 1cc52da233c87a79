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

#include "u2v/clustering.hpp"

#include "u2v/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace u2v
{

    RayWeights zscore_weights(const std::vector<RayPoint> &points)
    {
        if (points.empty())
            throw std::invalid_argument("no points to derive weights from.");
        auto inv_std = [&](auto get) {
            double mean = 0.0;
            for (const auto &p : points)
                mean += get(p);
            mean /= static_cast<double>(points.size());
            double ss = 0.0;
            for (const auto &p : points)
            {
                double d = get(p) - mean;
                ss += d * d;
            }
            double sd = std::sqrt(ss / static_cast<double>(points.size()));
            return sd < 1e-12 ? 1.0 : 1.0 / sd;
        };
        RayWeights w;
        w.delay = inv_std([](const RayPoint &p) { return p.delay_us; });
        w.azimuth = inv_std([](const RayPoint &p) { return p.azimuth; });
        w.elevation = inv_std([](const RayPoint &p) { return p.elevation; });
        return w;
    }

    double ray_distance(const RayPoint &a, const RayPoint &b, const RayWeights &w)
    {
        if (w.delay < 0.0 || w.azimuth < 0.0 || w.elevation < 0.0)
            throw std::invalid_argument("distance weights must be non-negative.");
        if (w.delay == 0.0 && w.azimuth == 0.0 && w.elevation == 0.0)
            throw std::invalid_argument("distance weights must not all vanish.");
        double dt = w.delay * (a.delay_us - b.delay_us);
        double da = w.azimuth * wrap_pi(a.azimuth - b.azimuth);
        double db = w.elevation * wrap_pi(a.elevation - b.elevation);
        return std::sqrt(dt * dt + da * da + db * db);
    }

    namespace
    {
        double squared_distance(const RayPoint &a, const RayPoint &b, const RayWeights &w)
        {
            double d = ray_distance(a, b, w);
            return d * d;
        }

        double wrapped_sse(const std::vector<double> &angles, double center)
        {
            double s = 0.0;
            for (double a : angles)
            {
                double d = wrap_pi(a - center);
                s += d * d;
            }
            return s;
        }

        // Center of a set of angles under wrapped squared distance. The
        // unwrap-near-first-member mean handles every compact cluster; wide
        // clusters fall back to guarded residual-mean descent from the previous
        // center so the total error can never rise (see the Lloyd invariant).
        double angle_center(const std::vector<double> &angles, double previous)
        {
            double first = angles.front();
            double sum = 0.0;
            for (double a : angles)
                sum += first + wrap_pi(a - first);
            double candidate = wrap_pi(sum / static_cast<double>(angles.size()));

            double best = previous;
            double best_sse = wrapped_sse(angles, previous);
            double cand_sse = wrapped_sse(angles, candidate);
            if (cand_sse < best_sse)
            {
                best = candidate;
                best_sse = cand_sse;
            }
            for (int step = 0; step < 8; ++step)
            {
                double residual = 0.0;
                for (double a : angles)
                    residual += wrap_pi(a - best);
                residual /= static_cast<double>(angles.size());
                double moved = wrap_pi(best + residual);
                double sse = wrapped_sse(angles, moved);
                if (sse >= best_sse)
                    break;
                best = moved;
                best_sse = sse;
            }
            return best;
        }

        // Cluster mean: exact for delay, wrapped center for each angle
        RayPoint cluster_mean(const std::vector<RayPoint> &points,
                              const std::vector<std::size_t> &members,
                              const RayPoint &previous)
        {
            double st = 0.0;
            std::vector<double> az, el;
            az.reserve(members.size());
            el.reserve(members.size());
            for (std::size_t idx : members)
            {
                st += points[idx].delay_us;
                az.push_back(points[idx].azimuth);
                el.push_back(points[idx].elevation);
            }
            return {st / static_cast<double>(members.size()),
                    angle_center(az, previous.azimuth), angle_center(el, previous.elevation)};
        }

        ClusterResult lloyd(const std::vector<RayPoint> &points,
                            std::vector<RayPoint> centroids, const RayWeights &w,
                            int max_iterations)
        {
            const std::size_t n = points.size();
            const std::size_t k = centroids.size();

            ClusterResult r;
            r.assignments.assign(n, -1);
            r.centroids = std::move(centroids);

            for (int iter = 0; iter < max_iterations; ++iter)
            {
                // assign by argmin distance, ties to the lowest cluster id
                double sse = 0.0;
                std::vector<double> per_cluster(k, 0.0);
                for (std::size_t i = 0; i < n; ++i)
                {
                    int best = 0;
                    double best_d = squared_distance(points[i], r.centroids[0], w);
                    for (std::size_t c = 1; c < k; ++c)
                    {
                        double d = squared_distance(points[i], r.centroids[c], w);
                        if (d < best_d)
                        {
                            best_d = d;
                            best = static_cast<int>(c);
                        }
                    }
                    r.assignments[i] = best;
                    sse += best_d;
                    per_cluster[best] += best_d;
                }
                r.sse = sse;
                r.cluster_sse = per_cluster;
                r.sse_history.push_back(sse);
                r.iterations = iter + 1;

                // collect members, re-seeding any emptied cluster at the point
                // farthest from its current centroid
                std::vector<std::vector<std::size_t>> members(k);
                for (std::size_t i = 0; i < n; ++i)
                    members[r.assignments[i]].push_back(i);

                std::vector<bool> reseeded_point(n, false);
                bool reseeded = false;
                for (std::size_t c = 0; c < k; ++c)
                {
                    if (!members[c].empty())
                        continue;
                    std::size_t far = n;
                    double far_d = -1.0;
                    for (std::size_t i = 0; i < n; ++i)
                    {
                        if (reseeded_point[i] || members[r.assignments[i]].size() <= 1)
                            continue;
                        double d = squared_distance(points[i],
                                                    r.centroids[r.assignments[i]], w);
                        if (d > far_d)
                        {
                            far_d = d;
                            far = i;
                        }
                    }
                    if (far == n)
                        continue; // nothing left to donate
                    reseeded_point[far] = true;
                    reseeded = true;
                    auto &donor = members[r.assignments[far]];
                    donor.erase(std::find(donor.begin(), donor.end(), far));
                    members[c].push_back(far);
                    r.assignments[far] = static_cast<int>(c);
                }

                std::vector<RayPoint> next(k);
                for (std::size_t c = 0; c < k; ++c)
                    next[c] = members[c].empty()
                                  ? r.centroids[c]
                                  : cluster_mean(points, members[c], r.centroids[c]);

                bool unchanged = !reseeded;
                for (std::size_t c = 0; unchanged && c < k; ++c)
                    unchanged = next[c].delay_us == r.centroids[c].delay_us &&
                                next[c].azimuth == r.centroids[c].azimuth &&
                                next[c].elevation == r.centroids[c].elevation;
                r.centroids = std::move(next);
                if (unchanged)
                    break;
            }
            return r;
        }

        ClusterResult run_from_indices(const std::vector<RayPoint> &points,
                                       const std::vector<std::size_t> &idx,
                                       const RayWeights &w, int max_iterations)
        {
            std::vector<RayPoint> centroids;
            centroids.reserve(idx.size());
            for (std::size_t i : idx)
            {
                if (i >= points.size())
                    throw std::invalid_argument("initial centroid index out of range.");
                centroids.push_back(points[i]);
            }
            return lloyd(points, std::move(centroids), w, max_iterations);
        }
    } // namespace

    ClusterResult kmeans_with_init(const std::vector<RayPoint> &points,
                                   const std::vector<std::size_t> &initial_indices,
                                   const RayWeights &weights, int max_iterations)
    {
        if (points.empty())
            throw std::invalid_argument("no points to cluster.");
        if (initial_indices.empty() || initial_indices.size() > points.size())
            throw std::invalid_argument("initial centroid count out of range.");
        return run_from_indices(points, initial_indices, weights, max_iterations);
    }

    ClusterResult kmeans(const std::vector<RayPoint> &points, int num_clusters,
                         std::uint64_t seed, const KmeansConfig &cfg)
    {
        if (points.empty())
            throw std::invalid_argument("no points to cluster.");
        if (num_clusters < 1 || static_cast<std::size_t>(num_clusters) > points.size())
            throw std::invalid_argument("cluster count must lie in [1, point count].");
        if (cfg.restarts < 1)
            throw std::invalid_argument("restart count must be positive.");

        RayWeights w = cfg.weights ? *cfg.weights : zscore_weights(points);

        ClusterResult best;
        for (int r = 0; r < cfg.restarts; ++r)
        {
            RandomStream rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
            std::vector<std::size_t> idx =
                rng.sample_without_replacement(points.size(), num_clusters);
            ClusterResult run = run_from_indices(points, idx, w, cfg.max_iterations);
            if (r == 0 || run.sse < best.sse)
                best = std::move(run);
        }
        return best;
    }

    ElbowResult elbow_select(const std::vector<RayPoint> &points, const std::vector<int> &range,
                             std::uint64_t seed, double sse_threshold, double slope_threshold,
                             const KmeansConfig &cfg)
    {
        if (range.empty())
            throw std::invalid_argument("empty cluster count range.");
        if (!std::is_sorted(range.begin(), range.end()))
            throw std::invalid_argument("cluster count range must ascend.");

        ElbowResult out;
        out.candidates = range;
        for (int k : range)
            out.sse.push_back(kmeans(points, k, seed, cfg).sse);

        double sse_one = kmeans(points, 1, seed, cfg).sse;
        for (double s : out.sse)
            out.normalized.push_back(sse_one < 1e-30 ? 0.0 : s / sse_one);

        for (std::size_t i = 0; i + 1 < range.size(); ++i)
        {
            double slope = std::abs(out.normalized[i] - out.normalized[i + 1]) /
                           static_cast<double>(range[i + 1] - range[i]);
            if (out.normalized[i] < sse_threshold && slope < slope_threshold)
            {
                out.num_clusters = range[i];
                out.qualified = true;
                return out;
            }
        }
        // a flat degenerate curve qualifies immediately
        if (sse_one < 1e-30)
        {
            out.num_clusters = range.front();
            out.qualified = true;
            return out;
        }
        out.num_clusters = range.back();
        out.qualified = false;
        return out;
    }

    std::vector<AngleOffset> extract_offsets(const ClusterResult &result,
                                             const std::vector<RayPoint> &points)
    {
        if (result.assignments.size() != points.size())
            throw std::invalid_argument("assignment and point counts differ.");
        std::vector<AngleOffset> out(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
        {
            int c = result.assignments[i];
            if (c < 0 || static_cast<std::size_t>(c) >= result.centroids.size())
                throw std::invalid_argument("assignment refers to a missing cluster.");
            out[i].dazimuth = wrap_pi(points[i].azimuth - result.centroids[c].azimuth);
            out[i].delevation = wrap_pi(points[i].elevation - result.centroids[c].elevation);
        }
        return out;
    }

} // namespace u2v
