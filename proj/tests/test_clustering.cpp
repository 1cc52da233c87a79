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

#include "doctest.h"

#include "test_helpers.hpp"
#include "u2v/clustering.hpp"
#include "u2v/rng.hpp"
#include "u2v/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

using namespace u2v;

namespace
{

    // two tight groups far apart in every coordinate
    std::vector<RayPoint> two_blobs(int per_blob, std::uint64_t seed, std::vector<int> *labels)
    {
        RandomStream rng(seed);
        std::vector<RayPoint> pts;
        const RayPoint centers[2] = {{0.5, -1.0, -0.3}, {3.0, 1.5, 0.4}};
        for (int b = 0; b < 2; ++b)
            for (int i = 0; i < per_blob; ++i)
            {
                pts.push_back({centers[b].delay_us + 0.02 * rng.normal(),
                               centers[b].azimuth + 0.02 * rng.normal(),
                               centers[b].elevation + 0.02 * rng.normal()});
                if (labels)
                    labels->push_back(b);
            }
        return pts;
    }

    bool same_partition(const std::vector<int> &a, const std::vector<int> &b)
    {
        if (a.size() != b.size())
            return false;
        std::map<int, int> fwd, rev;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            auto f = fwd.insert({a[i], b[i]});
            if (!f.second && f.first->second != b[i])
                return false;
            auto r = rev.insert({b[i], a[i]});
            if (!r.second && r.first->second != a[i])
                return false;
        }
        return true;
    }

} // namespace

TEST_SUITE("clustering")
{
    TEST_CASE("ray distance weights and wraps each coordinate")
    {
        RayWeights unit{1.0, 1.0, 1.0};
        RayPoint a{1.0, 0.5, -0.2};
        CHECK(ray_distance(a, a, unit) == doctest::Approx(0.0).epsilon(1e-15));

        RayPoint b{2.0, 1.5, 0.8};
        CHECK(ray_distance(a, b, unit) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

        RayPoint c{3.0, 0.5, -0.2};
        CHECK(ray_distance(a, c, RayWeights{0.5, 1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));

        // azimuths straddling the seam are near each other, not 2 pi apart
        RayPoint s1{1.0, 3.0, 0.0};
        RayPoint s2{1.0, -3.0, 0.0};
        CHECK(ray_distance(s1, s2, unit) ==
              doctest::Approx(2.0 * pi - 6.0).epsilon(1e-12));

        CHECK_THROWS_AS((void)ray_distance(a, b, RayWeights{-1.0, 1.0, 1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)ray_distance(a, b, RayWeights{0.0, 0.0, 0.0}),
                        std::invalid_argument);
    }

    TEST_CASE("default weights are inverse per-coordinate deviations")
    {
        std::vector<RayPoint> pts = {{0.0, 0.0, 0.3}, {2.0, 4.0, 0.3}};
        RayWeights w = zscore_weights(pts);
        CHECK(w.delay == doctest::Approx(1.0).epsilon(1e-12));    // std 1
        CHECK(w.azimuth == doctest::Approx(0.5).epsilon(1e-12));  // std 2
        CHECK(w.elevation == doctest::Approx(1.0).epsilon(1e-12)); // constant column
    }

    TEST_CASE("two separated groups are recovered exactly")
    {
        std::vector<int> labels;
        std::vector<RayPoint> pts = two_blobs(40, 11, &labels);
        ClusterResult r = kmeans(pts, 2, 17);

        REQUIRE(r.assignments.size() == pts.size());
        REQUIRE(r.centroids.size() == 2);
        // zero misassignments up to label swap
        std::vector<int> as_labels(r.assignments.begin(), r.assignments.end());
        CHECK(same_partition(labels, as_labels));
        CHECK(r.sse < 1.0);
    }

    TEST_CASE("one cluster lands on the global mean")
    {
        RandomStream rng(5);
        std::vector<RayPoint> pts;
        for (int i = 0; i < 25; ++i)
            pts.push_back({rng.uniform(0.5, 2.5), rng.uniform(-1.0, 1.0), rng.uniform(-0.4, 0.4)});
        ClusterResult r = kmeans(pts, 1, 3);

        double mt = 0, ma = 0, mb = 0;
        for (const auto &p : pts)
        {
            mt += p.delay_us;
            ma += p.azimuth;
            mb += p.elevation;
        }
        double n = static_cast<double>(pts.size());
        CHECK(r.centroids[0].delay_us == doctest::Approx(mt / n).epsilon(1e-12));
        CHECK(r.centroids[0].azimuth == doctest::Approx(ma / n).epsilon(1e-12));
        CHECK(r.centroids[0].elevation == doctest::Approx(mb / n).epsilon(1e-12));
    }

    TEST_CASE("as many clusters as points zeroes the error")
    {
        RandomStream rng(9);
        std::vector<RayPoint> pts;
        for (int i = 0; i < 12; ++i)
            pts.push_back({rng.uniform(0.0, 4.0), rng.uniform(-3.0, 3.0), rng.uniform(-0.5, 0.5)});
        ClusterResult r = kmeans(pts, 12, 2);
        CHECK(r.sse == doctest::Approx(0.0).epsilon(1e-15));
        std::set<int> used(r.assignments.begin(), r.assignments.end());
        CHECK(used.size() == 12);
    }

    TEST_CASE("the error never rises across iterations")
    {
        RandomStream rng(23);
        std::vector<RayPoint> pts;
        for (int i = 0; i < 150; ++i)
            pts.push_back({rng.uniform(0.0, 4.0), rng.uniform(-3.0, 3.0), rng.uniform(-0.5, 0.5)});
        RayWeights w = zscore_weights(pts);

        RandomStream pick(31);
        for (int trial = 0; trial < 6; ++trial)
        {
            auto idx = pick.sample_without_replacement(pts.size(), 6);
            ClusterResult r = kmeans_with_init(pts, idx, w);
            REQUIRE(r.sse_history.size() >= 1);
            for (std::size_t i = 1; i < r.sse_history.size(); ++i)
                CHECK(r.sse_history[i] <= r.sse_history[i - 1] + 1e-9);
        }
    }

    TEST_CASE("best-of-restarts error never rises with more clusters")
    {
        std::vector<RayPoint> pts = two_blobs(30, 41, nullptr);
        RandomStream rng(57);
        for (int i = 0; i < 60; ++i)
            pts.push_back({rng.uniform(0.0, 4.0), rng.uniform(-3.0, 3.0), rng.uniform(-0.5, 0.5)});

        double prev = -1.0;
        for (int k = 1; k <= 8; ++k)
        {
            double sse = kmeans(pts, k, 7).sse;
            if (prev >= 0.0)
                CHECK(sse <= prev + 1e-9);
            prev = sse;
        }
    }

    TEST_CASE("shuffling the input permutes the partition unchanged")
    {
        std::vector<RayPoint> pts = u2v_test::make_blob_points({6, 25, 0.15, 3});
        RayWeights w = zscore_weights(pts);

        std::vector<std::size_t> init = {3, 40, 70, 100, 130, 145};
        ClusterResult base = kmeans_with_init(pts, init, w);

        RandomStream rng(77);
        std::vector<std::size_t> perm = rng.permutation(pts.size());
        std::vector<RayPoint> shuffled(pts.size());
        std::vector<std::size_t> where(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            shuffled[perm[i]] = pts[i];
            where[i] = perm[i];
        }
        std::vector<std::size_t> init_mapped;
        for (std::size_t i : init)
            init_mapped.push_back(where[i]);
        ClusterResult moved = kmeans_with_init(shuffled, init_mapped, w);

        // compare partitions through the permutation
        std::vector<int> back(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            back[i] = moved.assignments[perm[i]];
        CHECK(same_partition(base.assignments, back));
    }

    TEST_CASE("an emptied cluster is reseeded at the farthest point")
    {
        // duplicate points put both initial centroids in the same place, so
        // the tie rule starves the second cluster on the first pass
        std::vector<RayPoint> pts = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0},
                                     {4.0, 0.0, 0.0}, {10.0, 0.0, 0.0}};
        RayWeights w{1.0, 1.0, 1.0};
        ClusterResult r = kmeans_with_init(pts, {0, 1}, w);

        std::set<int> used(r.assignments.begin(), r.assignments.end());
        CHECK(used.size() == 2);
        // the far point ends up alone; the rest share the other cluster
        CHECK(r.assignments[0] == r.assignments[1]);
        CHECK(r.assignments[3] != r.assignments[0]);
        CHECK(r.centroids[r.assignments[3]].delay_us == doctest::Approx(10.0).epsilon(1e-12));
    }

    TEST_CASE("elbow finds two groups in a two-group set")
    {
        std::vector<RayPoint> pts = two_blobs(50, 19, nullptr);
        ElbowResult e = elbow_select(pts, {1, 2, 3, 4, 5, 6}, 29);
        CHECK(e.qualified);
        CHECK(e.num_clusters == 2);
        CHECK(e.normalized[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e.normalized[1] < 0.15);
    }

    TEST_CASE("degenerate identical points elbow to the smallest candidate")
    {
        std::vector<RayPoint> pts(30, RayPoint{1.0, 0.5, -0.1});
        ElbowResult e = elbow_select(pts, {2, 3, 4}, 13);
        CHECK(e.qualified);
        CHECK(e.num_clusters == 2);
    }

    TEST_CASE("elbow recovers seventeen ray groups within one")
    {
        std::vector<RayPoint> pts = u2v_test::make_blob_points({17, 40, 0.40, 13});
        std::vector<int> range;
        for (int k = 8; k <= 24; ++k)
            range.push_back(k);
        ElbowResult e = elbow_select(pts, range, 8);
        CHECK(e.qualified);
        CHECK(e.num_clusters >= 16);
        CHECK(e.num_clusters <= 18);
        // normalized error at the pick sits under the threshold
        std::size_t at = 0;
        while (range[at] != e.num_clusters)
            ++at;
        CHECK(e.normalized[at] < 0.15);
    }

    TEST_CASE("no qualifying count falls back to the largest candidate")
    {
        RandomStream rng(71);
        std::vector<RayPoint> pts;
        for (int i = 0; i < 80; ++i)
            pts.push_back({rng.uniform(0.0, 4.0), rng.uniform(-3.0, 3.0), rng.uniform(-0.5, 0.5)});
        ElbowResult e = elbow_select(pts, {1, 2, 3}, 5);
        CHECK_FALSE(e.qualified);
        CHECK(e.num_clusters == 3);
    }

    TEST_CASE("offsets are centered angle residuals")
    {
        // singleton cluster offsets vanish
        std::vector<RayPoint> lone = {{1.0, 0.7, 0.2}};
        ClusterResult r1 = kmeans(lone, 1, 1);
        auto off1 = extract_offsets(r1, lone);
        CHECK(off1[0].dazimuth == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(off1[0].delevation == doctest::Approx(0.0).epsilon(1e-15));

        // symmetric pair splits into equal and opposite offsets
        std::vector<RayPoint> pair = {{1.0, 0.1, 0.05}, {1.0, -0.1, -0.05}};
        ClusterResult r2 = kmeans(pair, 1, 1, {1, 200, RayWeights{1.0, 1.0, 1.0}});
        auto off2 = extract_offsets(r2, pair);
        CHECK(off2[0].dazimuth == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(off2[1].dazimuth == doctest::Approx(-0.1).epsilon(1e-12));
        CHECK(off2[0].delevation == doctest::Approx(0.05).epsilon(1e-12));

        // per-cluster offsets sum to zero even across the azimuth seam
        std::vector<RayPoint> seam = {{1.0, 3.1, 0.0}, {1.0, -3.1, 0.0}, {1.0, 3.05, 0.1}};
        ClusterResult r3 = kmeans(seam, 1, 1, {1, 200, RayWeights{1.0, 1.0, 1.0}});
        auto off3 = extract_offsets(r3, seam);
        double sa = 0.0, sb = 0.0;
        for (const auto &o : off3)
        {
            sa += o.dazimuth;
            sb += o.delevation;
        }
        CHECK(std::abs(sa) < 1e-9);
        CHECK(std::abs(sb) < 1e-9);

        // grouped data: every cluster's offsets cancel
        std::vector<RayPoint> pts = u2v_test::make_blob_points({5, 30, 0.2, 7});
        ClusterResult r4 = kmeans(pts, 5, 3);
        auto off4 = extract_offsets(r4, pts);
        std::map<int, std::pair<double, double>> sums;
        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            sums[r4.assignments[i]].first += off4[i].dazimuth;
            sums[r4.assignments[i]].second += off4[i].delevation;
        }
        for (const auto &[c, s] : sums)
        {
            CHECK(std::abs(s.first) < 1e-9);
            CHECK(std::abs(s.second) < 1e-9);
        }
    }

    TEST_CASE("invalid clustering inputs are rejected")
    {
        std::vector<RayPoint> pts = {{1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}};
        CHECK_THROWS_AS((void)kmeans({}, 1, 1), std::invalid_argument);
        CHECK_THROWS_AS((void)kmeans(pts, 0, 1), std::invalid_argument);
        CHECK_THROWS_AS((void)kmeans(pts, 3, 1), std::invalid_argument);
        CHECK_THROWS_AS((void)elbow_select(pts, {}, 1), std::invalid_argument);
        CHECK_THROWS_AS((void)elbow_select(pts, {2, 1}, 1), std::invalid_argument);

        ClusterResult r = kmeans(pts, 1, 1);
        std::vector<RayPoint> three = {{1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {3.0, 0.0, 0.0}};
        CHECK_THROWS_AS((void)extract_offsets(r, three), std::invalid_argument);
    }
}
