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

#include "u2v/scene.hpp"

#include <limits>
#include <stdexcept>

namespace u2v
{

    std::vector<Triangle> box_facets(const Vec3 &center, const Vec3 &size)
    {
        Vec3 h = 0.5 * size;
        Vec3 lo = center - h, hi = center + h;

        auto corner = [&](int ix, int iy, int iz) {
            return Vec3(ix ? hi.x() : lo.x(), iy ? hi.y() : lo.y(), iz ? hi.z() : lo.z());
        };

        std::vector<Triangle> tris;
        tris.reserve(12);
        auto quad = [&](const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &d) {
            tris.push_back({a, b, c});
            tris.push_back({a, c, d});
        };

        quad(corner(0, 0, 0), corner(0, 1, 0), corner(1, 1, 0), corner(1, 0, 0)); // bottom
        quad(corner(0, 0, 1), corner(1, 0, 1), corner(1, 1, 1), corner(0, 1, 1)); // top
        quad(corner(0, 0, 0), corner(1, 0, 0), corner(1, 0, 1), corner(0, 0, 1)); // -y
        quad(corner(0, 1, 0), corner(0, 1, 1), corner(1, 1, 1), corner(1, 1, 0)); // +y
        quad(corner(0, 0, 0), corner(0, 0, 1), corner(0, 1, 1), corner(0, 1, 0)); // -x
        quad(corner(1, 0, 0), corner(1, 1, 0), corner(1, 1, 1), corner(1, 0, 1)); // +x
        return tris;
    }

    std::optional<RayHit> ray_triangle_intersect(const Vec3 &origin, const Vec3 &dir,
                                                 const Triangle &tri, double eps)
    {
        // Barycentric slack keeps edge and vertex hits (u or v exactly 0 or 1) inside
        constexpr double bary_eps = 1e-9;

        Vec3 e1 = tri.v1 - tri.v0;
        Vec3 e2 = tri.v2 - tri.v0;
        Vec3 p = dir.cross(e2);
        double det = e1.dot(p);
        if (std::abs(det) < 1e-12 * e1.norm() * e2.norm()) // near-parallel, facet-scale relative
            return std::nullopt;

        double inv = 1.0 / det;
        Vec3 s = origin - tri.v0;
        double u = s.dot(p) * inv;
        if (u < -bary_eps || u > 1.0 + bary_eps)
            return std::nullopt;

        Vec3 q = s.cross(e1);
        double v = dir.dot(q) * inv;
        if (v < -bary_eps || u + v > 1.0 + bary_eps)
            return std::nullopt;

        double t = e2.dot(q) * inv;
        if (t < eps)
            return std::nullopt;
        return RayHit{t, u, v};
    }

    namespace
    {
        bool segment_hits_triangle(const Vec3 &a, const Vec3 &dir, double len,
                                   const Triangle &tri, double eps)
        {
            auto hit = ray_triangle_intersect(a, dir, tri, eps);
            return hit && hit->t > eps && hit->t < len - eps;
        }
    } // namespace

    bool segment_occluded(const Scene &scene, const Vec3 &a, const Vec3 &b, double eps)
    {
        Vec3 d = b - a;
        double len = d.norm();
        if (len < eps)
            return false;
        Vec3 dir = d / len;

        for (const auto &tri : scene.obstacles)
            if (segment_hits_triangle(a, dir, len, tri, eps))
                return true;
        for (const auto &sc : scene.scatterers)
            for (const auto &tri : sc.facets)
                if (segment_hits_triangle(a, dir, len, tri, eps))
                    return true;
        return false;
    }

    std::pair<double, double> direction_angles(const Vec3 &d)
    {
        double n = d.norm();
        if (n == 0.0)
            throw std::invalid_argument("direction_angles: zero direction vector.");
        // + 0.0 maps a negative-zero y onto +0.0 so that the azimuth of the -x
        // direction is +pi, keeping azimuths on (-pi, pi]
        return {std::atan2(d.y() + 0.0, d.x()), std::asin(d.z() / n)};
    }

    AngleSet path_angles(const Vec3 &d_tx, const Vec3 &d_rx)
    {
        auto [aaod, eaod] = direction_angles(d_tx);
        auto [aaoa, eaoa] = direction_angles(d_rx);
        AngleSet a;
        a.aaod = aaod;
        a.eaod = eaod;
        a.aaoa = aaoa;
        a.eaoa = eaoa;
        return a;
    }

    namespace
    {
        struct BounceCandidate
        {
            Vec3 point;
            double total_len;
            int facet;
        };

        // Mirror-image bounce of tx over the facet plane towards rx. Valid only
        // when both terminals sit on the same side and the bounce point lies on
        // the facet itself.
        std::optional<BounceCandidate> facet_bounce(const Triangle &tri, int facet_index,
                                                    const Vec3 &tx, const Vec3 &rx, double eps)
        {
            Vec3 n = (tri.v1 - tri.v0).cross(tri.v2 - tri.v0);
            double nn = n.norm();
            if (nn < eps * eps)
                return std::nullopt; // degenerate facet
            n /= nn;

            double d_tx = n.dot(tx - tri.v0);
            double d_rx = n.dot(rx - tri.v0);
            if (d_tx * d_rx <= 0.0 || std::abs(d_tx) < eps || std::abs(d_rx) < eps)
                return std::nullopt;

            Vec3 mirror = tx - 2.0 * d_tx * n;
            Vec3 seg = rx - mirror;
            double len = seg.norm();
            if (len < eps)
                return std::nullopt;
            Vec3 dir = seg / len;

            auto hit = ray_triangle_intersect(mirror, dir, tri, eps);
            if (!hit || hit->t >= len - eps)
                return std::nullopt;

            Vec3 bounce = mirror + hit->t * dir;
            double total = (bounce - tx).norm() + (rx - bounce).norm();
            return BounceCandidate{bounce, total, facet_index};
        }
    } // namespace

    std::vector<PathGeometry> enumerate_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx)
    {
        constexpr double eps = 1e-6;
        std::vector<PathGeometry> paths;

        Vec3 d = rx - tx;
        double dist = d.norm();
        if (dist < eps)
            throw std::invalid_argument("enumerate_paths: terminals coincide.");

        if (!segment_occluded(scene, tx, rx, eps))
        {
            PathGeometry p;
            p.path_id = 1;
            p.kind = PathKind::los;
            p.delay_s = dist / speed_of_light;
            p.angles = path_angles(d, -d);
            paths.push_back(p);
        }

        for (std::size_t k = 0; k < scene.scatterers.size(); ++k)
        {
            const Scatterer &sc = scene.scatterers[k];
            if (!sc.reflective)
                continue;

            std::optional<BounceCandidate> best;
            for (std::size_t f = 0; f < sc.facets.size(); ++f)
            {
                auto cand = facet_bounce(sc.facets[f], static_cast<int>(f), tx, rx, eps);
                if (!cand)
                    continue;
                if (segment_occluded(scene, tx, cand->point, eps) ||
                    segment_occluded(scene, cand->point, rx, eps))
                    continue;
                if (!best || cand->total_len < best->total_len - eps)
                    best = cand; // ties keep the lowest facet index (first seen)
            }
            if (!best)
                continue;

            PathGeometry p;
            p.path_id = 2 + static_cast<int>(k);
            p.kind = PathKind::nlos;
            p.delay_s = best->total_len / speed_of_light;
            p.angles = path_angles(best->point - tx, best->point - rx);
            p.bounce = best->point;
            p.scatterer = static_cast<int>(k);
            p.facet = best->facet;
            paths.push_back(p);
        }
        return paths;
    }

} // namespace u2v
