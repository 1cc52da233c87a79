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

#ifndef u2v_scene_H
#define u2v_scene_H

#include "u2v/types.hpp"

#include <optional>
#include <vector>

namespace u2v
{

    struct Triangle
    {
        Vec3 v0, v1, v2;
    };

    // A scattering object: triangle facets around a nominal centroid. Only
    // reflective scatterers spawn specular paths; all facets block sight lines.
    struct Scatterer
    {
        Vec3 centroid = Vec3::Zero();
        bool reflective = true;
        std::vector<Triangle> facets;
    };

    struct Scene
    {
        std::vector<Scatterer> scatterers;
        std::vector<Triangle> obstacles; // blocking-only geometry
    };

    // Axis-aligned box expanded to 12 triangles (two per face)
    std::vector<Triangle> box_facets(const Vec3 &center, const Vec3 &size);

    struct RayHit
    {
        double t; // distance along the (unit) ray direction, m
        double u; // barycentric coordinates on the triangle
        double v;
    };

    // Moeller-Trumbore ray/triangle intersection. Boundary hits (edges and
    // vertices) count as intersections; eps is the parallelism cutoff and the
    // minimum hit distance, m. dir must be unit length for t to be metric.
    std::optional<RayHit> ray_triangle_intersect(const Vec3 &origin, const Vec3 &dir,
                                                 const Triangle &tri, double eps = 1e-6);

    // True when any scene triangle crosses the open segment a..b. Hits within
    // eps of either endpoint are ignored so that reflection legs anchored on a
    // facet do not block themselves.
    bool segment_occluded(const Scene &scene, const Vec3 &a, const Vec3 &b, double eps = 1e-6);

    // Azimuth (four-quadrant) and elevation of a direction vector, rad.
    // Throws std::invalid_argument on a zero vector.
    std::pair<double, double> direction_angles(const Vec3 &d);

    // AngleSet from outward departure/arrival direction vectors
    AngleSet path_angles(const Vec3 &d_tx, const Vec3 &d_rx);

    enum class PathKind
    {
        los,
        nlos
    };

    struct PathGeometry
    {
        int path_id = 0;  // 1 = line of sight, 2 + k = reflection off scatterer k
        PathKind kind = PathKind::los;
        double delay_s = 0.0;
        AngleSet angles;       // outward directions at each terminal
        Vec3 bounce = Vec3::Zero(); // reflection point, nlos only
        int scatterer = -1;
        int facet = -1;
    };

    // All valid propagation paths between tx and rx: the direct path when it is
    // unobstructed, plus at most one specular reflection per reflective
    // scatterer (mirror-image construction; among facets yielding an interior,
    // unobstructed bounce the shortest total path wins, ties to the lowest
    // facet index). Paths are ordered by path_id.
    std::vector<PathGeometry> enumerate_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx);

} // namespace u2v

#endif
