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

#ifndef u2v_kinematics_H
#define u2v_kinematics_H

#include "u2v/types.hpp"

#include <cstddef>
#include <vector>

namespace u2v
{

    // Piecewise-linear motion profile of one terminal. Position is interpolated
    // between waypoints; attitude (omega, phi, gamma) between attitude knots.
    // An empty attitude profile means a level attitude (identity rotation).
    struct Trajectory
    {
        std::vector<double> t;   // waypoint times, strictly increasing
        std::vector<Vec3> pos;   // waypoint positions, m

        std::vector<double> att_t; // attitude knot times, strictly increasing
        std::vector<Vec3> att;     // attitude knots (omega, phi, gamma), rad
    };

    // Position at time t, m. Throws std::out_of_range outside [t.front(), t.back()].
    Vec3 position_at(const Trajectory &traj, double t);

    // Velocity at time t, m/s. Piecewise constant; at a waypoint time the
    // right-segment slope is returned, at the final time the last segment's.
    Vec3 velocity_at(const Trajectory &traj, double t);

    // Attitude angles (omega, phi, gamma) at time t, rad. Zero when no profile is set.
    Vec3 attitude_at(const Trajectory &traj, double t);

    // Unit direction [cos(el)cos(az), cos(el)sin(az), sin(el)]
    Vec3 spherical_unit(double azimuth, double elevation);

    // Rotation aligning the terminal frame with its direction of motion,
    //   | cos(av)cos(bv)  -sin(av)  -cos(av)sin(bv) |
    //   | sin(av)cos(bv)   cos(av)  -sin(av)sin(bv) |
    //   | sin(bv)          0         cos(bv)        |
    // where av/bv are the azimuth/elevation of the velocity vector.
    Mat3 rotation_from_velocity(double azimuth_v, double elevation_v);

    // Same, with the angles taken from a velocity vector; identity for |v| < eps
    Mat3 rotation_from_velocity(const Vec3 &v, double eps = 1e-12);

    // Attitude rotation in the (omega, phi, gamma) parametrization,
    //   | cos(w)cos(p)  cos(w)sin(p)sin(g)-sin(w)cos(g)  cos(w)sin(p)cos(g)+sin(w)sin(g) |
    //   | sin(w)cos(p)  sin(w)sin(p)sin(g)+cos(w)cos(g)  sin(w)sin(p)cos(g)-cos(w)sin(g) |
    //   | -sin(p)       cos(p)sin(g)                     cos(p)cos(g)                    |
    // with w = omega (z axis), p = phi (y axis), g = gamma (x axis).
    Mat3 rotation_from_attitude(double omega, double phi, double gamma);

    // Instantaneous Doppler shift of a ray, Hz:
    //   f = (f0/c) (r_tx . v_tx + r_rx . v_rx)
    // with r_tx/r_rx the outward unit directions of departure and arrival.
    // Positive while the terminals close on each other along the ray.
    double doppler_frequency(const AngleSet &angles, const Vec3 &v_tx, const Vec3 &v_rx, double f0);

    // Trapezoidal integral of 2*pi*f over a uniform time grid, rad.
    // freqs holds f sampled at t0, t0+dt, ..., t0+(n-1)dt.
    double accumulate_phase(const std::vector<double> &freqs, double dt);

    // Phase accrued by terminal motion over a uniform grid: Doppler frequency is
    // evaluated per sample from (angles, velocities) and integrated trapezoidally.
    double movement_phase(const std::vector<AngleSet> &angles,
                          const std::vector<Vec3> &v_tx,
                          const std::vector<Vec3> &v_rx,
                          double f0, double dt);

    // Phase offset of an antenna pair with element offsets d_tx/d_rx (body frame, m):
    //   (2*pi*f0/c) * (r_rx . (rv_rx * d_rx) + r_tx . (rv_tx * attitude * d_tx))
    double rotation_phase(const AngleSet &angles,
                          const Mat3 &rv_tx, const Mat3 &attitude, const Mat3 &rv_rx,
                          const Vec3 &d_tx, const Vec3 &d_rx, double f0);

} // namespace u2v

#endif
