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

#include "u2v/kinematics.hpp"

#include <stdexcept>

namespace u2v
{

    namespace
    {
        // Index of the segment [t[i], t[i+1]] containing time t; waypoint times
        // resolve to the right segment, the final time to the last segment.
        std::size_t segment_index(const std::vector<double> &knots, double t)
        {
            if (knots.empty())
                throw std::invalid_argument("Trajectory has no waypoints.");
            if (t < knots.front() || t > knots.back())
                throw std::out_of_range("Time outside the trajectory range.");
            if (knots.size() == 1)
                return 0;

            std::size_t i = 0;
            while (i + 2 < knots.size() && t >= knots[i + 1])
                ++i;
            if (t >= knots.back())
                i = knots.size() - 2;
            return i;
        }
    } // namespace

    Vec3 position_at(const Trajectory &traj, double t)
    {
        if (traj.t.size() != traj.pos.size())
            throw std::invalid_argument("Waypoint time and position counts differ.");
        std::size_t i = segment_index(traj.t, t);
        if (traj.t.size() == 1)
            return traj.pos.front();

        double span = traj.t[i + 1] - traj.t[i];
        double u = (t - traj.t[i]) / span;
        return traj.pos[i] + u * (traj.pos[i + 1] - traj.pos[i]);
    }

    Vec3 velocity_at(const Trajectory &traj, double t)
    {
        if (traj.t.size() != traj.pos.size())
            throw std::invalid_argument("Waypoint time and position counts differ.");
        if (traj.t.size() < 2)
        {
            segment_index(traj.t, t); // still validates the time range
            return Vec3::Zero();
        }

        std::size_t i = segment_index(traj.t, t);
        // Right-segment slope at interior waypoints; t == t.back() lands on the
        // final segment by construction of segment_index.
        if (t >= traj.t[i + 1] && i + 2 < traj.t.size())
            ++i;
        return (traj.pos[i + 1] - traj.pos[i]) / (traj.t[i + 1] - traj.t[i]);
    }

    Vec3 attitude_at(const Trajectory &traj, double t)
    {
        if (traj.att_t.empty())
            return Vec3::Zero();
        if (traj.att_t.size() != traj.att.size())
            throw std::invalid_argument("Attitude knot time and angle counts differ.");
        if (traj.att_t.size() == 1)
            return traj.att.front();

        // Attitude is clamped to the profile ends rather than extrapolated
        if (t <= traj.att_t.front())
            return traj.att.front();
        if (t >= traj.att_t.back())
            return traj.att.back();

        std::size_t i = segment_index(traj.att_t, t);
        double u = (t - traj.att_t[i]) / (traj.att_t[i + 1] - traj.att_t[i]);
        return traj.att[i] + u * (traj.att[i + 1] - traj.att[i]);
    }

    Vec3 spherical_unit(double azimuth, double elevation)
    {
        double cb = std::cos(elevation);
        return Vec3(cb * std::cos(azimuth), cb * std::sin(azimuth), std::sin(elevation));
    }

    Mat3 rotation_from_velocity(double azimuth_v, double elevation_v)
    {
        double ca = std::cos(azimuth_v), sa = std::sin(azimuth_v);
        double cb = std::cos(elevation_v), sb = std::sin(elevation_v);
        Mat3 r;
        r << ca * cb, -sa, -ca * sb,
             sa * cb,  ca, -sa * sb,
             sb,      0.0,  cb;
        return r;
    }

    Mat3 rotation_from_velocity(const Vec3 &v, double eps)
    {
        double n = v.norm();
        if (n < eps)
            return Mat3::Identity();
        double az = std::atan2(v.y(), v.x());
        double el = std::asin(v.z() / n);
        return rotation_from_velocity(az, el);
    }

    Mat3 rotation_from_attitude(double omega, double phi, double gamma)
    {
        double cw = std::cos(omega), sw = std::sin(omega);
        double cp = std::cos(phi), sp = std::sin(phi);
        double cg = std::cos(gamma), sg = std::sin(gamma);
        Mat3 r;
        r << cw * cp, cw * sp * sg - sw * cg, cw * sp * cg + sw * sg,
             sw * cp, sw * sp * sg + cw * cg, sw * sp * cg - cw * sg,
             -sp,     cp * sg,                cp * cg;
        return r;
    }

    double doppler_frequency(const AngleSet &angles, const Vec3 &v_tx, const Vec3 &v_rx, double f0)
    {
        Vec3 r_tx = spherical_unit(angles.aaod, angles.eaod);
        Vec3 r_rx = spherical_unit(angles.aaoa, angles.eaoa);
        return f0 / speed_of_light * (r_tx.dot(v_tx) + r_rx.dot(v_rx));
    }

    double accumulate_phase(const std::vector<double> &freqs, double dt)
    {
        if (freqs.size() < 2)
            return 0.0;
        double sum = 0.5 * (freqs.front() + freqs.back());
        for (std::size_t i = 1; i + 1 < freqs.size(); ++i)
            sum += freqs[i];
        return 2.0 * pi * sum * dt;
    }

    double movement_phase(const std::vector<AngleSet> &angles,
                          const std::vector<Vec3> &v_tx,
                          const std::vector<Vec3> &v_rx,
                          double f0, double dt)
    {
        if (angles.size() != v_tx.size() || angles.size() != v_rx.size())
            throw std::invalid_argument("movement_phase: sample counts differ.");

        std::vector<double> freqs(angles.size());
        for (std::size_t i = 0; i < angles.size(); ++i)
            freqs[i] = doppler_frequency(angles[i], v_tx[i], v_rx[i], f0);
        return accumulate_phase(freqs, dt);
    }

    double rotation_phase(const AngleSet &angles,
                          const Mat3 &rv_tx, const Mat3 &attitude, const Mat3 &rv_rx,
                          const Vec3 &d_tx, const Vec3 &d_rx, double f0)
    {
        Vec3 r_tx = spherical_unit(angles.aaod, angles.eaod);
        Vec3 r_rx = spherical_unit(angles.aaoa, angles.eaoa);
        double k = 2.0 * pi * f0 / speed_of_light;
        return k * (r_rx.dot(rv_rx * d_rx) + r_tx.dot(rv_tx * (attitude * d_tx)));
    }

} // namespace u2v
