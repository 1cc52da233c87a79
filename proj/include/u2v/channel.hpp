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

#ifndef u2v_channel_H
#define u2v_channel_H

#include "u2v/bpnn.hpp"
#include "u2v/gan.hpp"
#include "u2v/kinematics.hpp"
#include "u2v/scene.hpp"
#include "u2v/types.hpp"

#include <cstdint>
#include <vector>

namespace u2v
{

    // Element offsets in the terminal body frame, m
    struct AntennaArray
    {
        std::vector<Vec3> elements = {Vec3::Zero()};
    };

    // Everything geometric and kinematic a channel realization needs. The tx
    // terminal is the airborne one and carries the attitude profile.
    struct Scenario
    {
        double carrier_hz = 28e9;
        Trajectory tx;
        Trajectory rx;
        AntennaArray tx_array;
        AntennaArray rx_array;
        Scene scene;
        int rays_per_path = 20; // rays per reflected path; the direct path has one
    };

    // One ray at one snapshot. The phasor is exp(j(initial + movement +
    // rotation)) and always has unit magnitude.
    struct Ray
    {
        int ray_id = 0;
        AngleSet angles;             // mean path angles plus this ray's fixed offsets
        double phase_initial = 0.0;  // drawn at path birth
        double phase_movement = 0.0; // Doppler phase accumulated since birth
        double phase_rotation = 0.0; // antenna placement and attitude offset
        double doppler_hz = 0.0;     // instantaneous shift at this snapshot
        Complex phasor{1.0, 0.0};
    };

    struct PathSnapshot
    {
        int path_id = 0;
        PathKind kind = PathKind::los;
        double delay_s = 0.0;
        double power_db = 0.0;
        double power_lin = 0.0;
        std::vector<Ray> rays;
    };

    // Normalized path coefficient, the ray sum scaled by 1/sqrt(ray count)
    Complex path_coefficient(const PathSnapshot &path);

    struct CirSnapshot
    {
        double t = 0.0;
        std::vector<PathSnapshot> paths;

        // motion state recorded for spatial statistics
        Mat3 rv_tx = Mat3::Identity();    // tx velocity alignment
        Mat3 rv_rx = Mat3::Identity();    // rx velocity alignment
        Mat3 attitude = Mat3::Identity(); // tx attitude rotation
        double doppler_bound_hz = 0.0;    // f0 (|v_tx| + |v_rx|) / c
    };

    // Channel history of one (tx element, rx element) pair
    struct PairCir
    {
        int tx_element = 0;
        int rx_element = 0;
        double carrier_hz = 0.0;
        std::vector<CirSnapshot> snapshots;
    };

    // Time-variant channel realization for every antenna pair. Paths are
    // tracked across snapshots by path id: a path keeps its initial phases and
    // angle offsets while it lives, accumulates Doppler phase trapezoidally,
    // and redraws both (from streams keyed by path id and birth count) each
    // time it is born. Snapshots with no valid path are legal and empty.
    std::vector<PairCir> build_cir(const Scenario &scenario, const PowerNet &los_net,
                                   const PowerNet &nlos_net, const GanModel &gan_azimuth,
                                   const GanModel &gan_elevation,
                                   const std::vector<double> &t_grid, std::uint64_t seed);

    // Frequency response of one snapshot: sum of sqrt(P_n) h_n exp(-j2pi f tau_n)
    Complex transfer_function(const CirSnapshot &snapshot, double f_hz);

} // namespace u2v

#endif
