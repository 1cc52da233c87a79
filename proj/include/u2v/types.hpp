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

#ifndef u2v_types_H
#define u2v_types_H

#include <Eigen/Dense>
#include <complex>
#include <cmath>

namespace u2v
{

    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;
    using Complex = std::complex<double>;

    // Exact propagation speed, m/s
    constexpr double speed_of_light = 299792458.0;

    constexpr double pi = 3.141592653589793238462643383279502884;

    // Departure / arrival direction of one propagation path or ray, radians.
    // Azimuth is measured in the x-y plane from +x, elevation from the
    // horizontal plane towards +z.
    struct AngleSet
    {
        double aaod = 0.0; // azimuth of departure
        double eaod = 0.0; // elevation of departure
        double aaoa = 0.0; // azimuth of arrival
        double eaoa = 0.0; // elevation of arrival
    };

    // Wrap an angle to (-pi, pi]
    inline double wrap_pi(double x)
    {
        double y = std::fmod(x + pi, 2.0 * pi);
        if (y <= 0.0)
            y += 2.0 * pi;
        return y - pi;
    }

} // namespace u2v

#endif
