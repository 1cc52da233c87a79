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

#ifndef u2v_stats_H
#define u2v_stats_H

#include "u2v/channel.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace u2v
{

    // Correlation estimators take the expectation over re-randomized initial
    // phases: every Monte Carlo member rotates each ray by a fresh uniform
    // phase keyed by (member, path id), identical at both correlation ends.
    // Correlations are normalized by the root mean energies of the two ends,
    // so a zero lag is exactly 1 and the isotropic-scattering limit matches
    // the classical Bessel curve.
    struct StatsConfig
    {
        int ensemble = 100;     // Monte Carlo members
        std::uint64_t seed = 0; // phase re-randomization stream
        double freq_hz = 0.0;   // frequency offset for the delay term
    };

    // Power delay profile of one snapshot: per-path impulses (delay s, power linear)
    std::vector<std::pair<double, double>> pdp(const CirSnapshot &snapshot);

    // Antenna spacing sweep. Lag ell places the displaced element at
    // ell * lambda * dir from the reference element, in each terminal's body
    // frame; a zero direction keeps that terminal's element fixed.
    struct SpacingGrid
    {
        Vec3 dir_tx = Vec3(0, 1, 0);
        Vec3 dir_rx = Vec3::Zero();
        std::vector<double> lags; // spacing / wavelength
    };

    struct StcfResult
    {
        std::vector<double> dt;   // s
        std::vector<double> lags; // spacing / wavelength
        std::vector<std::vector<Complex>> rho; // [dt index][lag index]
    };

    // Joint spatial-temporal correlation around reference time t. Both t and
    // every t + dt must land on the snapshot grid (within 1 ns). The spacing
    // phase of the displaced end uses that snapshot's recorded velocity
    // alignments and the caller-chosen tx attitude rotation; ends with no
    // paths yield 0.
    StcfResult stcf(const PairCir &channel, double t, const std::vector<double> &dt_grid,
                    const SpacingGrid &spacing, const Mat3 &attitude,
                    const StatsConfig &cfg);

    // Temporal slice: normalized ACF per dt (stcf at zero spacing)
    std::vector<Complex> acf(const PairCir &channel, double t,
                             const std::vector<double> &dt_grid, const StatsConfig &cfg);

    // Spatial slice: real part of the normalized CCF per lag (stcf at dt = 0)
    std::vector<double> ccf(const PairCir &channel, double t, const SpacingGrid &spacing,
                            const Mat3 &attitude, const StatsConfig &cfg);

    struct DpsdResult
    {
        std::vector<double> freq_hz; // ascending, centered on 0
        std::vector<double> power;   // magnitude spectrum, per Hz
        bool aliasing_risk = false;  // snapshot rate < twice the Doppler bound
    };

    // Doppler power spectrum around t_center: Hann-windowed transform of the
    // un-normalized correlation over [t_center - window/2, t_center + window/2],
    // zero-padded to nfft bins. The expectation over initial phases collapses
    // to the per-ray diagonal, so the spectrum is deterministic. The window
    // must fit in the simulated span and cover a uniform stretch of the
    // snapshot grid.
    DpsdResult dpsd(const PairCir &channel, double t_center, double window_s, int nfft);

} // namespace u2v

#endif
