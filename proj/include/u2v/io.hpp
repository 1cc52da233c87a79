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

#ifndef u2v_io_H
#define u2v_io_H

#include "u2v/channel.hpp"
#include "u2v/clustering.hpp"
#include "u2v/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace u2v
{

    inline constexpr const char *tool_version = "0.1.0";

    // Decimal form with 17 significant digits; parses back to the same double
    std::string format_full(double x);

    // Whole file as a string. Throws std::invalid_argument naming the path.
    std::string read_text_file(const std::string &path);

    // Write-to-temporary-then-rename, so readers never observe a partial file
    void write_text_atomic(const std::string &path, const std::string &content);

    // 64-bit FNV-1a of a byte string, and its fixed-width hex form
    std::uint64_t fnv1a(const std::string &bytes);
    std::string hex64(std::uint64_t value);

    // Uniform snapshot schedule: start, start + step, ... up to stop inclusive
    // (within half a step of tolerance)
    struct TimeBlock
    {
        double start = 0.0;
        double stop = 0.0;
        double step = 0.0;
    };
    std::vector<double> expand_grid(const TimeBlock &block);

    // Axis-aligned box in a scenario document; kept alongside the expanded
    // facets so configs round trip
    struct BoxSpec
    {
        Vec3 center = Vec3::Zero();
        Vec3 size = Vec3::Ones();
        bool reflective = true;
    };

    struct ModelPaths
    {
        std::string bpnn_los;
        std::string bpnn_nlos;
        std::string gan_azimuth;
        std::string gan_elevation;
    };

    // One scenario document: geometry, kinematics, arrays, schedule, seed and
    // the model files a simulation should load. Scatterers and obstacles are
    // described as boxes; scenario.scene holds their expanded facets.
    struct ScenarioConfig
    {
        int schema_version = 1;
        Scenario scenario;
        std::vector<BoxSpec> scatterer_boxes;
        std::vector<BoxSpec> obstacle_boxes;
        TimeBlock time;
        std::uint64_t seed = 0;
        ModelPaths models; // as written in the document
    };

    // Parse/serialize a scenario document. Errors carry the offending field
    // path. load_scenario additionally resolves model paths relative to the
    // config file's directory.
    ScenarioConfig scenario_from_json_string(const std::string &text);
    std::string scenario_to_json_string(const ScenarioConfig &cfg);
    ScenarioConfig load_scenario(const std::string &path);

    // Ray dataset CSV:
    //   channel_id,path_id,delay_s,power_db,aaoa,eaoa,aaod,eaod,los
    std::string dataset_to_csv(const RtDataset &data);
    RtDataset dataset_from_csv(const std::string &text);

    // Angle offset CSV: dazimuth,delevation
    std::string offsets_to_csv(const std::vector<AngleOffset> &offsets);
    std::vector<AngleOffset> offsets_from_csv(const std::string &text);

    // Channel dump CSV, one row per ray per path per snapshot per pair:
    //   t,pair,path_id,ray_id,delay_s,power_db,aaoa,eaoa,aaod,eaod,phase_rad
    // pair is the index into the pair list; phase_rad is the full accumulated
    // ray phase, so the unit phasor reconstructs exactly. The motion CSV keeps
    // the per-snapshot state the dump rows cannot carry (the snapshot grid
    // itself including empty snapshots, velocity alignments, attitude, Doppler
    // bound, carrier); the pair readback leaves element indices at zero.
    std::string cir_to_csv(const std::vector<PairCir> &pairs);
    std::string motion_to_csv(const std::vector<PairCir> &pairs);
    std::vector<PairCir> cir_from_csv(const std::string &cir_text, const std::string &motion_text);

    // Run record emitted next to every command's outputs
    struct RunManifest
    {
        std::string command;
        std::string config_hash; // fnv1a-64 of the primary input document
        std::uint64_t seed = 0;
        std::string version = tool_version;
        std::vector<std::string> outputs;
        double wall_time_s = 0.0;
        std::vector<std::string> warnings;
    };
    std::string manifest_to_json_string(const RunManifest &m);

} // namespace u2v

#endif
