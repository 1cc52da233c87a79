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

#include "u2v/io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace u2v
{

    std::string format_full(double x)
    {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }

    std::string read_text_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::invalid_argument("cannot open " + path + " for reading.");
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    void write_text_atomic(const std::string &path, const std::string &content)
    {
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::invalid_argument("cannot open " + tmp + " for writing.");
            out << content;
            out.flush();
            if (!out)
                throw std::runtime_error("write to " + tmp + " failed.");
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec)
            throw std::runtime_error("cannot move " + tmp + " to " + path + ": " + ec.message());
    }

    std::uint64_t fnv1a(const std::string &bytes)
    {
        std::uint64_t hash = 14695981039346656037ULL;
        for (unsigned char c : bytes)
        {
            hash ^= c;
            hash *= 1099511628211ULL;
        }
        return hash;
    }

    std::string hex64(std::uint64_t value)
    {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
        return buf;
    }

    std::vector<double> expand_grid(const TimeBlock &block)
    {
        if (block.step <= 0.0)
            throw std::invalid_argument("time.step must be positive.");
        if (block.stop <= block.start)
            throw std::invalid_argument("time.stop must exceed time.start.");
        const long count =
            static_cast<long>(std::floor((block.stop - block.start) / block.step + 1e-9)) + 1;
        std::vector<double> grid;
        grid.reserve(static_cast<std::size_t>(count));
        for (long k = 0; k < count; ++k)
            grid.push_back(block.start + static_cast<double>(k) * block.step);
        return grid;
    }

    namespace
    {
        using nlohmann::json;
        using nlohmann::ordered_json;

        const json &field(const json &j, const char *key, const std::string &path)
        {
            auto it = j.find(key);
            if (it == j.end())
                throw std::invalid_argument(path + " is missing.");
            return *it;
        }

        double get_number(const json &j, const std::string &path)
        {
            if (!j.is_number())
                throw std::invalid_argument(path + " must be a number.");
            return j.get<double>();
        }

        std::uint64_t get_u64(const json &j, const std::string &path)
        {
            if (!j.is_number_unsigned())
                throw std::invalid_argument(path + " must be a non-negative integer.");
            return j.get<std::uint64_t>();
        }

        Vec3 get_vec3(const json &j, const std::string &path)
        {
            if (!j.is_array() || j.size() != 3)
                throw std::invalid_argument(path + " must be an array of three numbers.");
            Vec3 v;
            for (int i = 0; i < 3; ++i)
                v(i) = get_number(j[static_cast<std::size_t>(i)],
                                  path + "[" + std::to_string(i) + "]");
            return v;
        }

        std::vector<double> get_number_list(const json &j, const std::string &path)
        {
            if (!j.is_array())
                throw std::invalid_argument(path + " must be an array of numbers.");
            std::vector<double> out;
            out.reserve(j.size());
            for (std::size_t i = 0; i < j.size(); ++i)
                out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
            return out;
        }

        std::vector<Vec3> get_vec3_list(const json &j, const std::string &path)
        {
            if (!j.is_array())
                throw std::invalid_argument(path + " must be an array of points.");
            std::vector<Vec3> out;
            out.reserve(j.size());
            for (std::size_t i = 0; i < j.size(); ++i)
                out.push_back(get_vec3(j[i], path + "[" + std::to_string(i) + "]"));
            return out;
        }

        void check_increasing(const std::vector<double> &t, const std::string &path)
        {
            for (std::size_t i = 1; i < t.size(); ++i)
                if (t[i] <= t[i - 1])
                    throw std::invalid_argument(path + " must be strictly increasing.");
        }

        Trajectory get_trajectory(const json &j, const std::string &path)
        {
            if (!j.is_object())
                throw std::invalid_argument(path + " must be an object.");
            Trajectory traj;
            traj.t = get_number_list(field(j, "t", path + ".t"), path + ".t");
            traj.pos = get_vec3_list(field(j, "pos", path + ".pos"), path + ".pos");
            if (traj.t.empty())
                throw std::invalid_argument(path + ".t must not be empty.");
            if (traj.t.size() != traj.pos.size())
                throw std::invalid_argument(path + ".pos must match " + path + ".t in length.");
            check_increasing(traj.t, path + ".t");
            if (j.contains("att") != j.contains("att_t"))
                throw std::invalid_argument(path + " needs att and att_t together.");
            if (j.contains("att"))
            {
                traj.att_t = get_number_list(j.at("att_t"), path + ".att_t");
                traj.att = get_vec3_list(j.at("att"), path + ".att");
                if (traj.att_t.size() != traj.att.size())
                    throw std::invalid_argument(path + ".att must match " + path +
                                                ".att_t in length.");
                check_increasing(traj.att_t, path + ".att_t");
            }
            return traj;
        }

        BoxSpec get_box(const json &j, const std::string &path)
        {
            if (!j.is_object())
                throw std::invalid_argument(path + " must be an object.");
            BoxSpec box;
            box.center = get_vec3(field(j, "center", path + ".center"), path + ".center");
            box.size = get_vec3(field(j, "size", path + ".size"), path + ".size");
            if (box.size.minCoeff() <= 0.0)
                throw std::invalid_argument(path + ".size must be positive.");
            if (j.contains("reflective"))
            {
                if (!j.at("reflective").is_boolean())
                    throw std::invalid_argument(path + ".reflective must be a boolean.");
                box.reflective = j.at("reflective").get<bool>();
            }
            return box;
        }

        ordered_json trajectory_to_json(const Trajectory &traj)
        {
            ordered_json j;
            j["t"] = traj.t;
            ordered_json pos = ordered_json::array();
            for (const Vec3 &p : traj.pos)
                pos.push_back({p.x(), p.y(), p.z()});
            j["pos"] = pos;
            if (!traj.att_t.empty())
            {
                j["att_t"] = traj.att_t;
                ordered_json att = ordered_json::array();
                for (const Vec3 &a : traj.att)
                    att.push_back({a.x(), a.y(), a.z()});
                j["att"] = att;
            }
            return j;
        }

        ordered_json box_to_json(const BoxSpec &box, bool with_reflective)
        {
            ordered_json j;
            j["center"] = {box.center.x(), box.center.y(), box.center.z()};
            j["size"] = {box.size.x(), box.size.y(), box.size.z()};
            if (with_reflective)
                j["reflective"] = box.reflective;
            return j;
        }

        std::vector<std::string> split_line(const std::string &line)
        {
            std::vector<std::string> out;
            std::size_t start = 0;
            while (true)
            {
                std::size_t comma = line.find(',', start);
                if (comma == std::string::npos)
                {
                    out.push_back(line.substr(start));
                    return out;
                }
                out.push_back(line.substr(start, comma - start));
                start = comma + 1;
            }
        }

        // Lines of a CSV body after validating the header, dropping a final
        // empty line
        std::vector<std::string> csv_lines(const std::string &text, const char *header,
                                           const char *what)
        {
            std::vector<std::string> lines;
            std::size_t start = 0;
            while (start <= text.size())
            {
                std::size_t nl = text.find('\n', start);
                if (nl == std::string::npos)
                {
                    if (start < text.size())
                        lines.push_back(text.substr(start));
                    break;
                }
                lines.push_back(text.substr(start, nl - start));
                start = nl + 1;
            }
            if (lines.empty())
                throw std::invalid_argument(std::string(what) + " is empty.");
            if (lines.front() != header)
                throw std::invalid_argument(std::string(what) + " header must be '" + header +
                                            "'.");
            lines.erase(lines.begin());
            return lines;
        }

        double parse_double(const std::string &tok, std::size_t line, const char *what)
        {
            try
            {
                std::size_t used = 0;
                double v = std::stod(tok, &used);
                if (used != tok.size())
                    throw std::invalid_argument(tok);
                return v;
            }
            catch (const std::exception &)
            {
                throw std::invalid_argument(std::string(what) + " line " + std::to_string(line) +
                                            ": bad number '" + tok + "'.");
            }
        }

        int parse_int(const std::string &tok, std::size_t line, const char *what)
        {
            try
            {
                std::size_t used = 0;
                int v = std::stoi(tok, &used);
                if (used != tok.size())
                    throw std::invalid_argument(tok);
                return v;
            }
            catch (const std::exception &)
            {
                throw std::invalid_argument(std::string(what) + " line " + std::to_string(line) +
                                            ": bad integer '" + tok + "'.");
            }
        }

        void expect_columns(const std::vector<std::string> &cols, std::size_t n, std::size_t line,
                            const char *what)
        {
            if (cols.size() != n)
                throw std::invalid_argument(std::string(what) + " line " + std::to_string(line) +
                                            ": expected " + std::to_string(n) + " columns, got " +
                                            std::to_string(cols.size()) + ".");
        }
    } // namespace

    ScenarioConfig scenario_from_json_string(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(std::string("scenario config: ") + e.what());
        }
        if (!j.is_object())
            throw std::invalid_argument("scenario config must be an object.");

        ScenarioConfig cfg;
        double version = get_number(field(j, "schema_version", "schema_version"),
                                    "schema_version");
        if (version != 1.0)
            throw std::invalid_argument("schema_version 1 is the only supported version.");
        cfg.schema_version = 1;

        cfg.scenario.carrier_hz = get_number(field(j, "carrier_hz", "carrier_hz"), "carrier_hz");
        if (cfg.scenario.carrier_hz <= 0.0)
            throw std::invalid_argument("carrier_hz must be positive.");

        double rays = get_number(field(j, "rays_per_path", "rays_per_path"), "rays_per_path");
        if (rays < 1.0 || rays != std::floor(rays))
            throw std::invalid_argument("rays_per_path must be a positive integer.");
        cfg.scenario.rays_per_path = static_cast<int>(rays);

        cfg.seed = get_u64(field(j, "seed", "seed"), "seed");

        const json &time = field(j, "time", "time");
        cfg.time.start = get_number(field(time, "start", "time.start"), "time.start");
        cfg.time.stop = get_number(field(time, "stop", "time.stop"), "time.stop");
        cfg.time.step = get_number(field(time, "step", "time.step"), "time.step");
        if (cfg.time.step <= 0.0)
            throw std::invalid_argument("time.step must be positive.");
        if (cfg.time.stop <= cfg.time.start)
            throw std::invalid_argument("time.stop must exceed time.start.");

        cfg.scenario.tx = get_trajectory(field(j, "tx", "tx"), "tx");
        cfg.scenario.rx = get_trajectory(field(j, "rx", "rx"), "rx");

        cfg.scenario.tx_array.elements =
            get_vec3_list(field(j, "tx_array", "tx_array"), "tx_array");
        cfg.scenario.rx_array.elements =
            get_vec3_list(field(j, "rx_array", "rx_array"), "rx_array");
        if (cfg.scenario.tx_array.elements.empty() || cfg.scenario.rx_array.elements.empty())
            throw std::invalid_argument("antenna arrays must list at least one element.");

        const json &scene = field(j, "scene", "scene");
        const json &scatterers = field(scene, "scatterers", "scene.scatterers");
        if (!scatterers.is_array())
            throw std::invalid_argument("scene.scatterers must be an array.");
        for (std::size_t i = 0; i < scatterers.size(); ++i)
        {
            BoxSpec box =
                get_box(scatterers[i], "scene.scatterers[" + std::to_string(i) + "]");
            cfg.scatterer_boxes.push_back(box);
            Scatterer s;
            s.centroid = box.center;
            s.reflective = box.reflective;
            s.facets = box_facets(box.center, box.size);
            cfg.scenario.scene.scatterers.push_back(std::move(s));
        }
        if (scene.contains("obstacles"))
        {
            const json &obstacles = scene.at("obstacles");
            if (!obstacles.is_array())
                throw std::invalid_argument("scene.obstacles must be an array.");
            for (std::size_t i = 0; i < obstacles.size(); ++i)
            {
                BoxSpec box =
                    get_box(obstacles[i], "scene.obstacles[" + std::to_string(i) + "]");
                cfg.obstacle_boxes.push_back(box);
                std::vector<Triangle> facets = box_facets(box.center, box.size);
                cfg.scenario.scene.obstacles.insert(cfg.scenario.scene.obstacles.end(),
                                                    facets.begin(), facets.end());
            }
        }

        if (j.contains("models"))
        {
            const json &models = j.at("models");
            if (!models.is_object())
                throw std::invalid_argument("models must be an object.");
            auto path_of = [&](const char *key) -> std::string {
                if (!models.contains(key))
                    return {};
                if (!models.at(key).is_string())
                    throw std::invalid_argument(std::string("models.") + key +
                                                " must be a string.");
                return models.at(key).get<std::string>();
            };
            cfg.models.bpnn_los = path_of("bpnn_los");
            cfg.models.bpnn_nlos = path_of("bpnn_nlos");
            cfg.models.gan_azimuth = path_of("gan_azimuth");
            cfg.models.gan_elevation = path_of("gan_elevation");
        }
        return cfg;
    }

    std::string scenario_to_json_string(const ScenarioConfig &cfg)
    {
        ordered_json j;
        j["schema_version"] = cfg.schema_version;
        j["carrier_hz"] = cfg.scenario.carrier_hz;
        j["rays_per_path"] = cfg.scenario.rays_per_path;
        j["seed"] = cfg.seed;
        j["time"] = {{"start", cfg.time.start}, {"stop", cfg.time.stop}, {"step", cfg.time.step}};
        j["tx"] = trajectory_to_json(cfg.scenario.tx);
        j["rx"] = trajectory_to_json(cfg.scenario.rx);

        ordered_json tx_array = ordered_json::array();
        for (const Vec3 &e : cfg.scenario.tx_array.elements)
            tx_array.push_back({e.x(), e.y(), e.z()});
        j["tx_array"] = tx_array;
        ordered_json rx_array = ordered_json::array();
        for (const Vec3 &e : cfg.scenario.rx_array.elements)
            rx_array.push_back({e.x(), e.y(), e.z()});
        j["rx_array"] = rx_array;

        ordered_json scatterers = ordered_json::array();
        for (const BoxSpec &box : cfg.scatterer_boxes)
            scatterers.push_back(box_to_json(box, true));
        ordered_json obstacles = ordered_json::array();
        for (const BoxSpec &box : cfg.obstacle_boxes)
            obstacles.push_back(box_to_json(box, false));
        j["scene"] = {{"scatterers", scatterers}, {"obstacles", obstacles}};

        j["models"] = {{"bpnn_los", cfg.models.bpnn_los},
                       {"bpnn_nlos", cfg.models.bpnn_nlos},
                       {"gan_azimuth", cfg.models.gan_azimuth},
                       {"gan_elevation", cfg.models.gan_elevation}};
        return j.dump(2) + "\n";
    }

    ScenarioConfig load_scenario(const std::string &path)
    {
        ScenarioConfig cfg = scenario_from_json_string(read_text_file(path));
        const std::filesystem::path base = std::filesystem::path(path).parent_path();
        auto resolve = [&](std::string &p) {
            if (!p.empty() && std::filesystem::path(p).is_relative())
                p = (base / p).string();
        };
        resolve(cfg.models.bpnn_los);
        resolve(cfg.models.bpnn_nlos);
        resolve(cfg.models.gan_azimuth);
        resolve(cfg.models.gan_elevation);
        return cfg;
    }

    namespace
    {
        constexpr const char *dataset_header =
            "channel_id,path_id,delay_s,power_db,aaoa,eaoa,aaod,eaod,los";
        constexpr const char *offsets_header = "dazimuth,delevation";
        constexpr const char *cir_header =
            "t,pair,path_id,ray_id,delay_s,power_db,aaoa,eaoa,aaod,eaod,phase_rad";
        constexpr const char *motion_header =
            "t,pairs,carrier_hz,doppler_bound_hz,"
            "rv_tx_00,rv_tx_01,rv_tx_02,rv_tx_10,rv_tx_11,rv_tx_12,rv_tx_20,rv_tx_21,rv_tx_22,"
            "rv_rx_00,rv_rx_01,rv_rx_02,rv_rx_10,rv_rx_11,rv_rx_12,rv_rx_20,rv_rx_21,rv_rx_22,"
            "att_00,att_01,att_02,att_10,att_11,att_12,att_20,att_21,att_22";
    } // namespace

    std::string dataset_to_csv(const RtDataset &data)
    {
        std::string out = dataset_header;
        out += '\n';
        for (const RayRecord &rec : data.records)
        {
            out += std::to_string(rec.channel_id);
            out += ',';
            out += std::to_string(rec.path_id);
            out += ',';
            out += format_full(rec.delay_s);
            out += ',';
            out += format_full(rec.power_db);
            out += ',';
            out += format_full(rec.aaoa);
            out += ',';
            out += format_full(rec.eaoa);
            out += ',';
            out += format_full(rec.aaod);
            out += ',';
            out += format_full(rec.eaod);
            out += ',';
            out += rec.los ? '1' : '0';
            out += '\n';
        }
        return out;
    }

    RtDataset dataset_from_csv(const std::string &text)
    {
        RtDataset data;
        std::vector<std::string> lines = csv_lines(text, dataset_header, "dataset csv");
        for (std::size_t i = 0; i < lines.size(); ++i)
        {
            const std::size_t line_no = i + 2;
            std::vector<std::string> cols = split_line(lines[i]);
            expect_columns(cols, 9, line_no, "dataset csv");
            RayRecord rec;
            rec.channel_id = parse_int(cols[0], line_no, "dataset csv");
            rec.path_id = parse_int(cols[1], line_no, "dataset csv");
            rec.delay_s = parse_double(cols[2], line_no, "dataset csv");
            rec.power_db = parse_double(cols[3], line_no, "dataset csv");
            rec.aaoa = parse_double(cols[4], line_no, "dataset csv");
            rec.eaoa = parse_double(cols[5], line_no, "dataset csv");
            rec.aaod = parse_double(cols[6], line_no, "dataset csv");
            rec.eaod = parse_double(cols[7], line_no, "dataset csv");
            if (cols[8] != "0" && cols[8] != "1")
                throw std::invalid_argument("dataset csv line " + std::to_string(line_no) +
                                            ": los must be 0 or 1.");
            rec.los = cols[8] == "1";
            data.records.push_back(rec);
        }
        return data;
    }

    std::string offsets_to_csv(const std::vector<AngleOffset> &offsets)
    {
        std::string out = offsets_header;
        out += '\n';
        for (const AngleOffset &o : offsets)
        {
            out += format_full(o.dazimuth);
            out += ',';
            out += format_full(o.delevation);
            out += '\n';
        }
        return out;
    }

    std::vector<AngleOffset> offsets_from_csv(const std::string &text)
    {
        std::vector<AngleOffset> out;
        std::vector<std::string> lines = csv_lines(text, offsets_header, "offsets csv");
        for (std::size_t i = 0; i < lines.size(); ++i)
        {
            const std::size_t line_no = i + 2;
            std::vector<std::string> cols = split_line(lines[i]);
            expect_columns(cols, 2, line_no, "offsets csv");
            AngleOffset o;
            o.dazimuth = parse_double(cols[0], line_no, "offsets csv");
            o.delevation = parse_double(cols[1], line_no, "offsets csv");
            out.push_back(o);
        }
        return out;
    }

    std::string cir_to_csv(const std::vector<PairCir> &pairs)
    {
        if (pairs.empty())
            throw std::invalid_argument("channel has no pairs.");
        std::string out = cir_header;
        out += '\n';
        for (std::size_t pair = 0; pair < pairs.size(); ++pair)
            for (const CirSnapshot &snap : pairs[pair].snapshots)
                for (const PathSnapshot &path : snap.paths)
                    for (const Ray &ray : path.rays)
                    {
                        out += format_full(snap.t);
                        out += ',';
                        out += std::to_string(pair);
                        out += ',';
                        out += std::to_string(path.path_id);
                        out += ',';
                        out += std::to_string(ray.ray_id);
                        out += ',';
                        out += format_full(path.delay_s);
                        out += ',';
                        out += format_full(path.power_db);
                        out += ',';
                        out += format_full(ray.angles.aaoa);
                        out += ',';
                        out += format_full(ray.angles.eaoa);
                        out += ',';
                        out += format_full(ray.angles.aaod);
                        out += ',';
                        out += format_full(ray.angles.eaod);
                        out += ',';
                        out += format_full(ray.phase_initial + ray.phase_movement +
                                           ray.phase_rotation);
                        out += '\n';
                    }
        return out;
    }

    std::string motion_to_csv(const std::vector<PairCir> &pairs)
    {
        if (pairs.empty())
            throw std::invalid_argument("channel has no pairs.");
        std::string out = motion_header;
        out += '\n';
        for (const CirSnapshot &snap : pairs.front().snapshots)
        {
            out += format_full(snap.t);
            out += ',';
            out += std::to_string(pairs.size());
            out += ',';
            out += format_full(pairs.front().carrier_hz);
            out += ',';
            out += format_full(snap.doppler_bound_hz);
            for (const Mat3 *m : {&snap.rv_tx, &snap.rv_rx, &snap.attitude})
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c)
                    {
                        out += ',';
                        out += format_full((*m)(r, c));
                    }
            out += '\n';
        }
        return out;
    }

    std::vector<PairCir> cir_from_csv(const std::string &cir_text, const std::string &motion_text)
    {
        std::vector<std::string> motion_lines =
            csv_lines(motion_text, motion_header, "motion csv");
        if (motion_lines.empty())
            throw std::invalid_argument("motion csv has no snapshots.");

        std::vector<CirSnapshot> skeleton;
        std::map<double, std::size_t> by_time;
        std::size_t n_pairs = 0;
        double carrier = 0.0;
        for (std::size_t i = 0; i < motion_lines.size(); ++i)
        {
            const std::size_t line_no = i + 2;
            std::vector<std::string> cols = split_line(motion_lines[i]);
            expect_columns(cols, 31, line_no, "motion csv");
            CirSnapshot snap;
            snap.t = parse_double(cols[0], line_no, "motion csv");
            int pairs_col = parse_int(cols[1], line_no, "motion csv");
            if (pairs_col < 1)
                throw std::invalid_argument("motion csv line " + std::to_string(line_no) +
                                            ": pair count must be positive.");
            if (i == 0)
            {
                n_pairs = static_cast<std::size_t>(pairs_col);
                carrier = parse_double(cols[2], line_no, "motion csv");
            }
            snap.doppler_bound_hz = parse_double(cols[3], line_no, "motion csv");
            std::size_t col = 4;
            for (Mat3 *m : {&snap.rv_tx, &snap.rv_rx, &snap.attitude})
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c)
                        (*m)(r, c) = parse_double(cols[col++], line_no, "motion csv");
            if (!by_time.emplace(snap.t, skeleton.size()).second)
                throw std::invalid_argument("motion csv line " + std::to_string(line_no) +
                                            ": duplicate snapshot time.");
            skeleton.push_back(std::move(snap));
        }

        std::vector<PairCir> pairs(n_pairs);
        for (std::size_t p = 0; p < n_pairs; ++p)
        {
            pairs[p].carrier_hz = carrier;
            pairs[p].snapshots = skeleton;
        }

        std::vector<std::string> cir_lines = csv_lines(cir_text, cir_header, "cir csv");
        for (std::size_t i = 0; i < cir_lines.size(); ++i)
        {
            const std::size_t line_no = i + 2;
            std::vector<std::string> cols = split_line(cir_lines[i]);
            expect_columns(cols, 11, line_no, "cir csv");
            double t = parse_double(cols[0], line_no, "cir csv");
            int pair = parse_int(cols[1], line_no, "cir csv");
            if (pair < 0 || static_cast<std::size_t>(pair) >= n_pairs)
                throw std::invalid_argument("cir csv line " + std::to_string(line_no) +
                                            ": pair index out of range.");
            auto found = by_time.find(t);
            if (found == by_time.end())
                throw std::invalid_argument("cir csv line " + std::to_string(line_no) +
                                            ": snapshot time not in the motion csv.");
            CirSnapshot &snap = pairs[static_cast<std::size_t>(pair)].snapshots[found->second];

            int path_id = parse_int(cols[2], line_no, "cir csv");
            if (snap.paths.empty() || snap.paths.back().path_id != path_id)
            {
                PathSnapshot path;
                path.path_id = path_id;
                path.kind = path_id == 1 ? PathKind::los : PathKind::nlos;
                path.delay_s = parse_double(cols[4], line_no, "cir csv");
                path.power_db = parse_double(cols[5], line_no, "cir csv");
                path.power_lin = std::pow(10.0, path.power_db / 10.0);
                snap.paths.push_back(std::move(path));
            }
            Ray ray;
            ray.ray_id = parse_int(cols[3], line_no, "cir csv");
            ray.angles.aaoa = parse_double(cols[6], line_no, "cir csv");
            ray.angles.eaoa = parse_double(cols[7], line_no, "cir csv");
            ray.angles.aaod = parse_double(cols[8], line_no, "cir csv");
            ray.angles.eaod = parse_double(cols[9], line_no, "cir csv");
            ray.phase_initial = parse_double(cols[10], line_no, "cir csv");
            ray.phasor = Complex{std::cos(ray.phase_initial), std::sin(ray.phase_initial)};
            snap.paths.back().rays.push_back(ray);
        }
        return pairs;
    }

    std::string manifest_to_json_string(const RunManifest &m)
    {
        ordered_json j;
        j["schema_version"] = 1;
        j["command"] = m.command;
        j["config_hash"] = m.config_hash;
        j["seed"] = m.seed;
        j["tool_version"] = m.version;
        j["outputs"] = m.outputs;
        j["wall_time_s"] = m.wall_time_s;
        j["warnings"] = m.warnings;
        return j.dump(2) + "\n";
    }

} // namespace u2v
