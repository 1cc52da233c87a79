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

#include "u2v/bpnn.hpp"
#include "u2v/channel.hpp"
#include "u2v/io.hpp"
#include "u2v/rng.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

using namespace u2v;

namespace
{

    // a small but complete scenario document exercising every field
    std::string sample_config()
    {
        return R"({
  "schema_version": 1,
  "carrier_hz": 28e9,
  "rays_per_path": 6,
  "seed": 11,
  "time": {"start": 0.5, "stop": 1.5, "step": 0.25},
  "tx": {"t": [0.0, 2.0], "pos": [[0.0, 0.0, 30.0], [20.0, 0.0, 30.0]],
         "att_t": [0.0, 2.0], "att": [[0.0, 0.0, 0.0], [0.1, -0.2, 0.3]]},
  "rx": {"t": [0.0, 2.0], "pos": [[80.0, 20.0, 1.5], [70.0, 30.0, 1.5]]},
  "tx_array": [[0.0, 0.0, 0.0], [0.0, 0.005, 0.0]],
  "rx_array": [[0.0, 0.0, 0.0]],
  "scene": {
    "scatterers": [
      {"center": [50.0, 40.0, 10.0], "size": [20.0, 4.0, 20.0]},
      {"center": [10.0, -30.0, 8.0], "size": [6.0, 6.0, 16.0], "reflective": true}
    ],
    "obstacles": [
      {"center": [40.0, 10.0, 12.0], "size": [4.0, 4.0, 24.0]}
    ]
  },
  "models": {
    "bpnn_los": "models/a.json",
    "bpnn_nlos": "models/b.json",
    "gan_azimuth": "models/c.json",
    "gan_elevation": "models/d.json"
  }
})";
    }

    // replace the first occurrence of a fragment in the sample document
    std::string mutate(const std::string &from, const std::string &to)
    {
        std::string text = sample_config();
        auto at = text.find(from);
        REQUIRE(at != std::string::npos);
        return text.replace(at, from.size(), to);
    }

    GanModel tiny_gan(double w0, double w1, double b)
    {
        GanModel g;
        g.generator = make_mlp({2, 1}, {Activation::linear});
        g.generator.weights[0](0, 0) = w0;
        g.generator.weights[0](0, 1) = w1;
        g.generator.biases[0](0) = b;
        g.discriminator = make_mlp({1, 1}, {Activation::sigmoid});
        g.noise = NoiseKind::uniform;
        g.noise_dim = 2;
        return g;
    }

    // moving receiver that passes behind a blocking slab, so the dump has
    // populated snapshots, a path handoff and one empty snapshot
    std::vector<PairCir> blocked_drive_cir()
    {
        Scenario sc;
        sc.rays_per_path = 4;
        sc.tx.t = {0.0, 1.0};
        sc.tx.pos = {{0, 90, 30}, {0, 90, 30}};
        sc.rx.t = {0.0, 1.0};
        sc.rx.pos = {{80, 0, 1.5}, {-80, 0, 1.5}};
        sc.tx_array.elements = {Vec3::Zero(), Vec3(0, 0.005, 0)};
        Scatterer s;
        s.centroid = {-40, 40, 10};
        s.facets = box_facets(s.centroid, {20, 8, 20});
        sc.scene.scatterers.push_back(s);
        for (const Triangle &facet : box_facets({30, 45, 40}, {10, 10, 80}))
            sc.scene.obstacles.push_back(facet);
        std::vector<double> grid = {0.0, 0.1, 0.2, 0.5, 0.9};
        return build_cir(sc, builtin_los_power_net(), builtin_nlos_power_net(),
                         tiny_gan(0.05, 0.03, 0.01), tiny_gan(0.02, -0.015, -0.004), grid, 5);
    }

    std::filesystem::path fresh_dir(const char *tag)
    {
        auto dir = std::filesystem::temp_directory_path() /
                   (std::string("u2v_io_") + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

} // namespace

TEST_SUITE("io")
{

    TEST_CASE("full precision formatting survives a parse round trip")
    {
        RandomStream rng(3);
        for (int i = 0; i < 200; ++i)
        {
            double x = rng.normal(0.0, 1.0) * std::pow(10.0, rng.uniform(-12.0, 12.0));
            CHECK(std::stod(format_full(x)) == x);
        }
        CHECK(format_full(0.0) == "0");
        CHECK(format_full(1.0) == "1");
        CHECK(std::stod(format_full(pi)) == pi);
    }

    TEST_CASE("the byte hash matches the published test vectors")
    {
        // FNV-1a 64-bit reference values
        CHECK(fnv1a("") == 14695981039346656037ull);
        CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
        CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
        CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
        CHECK(hex64(0) == "0000000000000000");
        CHECK(hex64(0xffffffffffffffffull) == "ffffffffffffffff");
    }

    TEST_CASE("the snapshot schedule lands on the endpoints")
    {
        std::vector<double> g = expand_grid({0.0, 1.0, 0.25});
        REQUIRE(g.size() == 5);
        CHECK(g.front() == 0.0);
        CHECK(g.back() == 1.0);

        // an inexact step still reaches the endpoint within tolerance
        g = expand_grid({0.0, 1.0, 0.1});
        CHECK(g.size() == 11);

        // endpoint below a full step keeps the shorter grid
        g = expand_grid({2.0, 2.5, 0.2});
        REQUIRE(g.size() == 3);
        CHECK(g.back() == doctest::Approx(2.4));

        CHECK_THROWS_AS(expand_grid({0.0, 1.0, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(expand_grid({0.0, 1.0, -0.1}), std::invalid_argument);
        CHECK_THROWS_AS(expand_grid({1.0, 1.0, 0.1}), std::invalid_argument);
    }

    TEST_CASE("a scenario document round trips exactly")
    {
        ScenarioConfig cfg = scenario_from_json_string(sample_config());
        CHECK(cfg.schema_version == 1);
        CHECK(cfg.scenario.carrier_hz == 28e9);
        CHECK(cfg.scenario.rays_per_path == 6);
        CHECK(cfg.seed == 11);
        CHECK(cfg.time.start == 0.5);
        CHECK(cfg.time.stop == 1.5);
        CHECK(cfg.time.step == 0.25);
        REQUIRE(cfg.scenario.tx.t.size() == 2);
        CHECK(cfg.scenario.tx.pos[1] == Vec3(20, 0, 30));
        REQUIRE(cfg.scenario.tx.att.size() == 2);
        CHECK(cfg.scenario.tx.att[1] == Vec3(0.1, -0.2, 0.3));
        CHECK(cfg.scenario.rx.att.empty());
        REQUIRE(cfg.scenario.tx_array.elements.size() == 2);
        CHECK(cfg.scenario.tx_array.elements[1] == Vec3(0, 0.005, 0));
        REQUIRE(cfg.scatterer_boxes.size() == 2);
        CHECK(cfg.scatterer_boxes[0].center == Vec3(50, 40, 10));
        CHECK(cfg.scatterer_boxes[0].reflective);
        REQUIRE(cfg.obstacle_boxes.size() == 1);
        CHECK(cfg.models.gan_elevation == "models/d.json");

        // the parsed geometry is expanded into facets
        REQUIRE(cfg.scenario.scene.scatterers.size() == 2);
        CHECK(cfg.scenario.scene.scatterers[0].facets.size() == 12);
        CHECK(cfg.scenario.scene.obstacles.size() == 12);

        // serialize, reparse, compare every scalar
        ScenarioConfig back = scenario_from_json_string(scenario_to_json_string(cfg));
        CHECK(back.scenario.carrier_hz == cfg.scenario.carrier_hz);
        CHECK(back.seed == cfg.seed);
        CHECK(back.time.step == cfg.time.step);
        CHECK(back.scenario.tx.pos[1] == cfg.scenario.tx.pos[1]);
        CHECK(back.scenario.tx.att[1] == cfg.scenario.tx.att[1]);
        CHECK(back.scatterer_boxes[1].size == cfg.scatterer_boxes[1].size);
        CHECK(back.models.bpnn_los == cfg.models.bpnn_los);
        CHECK(scenario_to_json_string(back) == scenario_to_json_string(cfg));
    }

    TEST_CASE("scenario validation names the offending field")
    {
        auto fails = [](const std::string &text, const char *message) {
            try
            {
                scenario_from_json_string(text);
                FAIL_CHECK("expected rejection: ", message);
            }
            catch (const std::invalid_argument &e)
            {
                CHECK(std::string(e.what()) == message);
            }
        };

        fails("{", "scenario config: [json.exception.parse_error.101] parse error at line 1, "
                   "column 2: syntax error while parsing object key - unexpected end of input; "
                   "expected string literal");
        fails("3", "scenario config must be an object.");
        fails(mutate("\"schema_version\": 1", "\"schema_version\": 2"),
              "schema_version 1 is the only supported version.");
        fails(mutate("\"carrier_hz\": 28e9", "\"carrier_hz\": 0"), "carrier_hz must be positive.");
        fails(mutate("\"rays_per_path\": 6", "\"rays_per_path\": 2.5"),
              "rays_per_path must be a positive integer.");
        fails(mutate("\"step\": 0.25", "\"step\": -1"), "time.step must be positive.");
        fails(mutate("\"stop\": 1.5", "\"stop\": 0.5"), "time.stop must exceed time.start.");
        fails(mutate("\"seed\": 11", "\"seed\": -4"), "seed must be a non-negative integer.");
        fails(mutate("\"t\": [0.0, 2.0], \"pos\": [[0.0, 0.0, 30.0], [20.0, 0.0, 30.0]]",
                     "\"t\": [0.0, 2.0], \"pos\": [[0.0, 0.0, 30.0]]"),
              "tx.pos must match tx.t in length.");
        fails(mutate("\"t\": [0.0, 2.0], \"pos\": [[80.0, 20.0, 1.5], [70.0, 30.0, 1.5]]",
                     "\"t\": [2.0, 0.0], \"pos\": [[80.0, 20.0, 1.5], [70.0, 30.0, 1.5]]"),
              "rx.t must be strictly increasing.");
        fails(mutate("\"att_t\": [0.0, 2.0], ", ""), "tx needs att and att_t together.");
        fails(mutate("\"size\": [20.0, 4.0, 20.0]", "\"size\": [20.0, 0.0, 20.0]"),
              "scene.scatterers[0].size must be positive.");
        fails(mutate("\"center\": [40.0, 10.0, 12.0]", "\"center\": [40.0, 10.0]"),
              "scene.obstacles[0].center must be an array of three numbers.");
        fails(mutate("\"rx_array\": [[0.0, 0.0, 0.0]]", "\"rx_array\": []"),
              "antenna arrays must list at least one element.");
        fails(mutate("\"gan_azimuth\": \"models/c.json\"", "\"gan_azimuth\": 4"),
              "models.gan_azimuth must be a string.");
        fails(mutate("\"carrier_hz\": 28e9,", ""), "carrier_hz is missing.");

        // the models block is optional as a whole
        std::string text = sample_config();
        auto at = text.find("  \"models\"");
        ScenarioConfig cfg = scenario_from_json_string(text.substr(0, at - 2) + "\n}");
        CHECK(cfg.models.bpnn_los.empty());
    }

    TEST_CASE("model paths resolve against the config directory")
    {
        auto dir = fresh_dir("load");
        std::filesystem::create_directories(dir / "models");
        write_text_atomic((dir / "scenario.json").string(), sample_config());

        ScenarioConfig cfg = load_scenario((dir / "scenario.json").string());
        CHECK(cfg.models.bpnn_los == (dir / "models/a.json").string());
        CHECK(cfg.models.gan_elevation == (dir / "models/d.json").string());
        CHECK_THROWS_AS(load_scenario((dir / "nope.json").string()), std::invalid_argument);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("atomic writes leave the final file and nothing else")
    {
        auto dir = fresh_dir("atomic");
        auto file = dir / "out.txt";
        write_text_atomic(file.string(), "first");
        CHECK(read_text_file(file.string()) == "first");
        write_text_atomic(file.string(), "second");
        CHECK(read_text_file(file.string()) == "second");

        std::size_t entries = 0;
        for (auto &entry : std::filesystem::directory_iterator(dir))
        {
            (void)entry;
            ++entries;
        }
        CHECK(entries == 1);

        CHECK_THROWS_AS(read_text_file((dir / "missing.txt").string()), std::invalid_argument);
        CHECK_THROWS_AS(write_text_atomic((dir / "no/such/dir/x").string(), "y"),
                        std::invalid_argument);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("a ray dataset survives the csv round trip bit for bit")
    {
        RtDataset data;
        RandomStream rng(9);
        for (int i = 0; i < 50; ++i)
        {
            RayRecord rec;
            rec.channel_id = i / 5;
            rec.path_id = 1 + i % 3;
            rec.delay_s = rng.uniform(1e-7, 1e-5);
            rec.power_db = rng.uniform(-140.0, -60.0);
            rec.aaoa = rng.uniform(-pi, pi);
            rec.eaoa = rng.uniform(-1.5, 1.5);
            rec.aaod = rng.uniform(-pi, pi);
            rec.eaod = rng.uniform(-1.5, 1.5);
            rec.los = i % 5 == 0;
            data.records.push_back(rec);
        }
        data.skipped_pairs = 3;

        RtDataset back = dataset_from_csv(dataset_to_csv(data));
        REQUIRE(back.records.size() == data.records.size());
        for (std::size_t i = 0; i < data.records.size(); ++i)
        {
            CHECK(back.records[i].channel_id == data.records[i].channel_id);
            CHECK(back.records[i].path_id == data.records[i].path_id);
            CHECK(back.records[i].delay_s == data.records[i].delay_s);
            CHECK(back.records[i].power_db == data.records[i].power_db);
            CHECK(back.records[i].aaoa == data.records[i].aaoa);
            CHECK(back.records[i].eaoa == data.records[i].eaoa);
            CHECK(back.records[i].aaod == data.records[i].aaod);
            CHECK(back.records[i].eaod == data.records[i].eaod);
            CHECK(back.records[i].los == data.records[i].los);
        }
        // the skip counter is run metadata, not part of the table
        CHECK(back.skipped_pairs == 0);
        CHECK(dataset_to_csv(back) == dataset_to_csv(data));
    }

    TEST_CASE("angle offsets survive the csv round trip bit for bit")
    {
        std::vector<AngleOffset> offsets;
        RandomStream rng(4);
        for (int i = 0; i < 64; ++i)
            offsets.push_back({rng.laplace(0.0, 0.05), rng.laplace(0.0, 0.02)});
        std::vector<AngleOffset> back = offsets_from_csv(offsets_to_csv(offsets));
        REQUIRE(back.size() == offsets.size());
        for (std::size_t i = 0; i < offsets.size(); ++i)
        {
            CHECK(back[i].dazimuth == offsets[i].dazimuth);
            CHECK(back[i].delevation == offsets[i].delevation);
        }
        CHECK(offsets_from_csv("dazimuth,delevation\n").empty());
    }

    TEST_CASE("malformed tables are rejected with the line number")
    {
        auto fails = [](auto &&parse, const std::string &text, const char *message) {
            try
            {
                parse(text);
                FAIL_CHECK("expected rejection: ", message);
            }
            catch (const std::invalid_argument &e)
            {
                CHECK(std::string(e.what()) == message);
            }
        };
        auto data = [](const std::string &t) { return dataset_from_csv(t); };
        auto offs = [](const std::string &t) { return offsets_from_csv(t); };

        fails(data, "", "dataset csv is empty.");
        fails(data, "channel,product\n",
              "dataset csv header must be "
              "'channel_id,path_id,delay_s,power_db,aaoa,eaoa,aaod,eaod,los'.");
        fails(data, dataset_to_csv({}) + "0,1,2e-7,-90,0,0,0,0\n",
              "dataset csv line 2: expected 9 columns, got 8.");
        fails(data, dataset_to_csv({}) + "0,1,oops,-90,0,0,0,0,1\n",
              "dataset csv line 2: bad number 'oops'.");
        fails(data, dataset_to_csv({}) + "0,1.5,2e-7,-90,0,0,0,0,1\n",
              "dataset csv line 2: bad integer '1.5'.");
        fails(data, dataset_to_csv({}) + "0,1,2e-7,-90,0,0,0,0,2\n",
              "dataset csv line 2: los must be 0 or 1.");
        fails(offs, "dazimuth\n", "offsets csv header must be 'dazimuth,delevation'.");
        fails(offs, "dazimuth,delevation\n0.1\n",
              "offsets csv line 2: expected 2 columns, got 1.");
    }

    TEST_CASE("a channel dump round trips through the csv pair")
    {
        std::vector<PairCir> pairs = blocked_drive_cir();
        REQUIRE(pairs.size() == 2);
        REQUIRE(pairs[0].snapshots.size() == 5);

        // the drive passes behind the slab: snapshot at t = 0.1 is dark
        bool saw_empty = false;
        for (const CirSnapshot &snap : pairs[0].snapshots)
            if (snap.paths.empty())
                saw_empty = true;
        REQUIRE(saw_empty);

        std::vector<PairCir> back = cir_from_csv(cir_to_csv(pairs), motion_to_csv(pairs));
        REQUIRE(back.size() == pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p)
        {
            CHECK(back[p].carrier_hz == pairs[p].carrier_hz);
            REQUIRE(back[p].snapshots.size() == pairs[p].snapshots.size());
            for (std::size_t k = 0; k < pairs[p].snapshots.size(); ++k)
            {
                const CirSnapshot &a = pairs[p].snapshots[k];
                const CirSnapshot &b = back[p].snapshots[k];
                CHECK(b.t == a.t);
                CHECK(b.doppler_bound_hz == a.doppler_bound_hz);
                CHECK((b.rv_tx - a.rv_tx).norm() == 0.0);
                CHECK((b.rv_rx - a.rv_rx).norm() == 0.0);
                CHECK((b.attitude - a.attitude).norm() == 0.0);
                REQUIRE(b.paths.size() == a.paths.size());
                for (std::size_t n = 0; n < a.paths.size(); ++n)
                {
                    CHECK(b.paths[n].path_id == a.paths[n].path_id);
                    CHECK((b.paths[n].kind == a.paths[n].kind));
                    CHECK(b.paths[n].delay_s == a.paths[n].delay_s);
                    CHECK(b.paths[n].power_db == a.paths[n].power_db);
                    CHECK(b.paths[n].power_lin == a.paths[n].power_lin);
                    REQUIRE(b.paths[n].rays.size() == a.paths[n].rays.size());
                    for (std::size_t m = 0; m < a.paths[n].rays.size(); ++m)
                    {
                        const Ray &ra = a.paths[n].rays[m];
                        const Ray &rb = b.paths[n].rays[m];
                        CHECK(rb.ray_id == ra.ray_id);
                        CHECK(rb.angles.aaoa == ra.angles.aaoa);
                        CHECK(rb.angles.eaoa == ra.angles.eaoa);
                        CHECK(rb.angles.aaod == ra.angles.aaod);
                        CHECK(rb.angles.eaod == ra.angles.eaod);
                        CHECK(rb.phasor == ra.phasor);
                    }
                }
            }
        }

        // a rewrite of the readback is byte-identical
        CHECK(cir_to_csv(back) == cir_to_csv(pairs));
        CHECK(motion_to_csv(back) == motion_to_csv(pairs));
    }

    TEST_CASE("channel dump parsing validates cross references")
    {
        std::vector<PairCir> pairs = blocked_drive_cir();
        std::string cir = cir_to_csv(pairs);
        std::string motion = motion_to_csv(pairs);

        CHECK_THROWS_AS(cir_from_csv(cir, "t,pairs\n1,2\n"), std::invalid_argument);
        CHECK_THROWS_AS(cir_from_csv("t,pair\n", motion), std::invalid_argument);
        CHECK_THROWS_AS(cir_to_csv({}), std::invalid_argument);
        CHECK_THROWS_AS(motion_to_csv({}), std::invalid_argument);

        std::string cir_head = cir.substr(0, cir.find('\n') + 1);
        auto fails = [&](const std::string &row, const char *message) {
            try
            {
                cir_from_csv(cir_head + row, motion);
                FAIL_CHECK("expected rejection: ", message);
            }
            catch (const std::invalid_argument &e)
            {
                CHECK(std::string(e.what()) == message);
            }
        };
        fails("0,7,1,0,2e-7,-90,0,0,0,0,0\n", "cir csv line 2: pair index out of range.");
        fails("0.05,0,1,0,2e-7,-90,0,0,0,0,0\n",
              "cir csv line 2: snapshot time not in the motion csv.");

        // duplicate snapshot times in the motion table are rejected
        std::string dup = motion;
        std::string first_row = motion.substr(motion.find('\n') + 1);
        first_row = first_row.substr(0, first_row.find('\n') + 1);
        CHECK_THROWS_AS(cir_from_csv(cir, motion + first_row), std::invalid_argument);
    }

    TEST_CASE("the run manifest records the command and its products")
    {
        RunManifest m;
        m.command = "u2vsim simulate --scenario s.json";
        m.config_hash = hex64(fnv1a("body"));
        m.seed = 42;
        m.outputs = {"out/cir.csv", "out/motion.csv"};
        m.wall_time_s = 1.25;
        m.warnings = {"one"};

        nlohmann::json j = nlohmann::json::parse(manifest_to_json_string(m));
        CHECK(j.at("schema_version") == 1);
        CHECK(j.at("command") == m.command);
        CHECK(j.at("config_hash") == m.config_hash);
        CHECK(j.at("seed") == 42);
        CHECK(j.at("tool_version") == std::string(tool_version));
        CHECK(j.at("outputs").size() == 2);
        CHECK(j.at("outputs")[1] == "out/motion.csv");
        CHECK(j.at("wall_time_s") == 1.25);
        CHECK(j.at("warnings")[0] == "one");
    }
}
