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
#include "u2v/gan.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace u2v;

namespace
{

    // hand-built offset model: small linear generator over 2d uniform noise
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

    Trajectory still(const Vec3 &p, double t0, double t1)
    {
        Trajectory tr;
        tr.t = {t0, t1};
        tr.pos = {p, p};
        return tr;
    }

    // hovering transmitter, vehicle driving toward a reflective block
    Scenario drive_by_block(int rays)
    {
        Scenario sc;
        sc.rays_per_path = rays;
        sc.tx = still({0, 0, 30}, 0, 1);
        sc.rx.t = {0, 1};
        sc.rx.pos = {{80, 20, 1.5}, {70, 30, 1.5}};
        Scatterer s;
        s.centroid = {50, 40, 10};
        s.facets = box_facets(s.centroid, {20, 4, 20});
        sc.scene.scatterers.push_back(s);
        return sc;
    }

    struct Models
    {
        PowerNet los = builtin_los_power_net();
        PowerNet nlos = builtin_nlos_power_net();
        GanModel az = tiny_gan(0.05, 0.03, 0.01);
        GanModel el = tiny_gan(0.02, -0.015, -0.004);
    };

    std::vector<PairCir> run(const Scenario &sc, const std::vector<double> &t_grid,
                             std::uint64_t seed)
    {
        Models md;
        return build_cir(sc, md.los, md.nlos, md.az, md.el, t_grid, seed);
    }

    bool phasors_equal(const std::vector<PairCir> &a, const std::vector<PairCir> &b)
    {
        if (a.size() != b.size())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            if (a[i].snapshots.size() != b[i].snapshots.size())
                return false;
            for (std::size_t k = 0; k < a[i].snapshots.size(); ++k)
            {
                const auto &pa = a[i].snapshots[k].paths;
                const auto &pb = b[i].snapshots[k].paths;
                if (pa.size() != pb.size())
                    return false;
                for (std::size_t n = 0; n < pa.size(); ++n)
                {
                    if (pa[n].rays.size() != pb[n].rays.size())
                        return false;
                    for (std::size_t m = 0; m < pa[n].rays.size(); ++m)
                        if (pa[n].rays[m].phasor != pb[n].rays[m].phasor ||
                            pa[n].rays[m].phase_rotation != pb[n].rays[m].phase_rotation)
                            return false;
                }
            }
        }
        return true;
    }

} // namespace

TEST_SUITE("channel")
{

    TEST_CASE("a static direct path keeps a constant phasor and exact geometry")
    {
        Scenario sc;
        sc.tx = still({0, 0, 30}, 0, 1);
        sc.rx = still({80, 20, 1.5}, 0, 1);
        auto cir = run(sc, {0.0, 0.4, 0.8}, 7);

        REQUIRE(cir.size() == 1);
        REQUIRE(cir[0].snapshots.size() == 3);
        REQUIRE(cir[0].snapshots[0].paths.size() == 1);

        const PathSnapshot &p0 = cir[0].snapshots[0].paths[0];
        CHECK(p0.path_id == 1);
        CHECK(p0.kind == PathKind::los);
        REQUIRE(p0.rays.size() == 1);
        CHECK(p0.rays[0].ray_id == 0);

        Vec3 d = Vec3{80, 20, 1.5} - Vec3{0, 0, 30};
        CHECK(p0.delay_s == doctest::Approx(d.norm() / speed_of_light).epsilon(1e-15));

        PowerNet los = builtin_los_power_net();
        CHECK(p0.power_db == power_db(los, p0.delay_s * 1e6));
        CHECK(p0.power_lin == doctest::Approx(std::pow(10.0, p0.power_db / 10.0)).epsilon(1e-15));

        // the single direct ray carries the geometric angles, no offsets
        AngleSet geo = path_angles(d, -d);
        CHECK(p0.rays[0].angles.aaod == geo.aaod);
        CHECK(p0.rays[0].angles.eaod == geo.eaod);
        CHECK(p0.rays[0].angles.aaoa == geo.aaoa);
        CHECK(p0.rays[0].angles.eaoa == geo.eaoa);

        for (int k = 0; k < 3; ++k)
        {
            const Ray &r = cir[0].snapshots[k].paths[0].rays[0];
            CHECK(r.phasor == p0.rays[0].phasor);
            CHECK(r.phase_movement == 0.0);
            CHECK(r.phase_rotation == 0.0);
            CHECK(r.doppler_hz == 0.0);
            CHECK(std::abs(r.phasor) == doctest::Approx(1.0).epsilon(1e-12));
        }

        Complex h = transfer_function(cir[0].snapshots[0], 0.0);
        Complex want = std::sqrt(p0.power_lin) *
                       Complex{std::cos(p0.rays[0].phase_initial),
                               std::sin(p0.rays[0].phase_initial)};
        CHECK(std::abs(h - want) < 1e-15);
    }

    TEST_CASE("an approaching transmitter accrues phase at the doppler rate")
    {
        Scenario sc;
        sc.tx.t = {0, 1};
        sc.tx.pos = {{0, 0, 50}, {30, 0, 50}};
        sc.rx = still({100, 0, 50}, 0, 1);

        const double dt = 1e-3;
        std::vector<double> tg;
        for (int k = 0; k < 6; ++k)
            tg.push_back(k * dt);
        auto cir = run(sc, tg, 3);

        double f = sc.carrier_hz * 30.0 / speed_of_light; // 2801.94 Hz closing
        for (int k = 0; k < 6; ++k)
        {
            const Ray &r = cir[0].snapshots[k].paths[0].rays[0];
            CHECK(r.doppler_hz == doctest::Approx(f).epsilon(1e-9));
            CHECK(r.phase_movement == doctest::Approx(2.0 * pi * f * k * dt).epsilon(1e-12));
        }
        CHECK(f == doctest::Approx(2801.9384).epsilon(1e-6));
    }

    TEST_CASE("a blocked direct path is reborn with fresh initial phases")
    {
        Scenario sc;
        sc.tx = still({0, 0, 50}, 0, 10);
        sc.rx.t = {0, 10};
        sc.rx.pos = {{-50, 30, 1.5}, {50, 30, 1.5}};
        sc.scene.obstacles = box_facets({0, 15, 10}, {10, 10, 20});

        std::vector<double> tg;
        for (int k = 0; k <= 20; ++k)
            tg.push_back(k * 0.5);
        auto cir = run(sc, tg, 11);

        // the building hides the hovering transmitter mid-drive
        for (int k = 0; k <= 20; ++k)
        {
            bool visible = k <= 8 || k >= 12;
            CHECK(cir[0].snapshots[k].paths.size() == (visible ? 1 : 0));
        }

        double first = cir[0].snapshots[0].paths[0].rays[0].phase_initial;
        double second = cir[0].snapshots[12].paths[0].rays[0].phase_initial;
        CHECK(first != second);

        // constant within each life
        for (int k = 1; k <= 8; ++k)
            CHECK(cir[0].snapshots[k].paths[0].rays[0].phase_initial == first);
        for (int k = 13; k <= 20; ++k)
            CHECK(cir[0].snapshots[k].paths[0].rays[0].phase_initial == second);
    }

    TEST_CASE("ray angle offsets persist while a path lives")
    {
        Scenario sc = drive_by_block(6);
        std::vector<double> tg = {0.0, 0.25, 0.5, 0.75, 1.0};
        auto cir = run(sc, tg, 21);

        std::vector<double> base_aaod, base_eaod, base_aaoa, base_eaoa;
        for (std::size_t k = 0; k < tg.size(); ++k)
        {
            Vec3 tx = position_at(sc.tx, tg[k]);
            Vec3 rx = position_at(sc.rx, tg[k]);
            auto geo = enumerate_paths(sc.scene, tx, rx);
            const PathGeometry *g = nullptr;
            for (const auto &cand : geo)
                if (cand.path_id == 2)
                    g = &cand;
            const PathSnapshot *p = nullptr;
            for (const auto &cand : cir[0].snapshots[k].paths)
                if (cand.path_id == 2)
                    p = &cand;
            REQUIRE(g != nullptr);
            REQUIRE(p != nullptr);
            REQUIRE(p->rays.size() == 6);

            for (std::size_t m = 0; m < p->rays.size(); ++m)
            {
                double od = wrap_pi(p->rays[m].angles.aaod - g->angles.aaod);
                double oed = p->rays[m].angles.eaod - g->angles.eaod;
                double oa = wrap_pi(p->rays[m].angles.aaoa - g->angles.aaoa);
                double oea = p->rays[m].angles.eaoa - g->angles.eaoa;
                if (k == 0)
                {
                    base_aaod.push_back(od);
                    base_eaod.push_back(oed);
                    base_aaoa.push_back(oa);
                    base_eaoa.push_back(oea);
                }
                else
                {
                    CHECK(od == doctest::Approx(base_aaod[m]).epsilon(1e-12));
                    CHECK(oed == doctest::Approx(base_eaod[m]).epsilon(1e-12));
                    CHECK(oa == doctest::Approx(base_aaoa[m]).epsilon(1e-12));
                    CHECK(oea == doctest::Approx(base_eaoa[m]).epsilon(1e-12));
                }
            }
        }

        // departure and arrival offsets come from independent draws
        bool differ = false;
        for (std::size_t m = 0; m < base_aaod.size(); ++m)
            if (base_aaod[m] != base_aaoa[m])
                differ = true;
        CHECK(differ);
    }

    TEST_CASE("every ray respects the doppler bound")
    {
        Scenario sc = drive_by_block(6);
        std::vector<double> tg = {0.0, 0.25, 0.5, 0.75, 1.0};
        auto cir = run(sc, tg, 21);

        CHECK(cir[0].carrier_hz == sc.carrier_hz);
        for (std::size_t k = 0; k < tg.size(); ++k)
        {
            Vec3 vt = velocity_at(sc.tx, tg[k]);
            Vec3 vr = velocity_at(sc.rx, tg[k]);
            double bound = sc.carrier_hz * (vt.norm() + vr.norm()) / speed_of_light;
            const CirSnapshot &snap = cir[0].snapshots[k];
            CHECK(snap.doppler_bound_hz == doctest::Approx(bound).epsilon(1e-15));
            CHECK((snap.rv_tx - rotation_from_velocity(vt)).norm() == 0.0);
            CHECK((snap.rv_rx - rotation_from_velocity(vr)).norm() == 0.0);
            CHECK((snap.attitude - Mat3::Identity()).norm() == 0.0);
            for (const auto &p : snap.paths)
                for (const auto &r : p.rays)
                    CHECK(std::abs(r.doppler_hz) <= bound + 1e-9);
        }
    }

    TEST_CASE("element phase offsets match the rotation formula")
    {
        Scenario sc = drive_by_block(4);
        sc.tx_array.elements = {Vec3{0, 0, 0}, Vec3{0.005, 0.002, 0}};
        sc.rx_array.elements = {Vec3{0, 0, 0}, Vec3{0, 0.005, 0.001}};
        sc.tx.att_t = {0, 1};
        sc.tx.att = {Vec3{0.2, 0.1, -0.05}, Vec3{0.3, 0.2, 0.05}};

        std::vector<double> tg = {0.0, 0.5, 1.0};
        auto cir = run(sc, tg, 21);
        REQUIRE(cir.size() == 4);

        // pairs come out transmitter-major
        CHECK(cir[0].tx_element == 0);
        CHECK(cir[0].rx_element == 0);
        CHECK(cir[1].tx_element == 0);
        CHECK(cir[1].rx_element == 1);
        CHECK(cir[2].tx_element == 1);
        CHECK(cir[2].rx_element == 0);
        CHECK(cir[3].tx_element == 1);
        CHECK(cir[3].rx_element == 1);

        for (std::size_t k = 0; k < tg.size(); ++k)
        {
            Mat3 rvt = rotation_from_velocity(velocity_at(sc.tx, tg[k]));
            Mat3 rvr = rotation_from_velocity(velocity_at(sc.rx, tg[k]));
            Vec3 at = attitude_at(sc.tx, tg[k]);
            Mat3 att = rotation_from_attitude(at(0), at(1), at(2));
            for (std::size_t q = 0; q < 2; ++q)
                for (std::size_t p = 0; p < 2; ++p)
                    for (const auto &path : cir[q * 2 + p].snapshots[k].paths)
                        for (const Ray &r : path.rays)
                        {
                            double want = rotation_phase(r.angles, rvt, att, rvr,
                                                         sc.tx_array.elements[q],
                                                         sc.rx_array.elements[p],
                                                         sc.carrier_hz);
                            CHECK(r.phase_rotation == doctest::Approx(want).epsilon(1e-12));
                        }
        }

        // co-located reference elements see no offset; initial phases are
        // shared by every pair of the same path
        CHECK(cir[0].snapshots[0].paths[0].rays[0].phase_rotation == 0.0);
        CHECK(cir[0].snapshots[0].paths[0].rays[0].phase_initial ==
              cir[3].snapshots[0].paths[0].rays[0].phase_initial);
    }

    TEST_CASE("normalized ray powers sum to one and the ensemble mean is flat")
    {
        Scenario sc = drive_by_block(20);
        sc.rx = still({80, 20, 1.5}, 0, 1);

        double acc = 0.0;
        int count = 0;
        for (int seed = 0; seed < 1000; ++seed)
        {
            auto cir = run(sc, {0.0}, seed);
            for (const auto &p : cir[0].snapshots[0].paths)
            {
                double unit = 0.0;
                for (const Ray &r : p.rays)
                    unit += std::norm(r.phasor) / static_cast<double>(p.rays.size());
                CHECK(unit == doctest::Approx(1.0).epsilon(1e-9));
                if (p.kind == PathKind::nlos)
                {
                    acc += std::norm(path_coefficient(p));
                    ++count;
                }
            }
        }
        REQUIRE(count == 1000);
        CHECK(acc / 1000.0 == doctest::Approx(1.0).epsilon(0.05));
    }

    TEST_CASE("a zero attitude profile changes nothing")
    {
        Scenario a = drive_by_block(4);
        a.tx.t = {0, 1};
        a.tx.pos = {{0, 0, 50}, {30, 10, 48}};
        a.tx_array.elements = {Vec3{0, 0, 0}, Vec3{0.005, 0, 0}};
        a.rx_array.elements = {Vec3{0, 0, 0}, Vec3{0, 0.005, 0}};

        Scenario b = a;
        b.tx.att_t = {0, 1};
        b.tx.att = {Vec3::Zero(), Vec3::Zero()};

        std::vector<double> tg = {0.0, 0.5, 1.0};
        CHECK(phasors_equal(run(a, tg, 5), run(b, tg, 5)));
    }

    TEST_CASE("seeded runs reproduce bitwise")
    {
        Scenario sc = drive_by_block(6);
        std::vector<double> tg = {0.0, 0.25, 0.5, 0.75, 1.0};
        CHECK(phasors_equal(run(sc, tg, 21), run(sc, tg, 21)));
        CHECK_FALSE(phasors_equal(run(sc, tg, 21), run(sc, tg, 22)));
    }

    TEST_CASE("frequency response closed forms")
    {
        CirSnapshot empty;
        CHECK(transfer_function(empty, 1e6) == Complex{0.0, 0.0});

        PathSnapshot unit;
        unit.power_lin = 1.0;
        unit.delay_s = 1e-6;
        unit.rays.resize(1); // default phasor 1+0j

        // a full turn of delay phase lands back on the real axis
        CirSnapshot one;
        one.paths.push_back(unit);
        CHECK(std::abs(transfer_function(one, 1e6) - Complex{1.0, 0.0}) < 1e-12);

        // two equal paths a half-turn apart cancel
        CirSnapshot two;
        two.paths.push_back(unit);
        two.paths.push_back(unit);
        two.paths[1].delay_s = 1.5e-6;
        double f = 1.0 / (2.0 * (two.paths[1].delay_s - two.paths[0].delay_s));
        CHECK(std::abs(transfer_function(two, f)) < 1e-12);

        PathSnapshot none;
        CHECK(path_coefficient(none) == Complex{0.0, 0.0});

        PathSnapshot pair;
        pair.rays.resize(2);
        pair.rays[1].phasor = Complex{0.0, 1.0};
        Complex c = path_coefficient(pair);
        CHECK(c.real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
        CHECK(c.imag() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    }

    TEST_CASE("invalid inputs are rejected")
    {
        Models md;
        Scenario sc;
        sc.tx = still({0, 0, 30}, 0, 1);
        sc.rx = still({80, 20, 1.5}, 0, 1);
        std::vector<double> tg = {0.0, 0.5};

        CHECK_NOTHROW(build_cir(sc, md.los, md.nlos, md.az, md.el, tg, 1));

        CHECK_THROWS_AS(build_cir(sc, md.los, md.nlos, md.az, md.el, {}, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_cir(sc, md.los, md.nlos, md.az, md.el, {0.5, 0.25}, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_cir(sc, md.los, md.nlos, md.az, md.el, {0.5, 0.5}, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_cir(sc, md.los, md.nlos, md.az, md.el, {-0.1, 0.5}, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_cir(sc, md.los, md.nlos, md.az, md.el, {0.5, 1.1}, 1),
                        std::invalid_argument);

        Scenario bad = sc;
        bad.carrier_hz = 0.0;
        CHECK_THROWS_AS(build_cir(bad, md.los, md.nlos, md.az, md.el, tg, 1),
                        std::invalid_argument);

        bad = sc;
        bad.rays_per_path = 0;
        CHECK_THROWS_AS(build_cir(bad, md.los, md.nlos, md.az, md.el, tg, 1),
                        std::invalid_argument);

        bad = sc;
        bad.tx_array.elements.clear();
        CHECK_THROWS_AS(build_cir(bad, md.los, md.nlos, md.az, md.el, tg, 1),
                        std::invalid_argument);

        bad = sc;
        bad.rx_array.elements.clear();
        CHECK_THROWS_AS(build_cir(bad, md.los, md.nlos, md.az, md.el, tg, 1),
                        std::invalid_argument);

        bad = sc;
        bad.tx.t.clear();
        bad.tx.pos.clear();
        CHECK_THROWS_AS(build_cir(bad, md.los, md.nlos, md.az, md.el, tg, 1),
                        std::invalid_argument);

        CHECK_THROWS_AS(build_cir(sc, PowerNet{}, md.nlos, md.az, md.el, tg, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_cir(sc, md.los, PowerNet{}, md.az, md.el, tg, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_cir(sc, md.los, md.nlos, GanModel{}, md.el, tg, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_cir(sc, md.los, md.nlos, md.az, GanModel{}, tg, 1),
                        std::invalid_argument);
    }

} // TEST_SUITE
