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

#include "CLI11.hpp"
#include "json.hpp"

#include "u2v/bpnn.hpp"
#include "u2v/channel.hpp"
#include "u2v/clustering.hpp"
#include "u2v/dataset.hpp"
#include "u2v/gan.hpp"
#include "u2v/io.hpp"
#include "u2v/stats.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace
{

    using namespace u2v;

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    std::string join_command(int argc, char **argv)
    {
        std::string out;
        for (int i = 0; i < argc; ++i)
        {
            if (i)
                out += ' ';
            out += argv[i];
        }
        return out;
    }

    Vec3 parse_triple(const std::string &text, const char *what)
    {
        double x = 0.0, y = 0.0, z = 0.0;
        char tail = 0;
        if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &x, &y, &z, &tail) != 3)
            throw std::invalid_argument(std::string(what) + " must be three comma-separated "
                                                            "numbers, got '" +
                                        text + "'.");
        return Vec3(x, y, z);
    }

    std::vector<int> parse_int_list(const std::string &text, const char *what)
    {
        std::vector<int> out;
        std::size_t start = 0;
        while (start <= text.size())
        {
            std::size_t comma = text.find(',', start);
            std::string tok = comma == std::string::npos ? text.substr(start)
                                                         : text.substr(start, comma - start);
            try
            {
                std::size_t used = 0;
                out.push_back(std::stoi(tok, &used));
                if (used != tok.size())
                    throw std::invalid_argument(tok);
            }
            catch (const std::exception &)
            {
                throw std::invalid_argument(std::string(what) +
                                            " must be comma-separated integers, got '" + text +
                                            "'.");
            }
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (out.empty())
            throw std::invalid_argument(std::string(what) + " must not be empty.");
        return out;
    }

    // n sample times spread evenly over a trajectory's own span
    std::vector<double> spread_times(const Trajectory &traj, std::size_t n)
    {
        const double lo = traj.t.front();
        const double hi = traj.t.back();
        std::vector<double> out;
        out.reserve(n);
        if (n == 1)
        {
            out.push_back(0.5 * (lo + hi));
            return out;
        }
        for (std::size_t k = 0; k < n; ++k)
            out.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                   static_cast<double>(n - 1));
        return out;
    }

    // Factor a pair budget into tx x rx grid sizes, tx taking the largest
    // divisor not above the square root
    std::pair<std::size_t, std::size_t> factor_pairs(long pairs)
    {
        for (long d = static_cast<long>(std::sqrt(static_cast<double>(pairs))); d >= 1; --d)
            if (pairs % d == 0)
                return {static_cast<std::size_t>(d), static_cast<std::size_t>(pairs / d)};
        return {1, static_cast<std::size_t>(pairs)};
    }

    struct ManifestSink
    {
        std::string path;
        RunManifest manifest;
        Clock::time_point t0 = Clock::now();

        void finish()
        {
            manifest.wall_time_s = seconds_since(t0);
            write_text_atomic(path, manifest_to_json_string(manifest));
        }
    };

    // ---------------------------------------------------------------- gen-data

    int run_gen_data(const std::string &scenario_path, long pairs, std::uint64_t seed,
                     bool seed_given, const std::string &out_path, ManifestSink sink)
    {
        const std::string config_text = read_text_file(scenario_path);
        ScenarioConfig cfg = scenario_from_json_string(config_text);
        if (pairs < 1)
            throw std::invalid_argument("--pairs must be positive.");
        if (!seed_given)
            seed = cfg.seed;

        auto [n_tx, n_rx] = factor_pairs(pairs);
        std::vector<Vec3> tx_grid, rx_grid;
        for (double t : spread_times(cfg.scenario.tx, n_tx))
            tx_grid.push_back(position_at(cfg.scenario.tx, t));
        for (double t : spread_times(cfg.scenario.rx, n_rx))
            rx_grid.push_back(position_at(cfg.scenario.rx, t));

        GroundTruth truth;
        RtDataset data = generate_dataset(cfg.scenario.scene, tx_grid, rx_grid, truth,
                                          cfg.scenario.rays_per_path, seed);
        write_text_atomic(out_path, dataset_to_csv(data));

        sink.manifest.config_hash = hex64(fnv1a(config_text));
        sink.manifest.seed = seed;
        sink.manifest.outputs = {out_path};
        if (data.skipped_pairs > 0)
            sink.manifest.warnings.push_back(std::to_string(data.skipped_pairs) +
                                             " pairs had no propagation path.");
        sink.finish();

        std::printf("wrote %zu ray records for %ld pairs (%d skipped) -> %s\n",
                    data.records.size(), pairs, data.skipped_pairs, out_path.c_str());
        return 0;
    }

    // -------------------------------------------------------------- train-bpnn

    int run_train_bpnn(const std::string &data_path, const std::string &which,
                       const std::string &out_path, const std::string &metrics_path,
                       const PowerTrainConfig &cfg, ManifestSink sink)
    {
        if (which != "los" && which != "nlos")
            throw std::invalid_argument("--which must be los or nlos.");
        const std::string data_text = read_text_file(data_path);
        RtDataset data = dataset_from_csv(data_text);

        std::vector<double> delays_us, powers_db;
        const bool want_los = which == "los";
        for (const RayRecord &rec : data.records)
            if (rec.los == want_los)
            {
                delays_us.push_back(rec.delay_s * 1e6);
                powers_db.push_back(rec.power_db);
            }
        if (delays_us.empty())
            throw std::invalid_argument("dataset has no " + which + " rows.");

        PowerTrainResult result = train_power_net(delays_us, powers_db, cfg);
        write_text_atomic(out_path, power_net_to_json_string(result.model));

        std::string metrics = "epoch,cost,val_rmse_db\n";
        for (std::size_t i = 0; i < result.cost_history.size(); ++i)
        {
            metrics += std::to_string(i + 1);
            metrics += ',';
            metrics += format_full(result.cost_history[i]);
            metrics += ',';
            metrics += format_full(i < result.val_rmse_history.size()
                                       ? result.val_rmse_history[i]
                                       : result.val_rmse);
            metrics += '\n';
        }
        write_text_atomic(metrics_path, metrics);

        sink.manifest.config_hash = hex64(fnv1a(data_text));
        sink.manifest.seed = cfg.seed;
        sink.manifest.outputs = {out_path, metrics_path};
        sink.finish();

        std::printf("train rows %zu, val rows %zu (no overlap by construction)\n",
                    result.train_indices.size(), result.val_indices.size());
        std::printf("final train rmse %.4f dB, val rmse %.4f dB\n", result.train_rmse,
                    result.val_rmse);
        std::printf("wrote %s\n", out_path.c_str());
        return 0;
    }

    // --------------------------------------------------------------- train-gan

    int run_train_gan(const std::string &data_path, const std::string &component,
                      const std::string &out_path, const std::string &metrics_path,
                      const GanTrainConfig &cfg, std::size_t ks_samples, ManifestSink sink)
    {
        if (component != "azimuth" && component != "elevation")
            throw std::invalid_argument("--component must be azimuth or elevation.");
        const std::string data_text = read_text_file(data_path);
        std::vector<AngleOffset> offsets = offsets_from_csv(data_text);

        std::vector<double> samples;
        samples.reserve(offsets.size());
        for (const AngleOffset &o : offsets)
            samples.push_back(component == "azimuth" ? o.dazimuth : o.delevation);

        GanTrainResult result = train_gan(samples, cfg);
        write_text_atomic(out_path, gan_to_json_string(result.model));

        std::string metrics = "step,bce\n";
        for (std::size_t i = 0; i < result.loss_history.size(); ++i)
        {
            metrics += std::to_string(i + 1);
            metrics += ',';
            metrics += format_full(result.loss_history[i]);
            metrics += '\n';
        }
        write_text_atomic(metrics_path, metrics);

        std::vector<double> generated =
            sample_offsets(result.model, ks_samples, derive_seed(cfg.seed, {17}));
        double ks_gan = ks_two_sample(generated, samples);
        FitBaseline gauss = fit_baseline(samples, BaselineFamily::gaussian);
        FitBaseline laplace = fit_baseline(samples, BaselineFamily::laplacian);
        double ks_gauss = ks_against_baseline(samples, gauss);
        double ks_laplace = ks_against_baseline(samples, laplace);

        sink.manifest.config_hash = hex64(fnv1a(data_text));
        sink.manifest.seed = cfg.seed;
        sink.manifest.outputs = {out_path, metrics_path};
        sink.finish();

        std::printf("ks generated vs data: %.4f\n", ks_gan);
        std::printf("ks best gaussian fit: %.4f\n", ks_gauss);
        std::printf("ks best laplacian fit: %.4f\n", ks_laplace);
        std::printf("generator beats both parametric fits: %s\n",
                    ks_gan < ks_gauss && ks_gan < ks_laplace ? "yes" : "no");
        std::printf("wrote %s\n", out_path.c_str());
        return 0;
    }

    // ------------------------------------------------------------------ cluster

    int run_cluster(const std::string &data_path, const std::string &range_text,
                    double sse_threshold, double slope_threshold, int restarts,
                    int max_iterations, std::uint64_t seed, int only_channel,
                    bool channel_given, const std::string &assignments_path,
                    const std::string &offsets_path, ManifestSink sink)
    {
        int range_lo = 0, range_hi = 0;
        char tail = 0;
        if (std::sscanf(range_text.c_str(), "%d:%d%c", &range_lo, &range_hi, &tail) != 2 ||
            range_lo < 1 || range_hi < range_lo)
            throw std::invalid_argument("--range must be lo:hi with 1 <= lo <= hi, got '" +
                                        range_text + "'.");

        const std::string data_text = read_text_file(data_path);
        RtDataset data = dataset_from_csv(data_text);

        // rows grouped per channel, in channel order
        std::map<int, std::vector<std::size_t>> channels;
        for (std::size_t row = 0; row < data.records.size(); ++row)
            channels[data.records[row].channel_id].push_back(row);
        if (channel_given)
        {
            if (!channels.count(only_channel))
                throw std::invalid_argument("channel " + std::to_string(only_channel) +
                                            " is not in the dataset.");
            auto keep = channels[only_channel];
            channels.clear();
            channels[only_channel] = keep;
        }

        KmeansConfig kcfg;
        kcfg.restarts = restarts;
        kcfg.max_iterations = max_iterations;

        std::string assignments = "row,channel_id,cluster\n";
        std::vector<AngleOffset> all_offsets;
        int skipped = 0;
        for (const auto &[channel, rows] : channels)
        {
            std::vector<RayPoint> points;
            points.reserve(rows.size());
            for (std::size_t row : rows)
            {
                const RayRecord &rec = data.records[row];
                points.push_back({rec.delay_s * 1e6, rec.aaoa, rec.eaoa});
            }

            std::vector<int> candidates;
            for (int k = range_lo; k <= range_hi && k <= static_cast<int>(points.size()); ++k)
                candidates.push_back(k);
            if (candidates.empty())
            {
                ++skipped;
                continue;
            }

            std::uint64_t ch_seed = derive_seed(seed, {static_cast<std::uint64_t>(channel)});
            ElbowResult elbow = elbow_select(points, candidates, ch_seed, sse_threshold,
                                             slope_threshold, kcfg);
            ClusterResult best = kmeans(points, elbow.num_clusters, ch_seed, kcfg);

            for (std::size_t i = 0; i < rows.size(); ++i)
            {
                assignments += std::to_string(rows[i]);
                assignments += ',';
                assignments += std::to_string(channel);
                assignments += ',';
                assignments += std::to_string(best.assignments[i]);
                assignments += '\n';
            }
            std::vector<AngleOffset> offsets = extract_offsets(best, points);
            all_offsets.insert(all_offsets.end(), offsets.begin(), offsets.end());

            std::size_t chosen = 0;
            for (std::size_t i = 0; i < elbow.candidates.size(); ++i)
                if (elbow.candidates[i] == elbow.num_clusters)
                    chosen = i;
            std::printf("channel %d: rays %zu clusters %d normalized sse %.4f%s\n", channel,
                        points.size(), elbow.num_clusters, elbow.normalized[chosen],
                        elbow.qualified ? "" : " (no candidate met both thresholds)");
        }

        write_text_atomic(assignments_path, assignments);
        write_text_atomic(offsets_path, offsets_to_csv(all_offsets));

        sink.manifest.config_hash = hex64(fnv1a(data_text));
        sink.manifest.seed = seed;
        sink.manifest.outputs = {assignments_path, offsets_path};
        if (skipped > 0)
            sink.manifest.warnings.push_back(std::to_string(skipped) +
                                             " channels had fewer rays than the range start.");
        sink.finish();

        std::printf("wrote %s and %s (%zu offsets)\n", assignments_path.c_str(),
                    offsets_path.c_str(), all_offsets.size());
        return 0;
    }

    // ----------------------------------------------------------------- simulate

    int run_simulate(const std::string &scenario_path, std::string out_dir, ModelPaths overrides,
                     std::uint64_t seed, bool seed_given, double start, bool start_given,
                     double stop, bool stop_given, double step, bool step_given,
                     std::string manifest_path, const std::string &command)
    {
        const std::string config_text = read_text_file(scenario_path);
        ScenarioConfig cfg = load_scenario(scenario_path);
        if (!seed_given)
            seed = cfg.seed;
        if (start_given)
            cfg.time.start = start;
        if (stop_given)
            cfg.time.stop = stop;
        if (step_given)
            cfg.time.step = step;

        auto pick = [](const std::string &flag, const std::string &config_value,
                       const char *what) {
            if (!flag.empty())
                return flag;
            if (!config_value.empty())
                return config_value;
            throw std::invalid_argument(std::string("no ") + what +
                                        " model given (config models block or command flag).");
        };
        PowerNet los_net = power_net_from_json_string(
            read_text_file(pick(overrides.bpnn_los, cfg.models.bpnn_los, "direct-path power")));
        PowerNet nlos_net = power_net_from_json_string(read_text_file(
            pick(overrides.bpnn_nlos, cfg.models.bpnn_nlos, "reflected-path power")));
        GanModel gan_az = gan_from_json_string(read_text_file(
            pick(overrides.gan_azimuth, cfg.models.gan_azimuth, "azimuth offset")));
        GanModel gan_el = gan_from_json_string(read_text_file(
            pick(overrides.gan_elevation, cfg.models.gan_elevation, "elevation offset")));

        std::vector<double> grid = expand_grid(cfg.time);
        std::vector<PairCir> pairs =
            build_cir(cfg.scenario, los_net, nlos_net, gan_az, gan_el, grid, seed);

        std::filesystem::create_directories(out_dir);
        const std::string cir_path = (std::filesystem::path(out_dir) / "cir.csv").string();
        const std::string motion_path = (std::filesystem::path(out_dir) / "motion.csv").string();
        if (manifest_path.empty())
            manifest_path = (std::filesystem::path(out_dir) / "manifest.json").string();

        ManifestSink sink;
        sink.path = manifest_path;
        sink.manifest.command = command;
        write_text_atomic(cir_path, cir_to_csv(pairs));
        write_text_atomic(motion_path, motion_to_csv(pairs));

        sink.manifest.config_hash = hex64(fnv1a(config_text));
        sink.manifest.seed = seed;
        sink.manifest.outputs = {cir_path, motion_path};
        sink.finish();

        std::size_t min_paths = pairs[0].snapshots.empty() ? 0 : SIZE_MAX;
        std::size_t max_paths = 0, total_paths = 0;
        for (const CirSnapshot &snap : pairs[0].snapshots)
        {
            min_paths = std::min(min_paths, snap.paths.size());
            max_paths = std::max(max_paths, snap.paths.size());
            total_paths += snap.paths.size();
        }
        std::printf("simulated %zu snapshots x %zu pairs; paths per snapshot min %zu max %zu "
                    "mean %.2f\n",
                    pairs[0].snapshots.size(), pairs.size(), min_paths, max_paths,
                    static_cast<double>(total_paths) /
                        static_cast<double>(pairs[0].snapshots.size()));
        std::printf("wrote %s and %s\n", cir_path.c_str(), motion_path.c_str());
        return 0;
    }

    // -------------------------------------------------------------------- stats

    int run_stats(const std::string &cir_path, std::string motion_path, const std::string &which,
                  const std::string &out_path, int pair, double t, bool t_given,
                  const StatsConfig &stats_cfg, double dt_step, bool dt_step_given, int dt_count,
                  double lag_step, int lag_count, const std::string &dir_tx_text,
                  const std::string &dir_rx_text, const std::string &attitude_text,
                  double window_s, int nfft, ManifestSink sink)
    {
        if (motion_path.empty())
            motion_path =
                (std::filesystem::path(cir_path).parent_path() / "motion.csv").string();
        const std::string cir_text = read_text_file(cir_path);
        const std::string motion_text = read_text_file(motion_path);
        std::vector<PairCir> pairs = cir_from_csv(cir_text, motion_text);
        if (pair < 0 || static_cast<std::size_t>(pair) >= pairs.size())
            throw std::invalid_argument("--pair must lie in [0, " +
                                        std::to_string(pairs.size() - 1) + "].");
        const PairCir &channel = pairs[static_cast<std::size_t>(pair)];
        const std::vector<CirSnapshot> &snaps = channel.snapshots;

        if (!t_given)
            t = which == "dpsd" ? snaps[snaps.size() / 2].t : snaps.front().t;

        auto dt_grid = [&]() {
            double step = dt_step;
            if (!dt_step_given)
            {
                if (snaps.size() < 2)
                    throw std::invalid_argument(
                        "--dt-step is required when the channel has one snapshot.");
                step = snaps[1].t - snaps[0].t;
            }
            int count = dt_count;
            if (count < 1)
                throw std::invalid_argument("--dt-count must be positive.");
            std::vector<double> grid;
            for (int k = 0; k < count; ++k)
            {
                double dt = static_cast<double>(k) * step;
                if (t + dt > snaps.back().t + 1e-9)
                    break;
                grid.push_back(dt);
            }
            if (grid.empty())
                grid.push_back(0.0);
            return grid;
        };
        auto lag_grid = [&]() {
            if (lag_count < 1)
                throw std::invalid_argument("--lag-count must be positive.");
            std::vector<double> grid;
            for (int k = 0; k < lag_count; ++k)
                grid.push_back(static_cast<double>(k) * lag_step);
            return grid;
        };
        SpacingGrid spacing;
        spacing.dir_tx = parse_triple(dir_tx_text, "--dir-tx");
        spacing.dir_rx = parse_triple(dir_rx_text, "--dir-rx");
        Vec3 att_angles = parse_triple(attitude_text, "--attitude");
        Mat3 attitude =
            rotation_from_attitude(att_angles.x(), att_angles.y(), att_angles.z());

        std::string csv;
        if (which == "pdp")
        {
            const CirSnapshot *found = nullptr;
            for (const CirSnapshot &snap : snaps)
                if (std::abs(snap.t - t) <= 1e-9)
                    found = &snap;
            if (!found)
                throw std::invalid_argument("time " + std::to_string(t) +
                                            " s is not on the snapshot grid.");
            csv = "delay_s,power_lin\n";
            for (const auto &[delay, power] : pdp(*found))
            {
                csv += format_full(delay);
                csv += ',';
                csv += format_full(power);
                csv += '\n';
            }
        }
        else if (which == "acf")
        {
            std::vector<double> dts = dt_grid();
            std::vector<Complex> rho = acf(channel, t, dts, stats_cfg);
            csv = "dt_s,real,imag,abs\n";
            for (std::size_t i = 0; i < dts.size(); ++i)
            {
                csv += format_full(dts[i]);
                csv += ',';
                csv += format_full(rho[i].real());
                csv += ',';
                csv += format_full(rho[i].imag());
                csv += ',';
                csv += format_full(std::abs(rho[i]));
                csv += '\n';
            }
        }
        else if (which == "ccf")
        {
            spacing.lags = lag_grid();
            std::vector<double> rho = ccf(channel, t, spacing, attitude, stats_cfg);
            csv = "lag_wavelengths,value\n";
            for (std::size_t i = 0; i < spacing.lags.size(); ++i)
            {
                csv += format_full(spacing.lags[i]);
                csv += ',';
                csv += format_full(rho[i]);
                csv += '\n';
            }
        }
        else if (which == "stcf")
        {
            spacing.lags = lag_grid();
            std::vector<double> dts = dt_grid();
            StcfResult result = stcf(channel, t, dts, spacing, attitude, stats_cfg);
            csv = "dt_s,lag_wavelengths,real,imag,abs\n";
            for (std::size_t i = 0; i < dts.size(); ++i)
                for (std::size_t j = 0; j < spacing.lags.size(); ++j)
                {
                    csv += format_full(dts[i]);
                    csv += ',';
                    csv += format_full(spacing.lags[j]);
                    csv += ',';
                    csv += format_full(result.rho[i][j].real());
                    csv += ',';
                    csv += format_full(result.rho[i][j].imag());
                    csv += ',';
                    csv += format_full(std::abs(result.rho[i][j]));
                    csv += '\n';
                }
        }
        else if (which == "dpsd")
        {
            DpsdResult result = dpsd(channel, t, window_s, nfft);
            csv = "freq_hz,power\n";
            for (std::size_t i = 0; i < result.freq_hz.size(); ++i)
            {
                csv += format_full(result.freq_hz[i]);
                csv += ',';
                csv += format_full(result.power[i]);
                csv += '\n';
            }
            if (result.aliasing_risk)
            {
                const char *warning = "dpsd: snapshot rate is below twice the in-window "
                                      "Doppler bound; the spectrum may alias.";
                sink.manifest.warnings.push_back(warning);
                std::printf("warning: %s\n", warning);
            }
        }
        else
        {
            throw std::invalid_argument("--which must be pdp, acf, ccf, stcf or dpsd.");
        }

        write_text_atomic(out_path, csv);
        sink.manifest.config_hash = hex64(fnv1a(cir_text));
        sink.manifest.seed = stats_cfg.seed;
        sink.manifest.outputs = {out_path};
        sink.finish();

        std::printf("wrote %s\n", out_path.c_str());
        return 0;
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"u2vsim: UAV-to-vehicle mmWave channel simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("u2vsim ") + u2v::tool_version);
    const std::string command = join_command(argc, argv);

    // gen-data
    auto *gen = app.add_subcommand("gen-data", "Generate a labeled ray dataset");
    std::string gen_scenario, gen_out, gen_manifest;
    long gen_pairs = 500;
    std::uint64_t gen_seed = 0;
    gen->add_option("--scenario", gen_scenario, "Scenario config file")->required();
    gen->add_option("--pairs", gen_pairs, "Number of Tx-Rx pairs");
    auto *gen_seed_opt = gen->add_option("--seed", gen_seed, "Override the config seed");
    gen->add_option("--out", gen_out, "Output dataset CSV")->required();
    gen->add_option("--manifest", gen_manifest, "Manifest path (default <out>.manifest.json)");

    // train-bpnn
    auto *tb = app.add_subcommand("train-bpnn", "Train a path power predictor");
    std::string tb_data, tb_which, tb_out, tb_metrics, tb_manifest, tb_hidden = "4";
    u2v::PowerTrainConfig tb_cfg;
    tb->add_option("--data", tb_data, "Ray dataset CSV")->required();
    tb->add_option("--which", tb_which, "los or nlos")->required();
    tb->add_option("--out", tb_out, "Output model file")->required();
    tb->add_option("--metrics", tb_metrics, "Metrics CSV (default <out>.metrics.csv)");
    tb->add_option("--manifest", tb_manifest, "Manifest path (default <out>.manifest.json)");
    tb->add_option("--epochs", tb_cfg.epochs, "Training epochs");
    tb->add_option("--lr", tb_cfg.lr, "Learning rate");
    tb->add_option("--lambda", tb_cfg.lambda, "L2 penalty weight");
    tb->add_option("--split", tb_cfg.split, "Training fraction");
    tb->add_option("--batch", tb_cfg.batch, "Mini-batch size (0 = full batch)");
    tb->add_option("--hidden", tb_hidden, "Hidden layer sizes, comma separated");
    tb->add_option("--seed", tb_cfg.seed, "Training seed");

    // train-gan
    auto *tg = app.add_subcommand("train-gan", "Train an angle offset sampler");
    std::string tg_data, tg_component, tg_out, tg_metrics, tg_manifest;
    std::string tg_gen_hidden = "32,32", tg_disc_hidden = "32,32", tg_noise = "normal";
    u2v::GanTrainConfig tg_cfg;
    std::size_t tg_ks_samples = 10000;
    tg->add_option("--data", tg_data, "Offsets CSV from the cluster command")->required();
    tg->add_option("--component", tg_component, "azimuth or elevation")->required();
    tg->add_option("--out", tg_out, "Output model file")->required();
    tg->add_option("--metrics", tg_metrics, "Metrics CSV (default <out>.metrics.csv)");
    tg->add_option("--manifest", tg_manifest, "Manifest path (default <out>.manifest.json)");
    tg->add_option("--steps", tg_cfg.steps, "Generator updates");
    tg->add_option("--disc-steps", tg_cfg.disc_steps, "Discriminator updates per generator "
                                                      "update");
    tg->add_option("--lr", tg_cfg.lr, "Learning rate");
    tg->add_option("--batch", tg_cfg.batch, "Batch size");
    tg->add_option("--noise-dim", tg_cfg.noise_dim, "Noise vector length");
    tg->add_option("--noise", tg_noise, "normal or uniform");
    tg->add_option("--gen-hidden", tg_gen_hidden, "Generator hidden sizes");
    tg->add_option("--disc-hidden", tg_disc_hidden, "Discriminator hidden sizes");
    tg->add_option("--leaky-slope", tg_cfg.leaky_slope, "Leaky ReLU slope");
    tg->add_option("--seed", tg_cfg.seed, "Training seed");
    tg->add_option("--ks-samples", tg_ks_samples, "Sample count for the KS report");

    // cluster
    auto *cl = app.add_subcommand("cluster", "Cluster rays and extract angle offsets");
    std::string cl_data, cl_assignments, cl_offsets, cl_manifest, cl_range = "1:24";
    double cl_sse = 0.15, cl_slope = 0.005;
    int cl_restarts = 10, cl_max_iter = 200, cl_channel = 0;
    std::uint64_t cl_seed = 0;
    cl->add_option("--data", cl_data, "Ray dataset CSV")->required();
    cl->add_option("--range", cl_range, "Cluster count candidates lo:hi");
    cl->add_option("--sse-threshold", cl_sse, "Normalized SSE level threshold");
    cl->add_option("--slope-threshold", cl_slope, "Normalized SSE slope threshold");
    cl->add_option("--restarts", cl_restarts, "Seeded restarts per cluster count");
    cl->add_option("--max-iterations", cl_max_iter, "Lloyd iteration cap");
    cl->add_option("--seed", cl_seed, "Clustering seed");
    auto *cl_channel_opt = cl->add_option("--channel", cl_channel, "Restrict to one channel id");
    cl->add_option("--out-assignments", cl_assignments, "Assignments CSV")->required();
    cl->add_option("--out-offsets", cl_offsets, "Offsets CSV")->required();
    cl->add_option("--manifest", cl_manifest,
                   "Manifest path (default <out-assignments>.manifest.json)");

    // simulate
    auto *sim = app.add_subcommand("simulate", "Generate channel realizations");
    std::string sim_scenario, sim_out_dir = ".", sim_manifest;
    u2v::ModelPaths sim_models;
    std::uint64_t sim_seed = 0;
    double sim_start = 0.0, sim_stop = 0.0, sim_step = 0.0;
    sim->add_option("--scenario", sim_scenario, "Scenario config file")->required();
    sim->add_option("--out-dir", sim_out_dir, "Output directory");
    sim->add_option("--bpnn-los", sim_models.bpnn_los, "Direct-path power model override");
    sim->add_option("--bpnn-nlos", sim_models.bpnn_nlos, "Reflected-path power model override");
    sim->add_option("--gan-az", sim_models.gan_azimuth, "Azimuth offset model override");
    sim->add_option("--gan-el", sim_models.gan_elevation, "Elevation offset model override");
    auto *sim_seed_opt = sim->add_option("--seed", sim_seed, "Override the config seed");
    auto *sim_start_opt = sim->add_option("--start", sim_start, "Override time.start");
    auto *sim_stop_opt = sim->add_option("--stop", sim_stop, "Override time.stop");
    auto *sim_step_opt = sim->add_option("--step", sim_step, "Override time.step");
    sim->add_option("--manifest", sim_manifest,
                    "Manifest path (default <out-dir>/manifest.json)");

    // stats
    auto *st = app.add_subcommand("stats", "Derived statistics of a channel dump");
    std::string st_cir, st_motion, st_which, st_out, st_manifest;
    std::string st_dir_tx = "0,0,0", st_dir_rx = "0,1,0", st_attitude = "0,0,0";
    int st_pair = 0, st_dt_count = 50, st_lag_count = 41, st_nfft = 4096;
    double st_t = 0.0, st_dt_step = 0.0, st_lag_step = 0.05, st_window = 0.05;
    u2v::StatsConfig st_cfg;
    st->add_option("--cir", st_cir, "Channel dump CSV from simulate")->required();
    st->add_option("--motion", st_motion, "Motion CSV (default <cir dir>/motion.csv)");
    st->add_option("--which", st_which, "pdp, acf, ccf, stcf or dpsd")->required();
    st->add_option("--out", st_out, "Output CSV")->required();
    st->add_option("--manifest", st_manifest, "Manifest path (default <out>.manifest.json)");
    st->add_option("--pair", st_pair, "Antenna pair index");
    auto *st_t_opt = st->add_option("--t", st_t, "Reference time (dpsd: window center)");
    st->add_option("--ensemble", st_cfg.ensemble, "Monte Carlo members");
    st->add_option("--seed", st_cfg.seed, "Phase redraw seed");
    st->add_option("--freq", st_cfg.freq_hz, "Transfer function frequency offset, Hz");
    auto *st_dt_opt = st->add_option("--dt-step", st_dt_step, "Time lag step, s "
                                                              "(default snapshot spacing)");
    st->add_option("--dt-count", st_dt_count, "Time lag count");
    st->add_option("--lag-step", st_lag_step, "Spacing lag step, wavelengths");
    st->add_option("--lag-count", st_lag_count, "Spacing lag count");
    st->add_option("--dir-tx", st_dir_tx, "Tx spacing direction x,y,z (body frame)");
    st->add_option("--dir-rx", st_dir_rx, "Rx spacing direction x,y,z (body frame)");
    st->add_option("--attitude", st_attitude, "Tx attitude angles omega,phi,gamma");
    st->add_option("--window", st_window, "dpsd window length, s");
    st->add_option("--nfft", st_nfft, "dpsd transform size");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        auto make_sink = [&](const std::string &explicit_path, const std::string &fallback) {
            ManifestSink sink;
            sink.path = explicit_path.empty() ? fallback : explicit_path;
            sink.manifest.command = command;
            return sink;
        };

        if (*gen)
            return run_gen_data(gen_scenario, gen_pairs, gen_seed, gen_seed_opt->count() > 0,
                                gen_out, make_sink(gen_manifest, gen_out + ".manifest.json"));
        if (*tb)
        {
            tb_cfg.hidden_dims = parse_int_list(tb_hidden, "--hidden");
            return run_train_bpnn(tb_data, tb_which, tb_out,
                                  tb_metrics.empty() ? tb_out + ".metrics.csv" : tb_metrics,
                                  tb_cfg, make_sink(tb_manifest, tb_out + ".manifest.json"));
        }
        if (*tg)
        {
            tg_cfg.gen_hidden = parse_int_list(tg_gen_hidden, "--gen-hidden");
            tg_cfg.disc_hidden = parse_int_list(tg_disc_hidden, "--disc-hidden");
            if (tg_noise == "normal")
                tg_cfg.noise = u2v::NoiseKind::normal;
            else if (tg_noise == "uniform")
                tg_cfg.noise = u2v::NoiseKind::uniform;
            else
                throw std::invalid_argument("--noise must be normal or uniform.");
            return run_train_gan(tg_data, tg_component, tg_out,
                                 tg_metrics.empty() ? tg_out + ".metrics.csv" : tg_metrics,
                                 tg_cfg, tg_ks_samples,
                                 make_sink(tg_manifest, tg_out + ".manifest.json"));
        }
        if (*cl)
            return run_cluster(cl_data, cl_range, cl_sse, cl_slope, cl_restarts, cl_max_iter,
                               cl_seed, cl_channel, cl_channel_opt->count() > 0, cl_assignments,
                               cl_offsets,
                               make_sink(cl_manifest, cl_assignments + ".manifest.json"));
        if (*sim)
            return run_simulate(sim_scenario, sim_out_dir, sim_models, sim_seed,
                                sim_seed_opt->count() > 0, sim_start,
                                sim_start_opt->count() > 0, sim_stop,
                                sim_stop_opt->count() > 0, sim_step,
                                sim_step_opt->count() > 0, sim_manifest, command);
        if (*st)
            return run_stats(st_cir, st_motion, st_which, st_out, st_pair, st_t,
                             st_t_opt->count() > 0, st_cfg, st_dt_step,
                             st_dt_opt->count() > 0, st_dt_count, st_lag_step, st_lag_count,
                             st_dir_tx, st_dir_rx, st_attitude, st_window, st_nfft,
                             make_sink(st_manifest, st_out + ".manifest.json"));
    }
    catch (const std::invalid_argument &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    catch (const std::out_of_range &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    catch (const nlohmann::json::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
