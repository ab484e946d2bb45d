// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "regtrace/density.hpp"
#include "regtrace/errors.hpp"
#include "regtrace/report.hpp"
#include "regtrace/selection.hpp"
#include "regtrace/trainer.hpp"
#include "regtrace/zoo.hpp"

namespace regtrace {

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first;
    std::mutex guard;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i; !failed && (i = next++) < n;) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(guard);
                        if (!first) first = std::current_exception();
                        failed = true;
                    }
                }
            });
        }
    }
    if (first) std::rethrow_exception(first);
}

std::vector<MeanRegularity> mean_regularity(std::span<const AccuracyTrace> traces) {
    if (traces.empty()) throw ArgumentError("mean_regularity: no traces");
    const auto& ref = traces.front();
    for (const auto& t : traces)
        if (t.n_samples() != ref.n_samples() || t.n_epochs() != ref.n_epochs() || t.role() != ref.role())
            throw ArgumentError("mean_regularity: traces differ in role or shape");

    std::vector<MeanRegularity> mean(ref.n_samples());
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i].sample_id = i;
    for (const auto& t : traces) {
        const auto records = regularity_records(t);
        for (std::size_t i = 0; i < records.size(); ++i) {
            mean[i].cumulative_loss += static_cast<double>(records[i].cumulative_loss);
            mean[i].event_count += static_cast<double>(records[i].event_count);
        }
    }
    const auto k = static_cast<double>(traces.size());
    for (auto& m : mean) {
        m.cumulative_loss /= k;
        m.event_count /= k;
    }
    return mean;
}

namespace {

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

std::vector<RepresentationPoint> points_of(std::span<const MeanRegularity> mean) {
    std::vector<RepresentationPoint> pts;
    pts.reserve(mean.size());
    for (const auto& m : mean) pts.push_back({m.cumulative_loss, m.event_count, m.sample_id});
    return pts;
}

// Configured radius, or the automatic one. A point cloud collapsed onto the
// origin has no range to scale from and gets radius 1.
double analysis_radius(const ExperimentConfig& config, double x_range, double y_range) {
    if (config.analysis.radius > 0) return config.analysis.radius;
    if (x_range == 0 && y_range == 0) return 1.0;
    return default_radius(x_range, y_range);
}

TrainConfig seeded(const TrainConfig& base, std::uint64_t seed) {
    TrainConfig c = base;
    c.seed = seed;
    return c;
}

std::string run_name(std::size_t repetition) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%03zu", repetition);
    return buf;
}

void write_mean_csv(const fs::path& path, std::span<const MeanRegularity> mean, std::span<const std::size_t> ids) {
    CsvWriter csv(path, {"sample_id", "dataset_id", "cumulative_loss", "event_count"});
    for (const auto& m : mean) csv.row({num(m.sample_id), num(ids[m.sample_id]), num(m.cumulative_loss), num(m.event_count)});
    csv.close();
}

std::vector<std::string> fraction_header(const std::string& first, std::span<const double> fractions) {
    std::vector<std::string> header{first};
    for (double f : fractions) header.push_back(num(f));
    return header;
}

}  // namespace

fs::path cmd_gen_data(const ExperimentConfig& config, const fs::path& out) {
    fs::create_directories(out);
    const auto path = out / "data.csv";
    write_csv(load_experiment_data(config), path);
    return path;
}

void cmd_run(const ExperimentConfig& config, const fs::path& out) {
    config.validate();
    const LabeledDataset data = load_experiment_data(config);
    const std::size_t reps = config.repetitions;

    std::vector<fs::path> created;
    const auto cleanup = [&] {
        std::error_code ec;
        for (auto it = created.rbegin(); it != created.rend(); ++it) fs::remove_all(*it, ec);
    };
    try {
        if (!fs::exists(out)) {
            fs::create_directories(out);
            created.push_back(out);
        }
        for (const auto& model : config.models) {
            const auto dir = out / model.name;
            if (fs::exists(dir)) {
                for (const auto& entry : fs::directory_iterator(dir))
                    if (entry.is_directory() && entry.path().filename().string().rfind("run_", 0) == 0)
                        fs::remove_all(entry.path());
            } else {
                fs::create_directories(dir);
                created.push_back(dir);
            }
        }

        const std::size_t n_models = config.models.size();
        std::vector<std::optional<RunBundle>> bundles(n_models * reps);
        std::mutex created_guard;
        parallel_for(n_models * reps, config.workers, [&](std::size_t job) {
            const auto& model = config.models[job / reps];
            const std::size_t rep = job % reps;
            const std::uint64_t seed = config.base_seed + rep;
            RunBundle run = train_and_trace(data, model.spec, seeded(config.train, seed));

            const auto dir = out / model.name / run_name(rep);
            fs::create_directories(dir);
            {
                std::lock_guard lock(created_guard);
                created.push_back(dir);
            }
            write_trace(run.train_trace, dir / "train.trace");
            write_trace(run.test_trace, dir / "test.trace");
            write_run_metadata({model.name, rep, seed, config.train.epochs, run.final_train_acc, run.final_test_acc,
                                run.train_ids, run.test_ids, run.epoch_loss},
                               dir / "run.meta");
            bundles[job] = std::move(run);
        });

        for (std::size_t m = 0; m < n_models; ++m) {
            std::vector<AccuracyTrace> train, test;
            for (std::size_t r = 0; r < reps; ++r) {
                train.push_back(bundles[m * reps + r]->train_trace);
                test.push_back(bundles[m * reps + r]->test_trace);
            }
            const auto dir = out / config.models[m].name;
            const auto& first = *bundles[m * reps];
            created.push_back(dir / "regularity_train.csv");
            write_mean_csv(dir / "regularity_train.csv", mean_regularity(train), first.train_ids);
            created.push_back(dir / "regularity_test.csv");
            write_mean_csv(dir / "regularity_test.csv", mean_regularity(test), first.test_ids);
        }
    } catch (...) {
        cleanup();
        throw;
    }
}

void cmd_analyze(std::span<const fs::path> traces, const ExperimentConfig& config, const fs::path& out) {
    if (traces.empty()) throw ArgumentError("analyze: no trace files given");
    std::vector<AccuracyTrace> loaded;
    for (const auto& p : traces) loaded.push_back(read_trace(p));
    const auto mean = mean_regularity(loaded);
    fs::create_directories(out);

    {
        CsvWriter csv(out / "regularity.csv", {"sample_id", "cumulative_loss", "event_count"});
        for (const auto& m : mean) csv.row({num(m.sample_id), num(m.cumulative_loss), num(m.event_count)});
        csv.close();
    }

    if (config.analysis.histograms) {
        std::vector<std::size_t> losses, events;
        std::size_t max_loss = 0;
        for (const auto& t : loaded) {
            for (const auto& r : regularity_records(t)) {
                losses.push_back(r.cumulative_loss);
                events.push_back(r.event_count);
            }
            max_loss = std::max(max_loss, t.n_epochs());
        }
        const std::size_t w = config.analysis.histogram_width;
        CsvWriter csv(out / "histograms.csv", {"measure", "bin_lo", "bin_hi", "count"});
        const auto emit = [&](const std::string& measure, const Histogram& h) {
            for (std::size_t k = 0; k < h.counts.size(); ++k)
                csv.row({measure, num(h.lower_edges[k]), num(h.lower_edges[k] + h.bin_width), num(h.counts[k])});
        };
        emit("cumulative_loss", histogram(losses, w, max_loss));
        emit("event_count", histogram(events, w));
        csv.close();
    }

    const auto pts = points_of(mean);
    const auto [xr, yr] = axis_ranges(pts);
    const DensityMap dm = density_map(pts, analysis_radius(config, xr, yr));
    {
        CsvWriter csv(out / "density.csv", {"sample_id", "x", "y", "density"});
        for (std::size_t i = 0; i < pts.size(); ++i)
            csv.row({num(pts[i].sample_id), num(pts[i].x), num(pts[i].y), num(dm.values[i])});
        csv.close();
    }

    if (config.analysis.scatter) {
        ScatterStyle style;
        const bool train = loaded.front().role() == TraceRole::train;
        style.title = std::string(to_string(loaded.front().role())) + " samples, r = " + num(dm.radius);
        style.x_label = train ? "cumulative binary training loss" : "cumulative binary generalizing loss";
        style.y_label = train ? "forgetting events" : "mal-generalizing events";
        write_scatter_svg(out / "scatter.svg", pts, dm.values, style);
    }
}

namespace {

struct ProxySet {
    LabeledDataset data;
    ModelSpec spec;
    std::vector<std::optional<RunBundle>> proxies;  // one per prune seed
};

ProxySet train_proxies(const ExperimentConfig& config) {
    ProxySet set{load_experiment_data(config), config.models.front().spec, {}};
    set.proxies.resize(config.prune.seeds);
    parallel_for(config.prune.seeds, config.workers, [&](std::size_t i) {
        set.proxies[i] = train_and_trace(set.data, set.spec, seeded(config.train, config.prune.train_seed + i));
    });
    return set;
}

}  // namespace

void cmd_prune_eval(const ExperimentConfig& config, const fs::path& out) {
    config.validate();
    const ProxySet set = train_proxies(config);
    const auto& p = config.prune;
    const std::size_t n_s = p.strategies.size(), n_f = p.fractions.size(), n_seeds = p.seeds;

    std::vector<double> acc(n_s * n_f * n_seeds);
    parallel_for(acc.size(), config.workers, [&](std::size_t job) {
        const std::size_t seed_i = job % n_seeds, f = (job / n_seeds) % n_f, s = job / (n_seeds * n_f);
        PruneStrategy strategy{p.strategies[s], p.radius, config.base_seed + seed_i, false};
        acc[job] = pruned_test_accuracy(set.data, *set.proxies[seed_i], strategy, p.fractions[f], set.spec,
                                        seeded(config.train, p.train_seed + seed_i));
    });

    fs::create_directories(out);
    CsvWriter csv(out / "prune_eval.csv", fraction_header("strategy", p.fractions));
    for (std::size_t s = 0; s < n_s; ++s) {
        std::vector<std::string> row{std::string(to_string(p.strategies[s]))};
        for (std::size_t f = 0; f < n_f; ++f) {
            double sum = 0;
            for (std::size_t i = 0; i < n_seeds; ++i) sum += acc[(s * n_f + f) * n_seeds + i];
            row.push_back(num(sum / static_cast<double>(n_seeds)));
        }
        csv.row(row);
    }
    csv.close();
}

void cmd_radius_sweep(const ExperimentConfig& config, const fs::path& out) {
    config.validate();
    if (config.prune.radii.empty()) throw ConfigError("prune.radii", "must not be empty for radius-sweep");
    const ProxySet set = train_proxies(config);
    const auto& p = config.prune;

    std::vector<SweepTable> tables(p.seeds);
    parallel_for(p.seeds, config.workers, [&](std::size_t i) {
        tables[i] = radius_sweep(set.data, *set.proxies[i], p.radii, p.fractions, set.spec,
                                 seeded(config.train, p.train_seed + i));
    });

    fs::create_directories(out);
    CsvWriter csv(out / "radius_sweep.csv", fraction_header("radius", p.fractions));
    for (std::size_t r = 0; r < p.radii.size(); ++r) {
        std::vector<std::string> row{num(p.radii[r])};
        for (std::size_t f = 0; f < p.fractions.size(); ++f) {
            double sum = 0;
            for (const auto& t : tables) sum += t.at(r, f);
            row.push_back(num(sum / static_cast<double>(tables.size())));
        }
        csv.row(row);
    }
    csv.close();
}

void cmd_compress_test(const ExperimentConfig& config, const fs::path& out) {
    config.validate();
    const auto& c = config.compress;
    const LabeledDataset data = load_experiment_data(config);
    const RunBundle proxy =
        train_and_trace(data, config.models.front().spec, seeded(config.train, config.base_seed));
    const auto records = regularity_records(proxy.test_trace);
    const auto binning = angular_bins(to_points(records), c.sector_deg);
    const std::set<std::size_t> take_all(c.take_all.begin(), c.take_all.end());

    ZooOptions options;
    options.knn_k = c.knn_k;
    const std::size_t n_algos = c.zoo.size();
    std::vector<std::vector<std::uint8_t>> correct(n_algos);
    parallel_for(n_algos, config.workers,
                 [&](std::size_t a) { correct[a] = zoo_predict(c.zoo[a], data, config.base_seed, options); });

    const auto accuracy_on = [&](std::size_t a, std::span<const std::size_t> ids) {
        double hits = 0;
        for (auto id : ids) hits += correct[a][id];
        return hits / static_cast<double>(ids.size());
    };
    std::vector<std::size_t> all(records.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<double> full(n_algos);
    for (std::size_t a = 0; a < n_algos; ++a) full[a] = accuracy_on(a, all);

    const std::size_t n_n = c.n_per_bin.size();
    std::vector<double> mean_acc(n_algos * n_n, 0.0), mean_sp(n_n, 0.0), mean_map(n_n, 0.0), mean_size(n_n, 0.0);
    const auto seeds = static_cast<double>(c.seeds);
    for (std::size_t k = 0; k < n_n; ++k) {
        for (std::size_t s = 0; s < c.seeds; ++s) {
            const auto ids = stratified_sample(binning, c.n_per_bin[k], take_all, config.base_seed + s);
            std::vector<double> comp(n_algos);
            for (std::size_t a = 0; a < n_algos; ++a) {
                comp[a] = accuracy_on(a, ids);
                mean_acc[a * n_n + k] += comp[a] / seeds;
            }
            const Fidelity fid = compression_fidelity(full, comp);
            mean_sp[k] += fid.spearman / seeds;
            mean_map[k] += fid.map_at_k / seeds;
            mean_size[k] += static_cast<double>(ids.size()) / seeds;
        }
    }

    fs::create_directories(out);
    {
        std::vector<std::string> header{"algorithm", "full"};
        for (auto n : c.n_per_bin) header.push_back("n_" + num(n));
        CsvWriter csv(out / "compress_accuracy.csv", header);
        for (std::size_t a = 0; a < n_algos; ++a) {
            std::vector<std::string> row{std::string(to_string(c.zoo[a])), num(full[a])};
            for (std::size_t k = 0; k < n_n; ++k) row.push_back(num(mean_acc[a * n_n + k]));
            csv.row(row);
        }
        csv.close();
    }
    {
        CsvWriter csv(out / "compress_fidelity.csv", {"n_per_bin", "compressed_size", "spearman", "map_at_k"});
        for (std::size_t k = 0; k < n_n; ++k)
            csv.row({num(c.n_per_bin[k]), num(mean_size[k]), num(mean_sp[k]), num(mean_map[k])});
        csv.close();
    }
    {
        const std::size_t best =
            static_cast<std::size_t>(std::max_element(mean_sp.begin(), mean_sp.end()) - mean_sp.begin());
        const auto ids = stratified_sample(binning, c.n_per_bin[best], take_all, config.base_seed);
        const std::set<std::size_t> chosen(ids.begin(), ids.end());
        CsvWriter csv(out / "compress_manifest.csv", {"sample_id", "dataset_id", "bin", "selected"});
        for (std::size_t i = 0; i < binning.sample_ids.size(); ++i) {
            const auto id = binning.sample_ids[i];
            csv.row({num(id), num(proxy.test_ids[id]), num(binning.bins[i]), chosen.count(id) ? "1" : "0"});
        }
        csv.close();
    }
}

RunCorrelationMatrix cmd_compare_runs(std::span<const fs::path> run_dirs, const ExperimentConfig& config,
                                      const fs::path& out) {
    if (run_dirs.size() < 2) throw ArgumentError("compare-runs: need at least 2 run directories");
    std::vector<std::vector<RepresentationPoint>> clouds;
    double xr = 0, yr = 0;
    for (const auto& dir : run_dirs) {
        const auto trace = read_trace(dir / "train.trace");
        if (!clouds.empty() && trace.n_samples() != clouds.front().size())
            throw ArgumentError("compare-runs: " + dir.string() + " has a different sample count");
        clouds.push_back(to_points(regularity_records(trace)));
        const auto [x, y] = axis_ranges(clouds.back());
        xr = std::max(xr, x);
        yr = std::max(yr, y);
    }
    const double radius = analysis_radius(config, xr, yr);
    std::vector<std::vector<double>> vectors;
    for (const auto& pts : clouds) vectors.push_back(normalized_density_vector(density_map(pts, radius)));
    const RunCorrelationMatrix m = run_correlation(vectors);

    fs::create_directories(out);
    std::vector<std::string> names;
    for (const auto& dir : run_dirs) {
        auto name = dir.filename().empty() ? dir.parent_path().filename() : dir.filename();
        names.push_back(name.string());
    }
    {
        std::vector<std::string> header{"run"};
        header.insert(header.end(), names.begin(), names.end());
        CsvWriter csv(out / "correlation.csv", header);
        for (std::size_t i = 0; i < m.n_runs; ++i) {
            std::vector<std::string> row{names[i]};
            for (std::size_t j = 0; j < m.n_runs; ++j) row.push_back(num(m.at(i, j)));
            csv.row(row);
        }
        csv.close();
    }
    {
        CsvWriter csv(out / "correlation_summary.csv", {"runs", "radius", "off_diagonal_mean"});
        csv.row({num(m.n_runs), num(radius), num(m.off_diagonal_mean)});
        csv.close();
    }
    return m;
}

void cmd_sync(const fs::path& run_dir, const ExperimentConfig& /*config*/, const fs::path& out) {
    const auto train = read_trace(run_dir / "train.trace");
    const auto test = read_trace(run_dir / "test.trace");
    const auto identical = synchronization_counts(test, train, SyncMode::identical_sets);
    const auto shared = synchronization_counts(test, train, SyncMode::shared_epoch);
    fs::create_directories(out);
    CsvWriter csv(out / "sync.csv", {"test_id", "count_identical", "count_shared"});
    for (std::size_t i = 0; i < identical.size(); ++i) csv.row({num(i), num(identical[i]), num(shared[i])});
    csv.close();
}

}  // namespace regtrace
