#ifndef ERQA_RUNNER_HPP
#define ERQA_RUNNER_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "erqa/error.hpp"
#include "erqa/image.hpp"
#include "erqa/matching.hpp"
#include "erqa/png_io.hpp"
#include "erqa/report.hpp"
#include "erqa/shift.hpp"
#include "erqa/ssim.hpp"

namespace erqa {

enum class Pooling { mean, median, min };

inline std::string to_string(Pooling p) {
    switch (p) {
    case Pooling::mean: return "mean";
    case Pooling::median: return "median";
    default: return "min";
    }
}

inline Pooling pooling_from_string(const std::string& s) {
    if (s == "mean") return Pooling::mean;
    if (s == "median") return Pooling::median;
    if (s == "min") return Pooling::min;
    throw ManifestError("unknown pooling '" + s + "' (expected mean, median or min)");
}

struct OutputSpec {
    std::string path = "erqa_report.json";
    std::string format = "json"; // json | csv
};

/// Declarative description of one batch-scoring run.
struct RunManifest {
    std::string gt_dir;
    std::vector<std::pair<std::string, std::string>> dist_dirs; // model name -> dir
    std::vector<std::pair<std::string, Region>> regions;        // optional named crops
    ErqaConfig config;
    std::vector<std::string> metrics{"erqa"}; // erqa | psnr | ssim
    OutputSpec output;
};

inline ErqaConfig erqa_config_from_json(const nlohmann::ordered_json& j) {
    ErqaConfig config;
    if (j.contains("version")) {
        const std::string v = j.at("version").get<std::string>();
        if (v == "1.0")
            config.version = ErqaVersion::v1_0;
        else if (v == "1.1")
            config.version = ErqaVersion::v1_1;
        else
            throw ManifestError("unknown version '" + v + "' (expected 1.0 or 1.1)");
    }
    if (j.contains("global_shift"))
        config.enable_global_shift = j.at("global_shift").get<bool>();
    if (j.contains("local_tolerance"))
        config.enable_local_tolerance = j.at("local_tolerance").get<bool>();
    if (j.contains("shift_radius"))
        config.shift_radius = j.at("shift_radius").get<int>();
    if (j.contains("canny_low"))
        config.canny.low_threshold = j.at("canny_low").get<int>();
    if (j.contains("canny_high"))
        config.canny.high_threshold = j.at("canny_high").get<int>();
    return config;
}

/// Parses a manifest file. Relative paths are resolved against the manifest's
/// own directory.
inline RunManifest parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open manifest: " + path);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError("manifest parse error in " + path + ": " + e.what());
    }

    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        return (std::filesystem::path(p).is_absolute() ? std::filesystem::path(p)
                                                       : base / p)
            .string();
    };

    try {
        RunManifest m;
        m.gt_dir = resolve(j.at("gt_dir").get<std::string>());
        for (const auto& [name, dir] : j.at("dist_dirs").items())
            m.dist_dirs.emplace_back(name, resolve(dir.get<std::string>()));
        if (m.dist_dirs.empty())
            throw ManifestError("manifest needs at least one entry in dist_dirs");
        if (j.contains("regions"))
            for (const auto& [name, r] : j.at("regions").items())
                m.regions.emplace_back(name, Region{r.at("x").get<int>(), r.at("y").get<int>(),
                                                    r.at("w").get<int>(), r.at("h").get<int>()});
        if (j.contains("config"))
            m.config = erqa_config_from_json(j.at("config"));
        if (j.contains("metrics")) {
            m.metrics.clear();
            for (const auto& name : j.at("metrics"))
                m.metrics.push_back(name.get<std::string>());
        }
        if (j.contains("output")) {
            if (j.at("output").contains("path"))
                m.output.path = resolve(j.at("output").at("path").get<std::string>());
            if (j.at("output").contains("format"))
                m.output.format = j.at("output").at("format").get<std::string>();
        }
        if (m.output.format != "json" && m.output.format != "csv")
            throw ManifestError("unknown output format '" + m.output.format + "'");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError("invalid manifest " + path + ": " + e.what());
    }
}

namespace detail {

inline std::vector<std::string> list_png_names(const std::string& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ManifestError("not a directory: " + dir);
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

// The frame sets must match exactly; report the first offending filename.
inline void check_frame_sets(const std::vector<std::string>& gt,
                             const std::vector<std::string>& dist,
                             const std::string& model) {
    for (const std::string& name : gt)
        if (!std::binary_search(dist.begin(), dist.end(), name))
            throw ManifestError("frame '" + name + "' missing from dist dir of model '" +
                                model + "'");
    for (const std::string& name : dist)
        if (!std::binary_search(gt.begin(), gt.end(), name))
            throw ManifestError("frame '" + name + "' of model '" + model +
                                "' has no ground-truth counterpart");
}

struct ScoreColumn {
    std::string name;
    enum class Kind { erqa, psnr, ssim } kind = Kind::erqa;
    ErqaConfig config{}; // used by erqa columns
};

inline std::vector<ScoreColumn> build_columns(const RunManifest& manifest, bool ablation) {
    std::vector<ScoreColumn> columns;
    if (ablation) {
        // The four pipeline stages, cumulative: plain comparison, + global
        // shift, + one-pixel tolerance (v1.0), + one-to-one matching (v1.1).
        ErqaConfig stage = manifest.config;
        stage.version = ErqaVersion::v1_0;
        stage.enable_global_shift = false;
        stage.enable_local_tolerance = false;
        columns.push_back({"baseline", ScoreColumn::Kind::erqa, stage});
        stage.enable_global_shift = true;
        columns.push_back({"global_shift", ScoreColumn::Kind::erqa, stage});
        stage.enable_local_tolerance = true;
        columns.push_back({"local_shift_v1.0", ScoreColumn::Kind::erqa, stage});
        stage.version = ErqaVersion::v1_1;
        columns.push_back({"wide_edge_penalty_v1.1", ScoreColumn::Kind::erqa, stage});
        return columns;
    }
    for (const std::string& name : manifest.metrics) {
        if (name == "erqa") {
            columns.push_back({"erqa_v" + to_string(manifest.config.version),
                               ScoreColumn::Kind::erqa, manifest.config});
        } else if (name == "psnr") {
            columns.push_back({"psnr", ScoreColumn::Kind::psnr, {}});
        } else if (name == "ssim") {
            columns.push_back({"ssim", ScoreColumn::Kind::ssim, {}});
        } else {
            throw ManifestError("unknown metric '" + name +
                                "' (expected erqa, psnr or ssim)");
        }
    }
    return columns;
}

inline double score_one(const ScoreColumn& column, const Frame& gt, const Frame& dist) {
    switch (column.kind) {
    case ScoreColumn::Kind::erqa:
        return erqa(gt, dist, column.config).f1;
    case ScoreColumn::Kind::psnr:
        return psnr(to_luma(gt), to_luma(dist)).db;
    default:
        return ssim(to_luma(gt), to_luma(dist));
    }
}

inline double pool_values(std::vector<double> v, Pooling pooling) {
    switch (pooling) {
    case Pooling::mean: {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    }
    case Pooling::median: {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    }
    default:
        return *std::min_element(v.begin(), v.end());
    }
}

} // namespace detail

struct ScoreOptions {
    bool ablation = false;
    Pooling pooling = Pooling::mean;
    int workers = 0; // 0 = hardware concurrency
};

/// Scores every (model, frame, region) cell of the manifest. Frames are
/// processed by a worker pool; results land in preallocated slots and pooling
/// runs after the join, so the report is independent of the worker count.
inline ScoreReport run_score(const RunManifest& manifest, const ScoreOptions& options = {}) {
    const std::vector<std::string> frames = detail::list_png_names(manifest.gt_dir);
    if (frames.empty())
        throw ManifestError("no .png frames in " + manifest.gt_dir);
    for (const auto& [model, dir] : manifest.dist_dirs)
        detail::check_frame_sets(frames, detail::list_png_names(dir), model);

    const std::vector<detail::ScoreColumn> columns =
        detail::build_columns(manifest, options.ablation);

    struct Task {
        std::size_t model;
        std::size_t frame;
    };
    std::vector<Task> tasks;
    tasks.reserve(manifest.dist_dirs.size() * frames.size());
    for (std::size_t m = 0; m < manifest.dist_dirs.size(); ++m)
        for (std::size_t f = 0; f < frames.size(); ++f)
            tasks.push_back({m, f});

    const std::size_t n_regions = manifest.regions.empty() ? 1 : manifest.regions.size();
    // results[model][frame][region][column]
    std::vector<std::vector<std::vector<std::vector<double>>>> results(
        manifest.dist_dirs.size(),
        std::vector<std::vector<std::vector<double>>>(
            frames.size(),
            std::vector<std::vector<double>>(n_regions,
                                             std::vector<double>(columns.size(), 0.0))));

    std::atomic<std::size_t> next_task{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next_task.fetch_add(1);
            if (t >= tasks.size())
                return;
            try {
                const Task& task = tasks[t];
                const std::string& frame_name = frames[task.frame];
                const Frame gt = load_frame(
                    (std::filesystem::path(manifest.gt_dir) / frame_name).string());
                const Frame dist = load_frame(
                    (std::filesystem::path(manifest.dist_dirs[task.model].second) / frame_name)
                        .string());
                for (std::size_t r = 0; r < n_regions; ++r) {
                    Frame g = gt;
                    Frame d = dist;
                    if (!manifest.regions.empty()) {
                        g = crop(gt, manifest.regions[r].second);
                        d = crop(dist, manifest.regions[r].second);
                    }
                    for (std::size_t c = 0; c < columns.size(); ++c)
                        results[task.model][task.frame][r][c] =
                            detail::score_one(columns[c], g, d);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next_task.store(tasks.size());
                return;
            }
        }
    };

    std::size_t n_workers = options.workers > 0
                                ? static_cast<std::size_t>(options.workers)
                                : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, tasks.size());
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i)
        pool.emplace_back(worker);
    for (std::thread& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);

    ScoreReport report;
    for (const detail::ScoreColumn& c : columns)
        report.columns.push_back(c.name);
    report.pool_name = to_string(options.pooling);
    for (std::size_t m = 0; m < manifest.dist_dirs.size(); ++m) {
        ModelScoreBlock model;
        model.model = manifest.dist_dirs[m].first;
        for (std::size_t r = 0; r < n_regions; ++r) {
            RegionScoreBlock region;
            region.region = manifest.regions.empty() ? "full" : manifest.regions[r].first;
            for (std::size_t f = 0; f < frames.size(); ++f)
                region.frames.push_back({frames[f], results[m][f][r]});
            for (std::size_t c = 0; c < columns.size(); ++c) {
                std::vector<double> series;
                series.reserve(frames.size());
                for (std::size_t f = 0; f < frames.size(); ++f)
                    series.push_back(results[m][f][r][c]);
                region.pooled.push_back(detail::pool_values(std::move(series), options.pooling));
            }
            model.regions.push_back(std::move(region));
        }
        report.models.push_back(std::move(model));
    }
    return report;
}

/// Serializes and writes a score report per the output spec.
inline void write_score_report(const ScoreReport& report, const OutputSpec& output) {
    write_text_file(output.path, output.format == "csv" ? score_report_to_csv(report)
                                                        : score_report_to_json(report));
}

} // namespace erqa

#endif // ERQA_RUNNER_HPP
