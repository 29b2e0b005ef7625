// Command-line front end: batch scoring, visualization, metric panels,
// correlation against subjective scores, and debugging exports.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "erqa/erqa.hpp"

namespace {

struct ConfigFlags {
    std::string version;
    bool no_global_shift = false;
    bool no_local_tolerance = false;
    int shift_radius = -1;
    int canny_low = -1;
    int canny_high = -1;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--version", version, "Metric version: 1.0 or 1.1")
            ->check(CLI::IsMember({"1.0", "1.1"}));
        cmd.add_flag("--no-global-shift", no_global_shift,
                     "Disable global shift compensation");
        cmd.add_flag("--no-local-tolerance", no_local_tolerance,
                     "Disable one-pixel tolerance in edge matching");
        cmd.add_option("--shift-radius", shift_radius, "Global shift search radius");
        cmd.add_option("--canny-low", canny_low, "Canny low (linking) threshold");
        cmd.add_option("--canny-high", canny_high, "Canny high (seeding) threshold");
    }

    void apply(erqa::ErqaConfig& config) const {
        if (version == "1.0")
            config.version = erqa::ErqaVersion::v1_0;
        else if (version == "1.1")
            config.version = erqa::ErqaVersion::v1_1;
        if (no_global_shift)
            config.enable_global_shift = false;
        if (no_local_tolerance)
            config.enable_local_tolerance = false;
        if (shift_radius >= 0)
            config.shift_radius = shift_radius;
        if (canny_low >= 0)
            config.canny.low_threshold = canny_low;
        if (canny_high >= 0)
            config.canny.high_threshold = canny_high;
    }
};

int run_score(const std::string& manifest_path, const ConfigFlags& flags, bool ablation,
              const std::string& pool, int workers, const std::string& format,
              const std::string& out) {
    erqa::RunManifest manifest = erqa::parse_manifest(manifest_path);
    flags.apply(manifest.config);
    if (!format.empty())
        manifest.output.format = format;
    if (!out.empty())
        manifest.output.path = out;

    erqa::ScoreOptions options;
    options.ablation = ablation;
    options.pooling = erqa::pooling_from_string(pool);
    options.workers = workers;

    const erqa::ScoreReport report = erqa::run_score(manifest, options);
    erqa::write_score_report(report, manifest.output);
    std::cout << "wrote " << manifest.output.path << "\n";
    return 0;
}

int run_visualize(const std::string& gt_path, const std::string& dist_path,
                  const ConfigFlags& flags, const std::string& out,
                  const std::string& json_out) {
    const erqa::Frame gt = erqa::load_frame(gt_path);
    const erqa::Frame dist = erqa::load_frame(dist_path);
    erqa::ErqaConfig config;
    flags.apply(config);
    const erqa::ErqaRun run = erqa::erqa_run(gt, dist, config);
    erqa::save_frame(out, erqa::render_classification(run.result, run.gt_overlap));
    if (!json_out.empty())
        erqa::write_text_file(json_out, erqa::match_result_to_json(run.result));
    std::printf("tp=%lld fp=%lld fn=%lld f1=%s\n",
                static_cast<long long>(run.result.tp), static_cast<long long>(run.result.fp),
                static_cast<long long>(run.result.fn),
                erqa::format_value(run.result.f1).c_str());
    return 0;
}

int run_correlate(const std::vector<std::string>& score_files, const std::string& votes_file,
                  const std::string& subjective_file, const std::vector<std::string>& regions,
                  const std::string& format, const std::string& out) {
    std::vector<erqa::RegionScores> scores =
        erqa::filter_regions(erqa::read_scores_csv(score_files), regions);

    std::vector<erqa::RegionSubjective> subjective;
    if (!votes_file.empty()) {
        const erqa::PairwiseTally tally =
            erqa::tally_from_votes(erqa::read_votes_csv(votes_file));
        const erqa::SubjectiveScores fitted = erqa::fit_bradley_terry(
            tally, 1e-9, 10000, {},
            [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; });
        for (std::size_t i = 0; i < tally.items.size(); ++i)
            std::cout << tally.items[i] << "," << erqa::format_value(fitted.scores[i]) << "\n";
        subjective = erqa::broadcast_subjective(scores, tally.items, fitted);
    } else {
        subjective = erqa::read_subjective_csv(subjective_file);
    }

    const erqa::CorrelationReport report = erqa::build_correlation_report(scores, subjective);
    erqa::write_text_file(out, format == "csv" ? erqa::correlation_report_to_csv(report)
                                               : erqa::correlation_report_to_json(report));
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_panel(const std::string& gt_path, const std::string& dist_path,
              const std::string& format, const std::string& out) {
    const erqa::MetricPanel panel =
        erqa::metric_panel(erqa::load_frame(gt_path), erqa::load_frame(dist_path));
    const std::string text =
        format == "csv" ? erqa::panel_to_csv(panel) : erqa::panel_to_json(panel);
    if (out.empty()) {
        std::cout << text;
        if (format != "csv")
            std::cout << "\n";
    } else {
        erqa::write_text_file(out, text);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int run_edges(const std::string& in_path, int low, int high, bool l2, bool pre_smooth,
              const std::string& out) {
    erqa::CannyParams params;
    if (low >= 0)
        params.low_threshold = low;
    if (high >= 0)
        params.high_threshold = high;
    params.norm = l2 ? erqa::MagnitudeNorm::L2 : erqa::MagnitudeNorm::L1;
    params.pre_smooth = pre_smooth;
    const erqa::EdgeMap map =
        erqa::detect_edges(erqa::to_luma(erqa::load_frame(in_path)), params);
    erqa::save_frame(out, erqa::edge_map_to_frame(map));
    std::cout << "wrote " << out << " (" << map.edge_count() << " edge pixels)\n";
    return 0;
}

int run_shift_grid(const std::string& gt_path, const std::string& dist_path, int radius,
                   const std::string& out) {
    const erqa::ShiftSearchResult result = erqa::find_global_shift(
        erqa::load_frame(gt_path), erqa::load_frame(dist_path), radius);
    std::string csv = "dy\\dx";
    for (int dx = -result.radius; dx <= result.radius; ++dx)
        csv += "," + std::to_string(dx);
    csv += "\n";
    for (int dy = -result.radius; dy <= result.radius; ++dy) {
        csv += std::to_string(dy);
        for (int dx = -result.radius; dx <= result.radius; ++dx)
            csv += "," + erqa::format_value(result.grid_at(dx, dy).db);
        csv += "\n";
    }
    if (out.empty()) {
        std::cout << csv;
    } else {
        erqa::write_text_file(out, csv);
        std::cout << "wrote " << out << "\n";
    }
    std::printf("best shift dx=%d dy=%d psnr=%s\n", result.shift.dx, result.shift.dy,
                erqa::format_value(result.psnr.db).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-restoration quality assessment toolkit"};
    app.require_subcommand(1);

    // score
    auto* score = app.add_subcommand("score", "Batch-score frame sequences from a manifest");
    std::string manifest_path;
    score->add_option("manifest", manifest_path, "Run manifest (JSON)")->required();
    ConfigFlags score_flags;
    score_flags.add_to(*score);
    bool ablation = false;
    score->add_flag("--ablation", ablation, "Emit the four pipeline-stage columns");
    std::string pool = "mean";
    score->add_option("--pool", pool, "Per-sequence pooling")
        ->check(CLI::IsMember({"mean", "median", "min"}));
    int workers = 0;
    score->add_option("--workers", workers, "Worker threads (0 = logical processors)");
    std::string score_format;
    score->add_option("--format", score_format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    std::string score_out;
    score->add_option("--out,-o", score_out, "Report path (overrides manifest)");

    // visualize
    auto* visualize = app.add_subcommand("visualize", "Render an edge classification map");
    std::string vis_gt, vis_dist, vis_out;
    visualize->add_option("gt", vis_gt, "Ground-truth PNG")->required();
    visualize->add_option("dist", vis_dist, "Distorted PNG")->required();
    visualize->add_option("--out,-o", vis_out, "Output PNG")->required();
    std::string vis_json;
    visualize->add_option("--json-out", vis_json, "Also write the match result as JSON");
    ConfigFlags vis_flags;
    vis_flags.add_to(*visualize);

    // correlate
    auto* correlate = app.add_subcommand("correlate", "Correlate metrics with subjective scores");
    std::vector<std::string> score_files;
    correlate->add_option("--scores", score_files, "Score CSV (region,item,metric,value)")
        ->required();
    std::string votes_file, subjective_file;
    auto* votes_opt = correlate->add_option("--votes", votes_file,
                                            "Pairwise vote CSV (item_a,item_b,winner)");
    auto* subj_opt = correlate->add_option("--subjective", subjective_file,
                                           "Subjective score CSV (region,item,score)");
    votes_opt->excludes(subj_opt);
    std::vector<std::string> region_filter;
    correlate->add_option("--regions", region_filter, "Only these regions, in this order");
    std::string corr_format = "json";
    correlate->add_option("--format", corr_format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    std::string corr_out = "erqa_correlation.json";
    correlate->add_option("--out,-o", corr_out, "Report path");

    // panel
    auto* panel = app.add_subcommand("panel", "Metric panel with and without compensation");
    std::string panel_gt, panel_dist, panel_out;
    panel->add_option("gt", panel_gt, "Ground-truth PNG")->required();
    panel->add_option("dist", panel_dist, "Distorted PNG")->required();
    std::string panel_format = "json";
    panel->add_option("--format", panel_format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    panel->add_option("--out,-o", panel_out, "Output path (default: stdout)");

    // edges
    auto* edges = app.add_subcommand("edges", "Export a Canny edge map as 0/255 PNG");
    std::string edges_in, edges_out;
    edges->add_option("input", edges_in, "Input PNG")->required();
    edges->add_option("--out,-o", edges_out, "Output PNG")->required();
    int edges_low = -1, edges_high = -1;
    bool edges_l2 = false, edges_smooth = false;
    edges->add_option("--canny-low", edges_low, "Low (linking) threshold");
    edges->add_option("--canny-high", edges_high, "High (seeding) threshold");
    edges->add_flag("--l2", edges_l2, "L2 gradient magnitude");
    edges->add_flag("--pre-smooth", edges_smooth, "Binomial blur before differentiation");

    // shift-grid
    auto* shift_grid = app.add_subcommand("shift-grid", "Dump the PSNR grid of the shift search");
    std::string grid_gt, grid_dist, grid_out;
    shift_grid->add_option("gt", grid_gt, "Ground-truth PNG")->required();
    shift_grid->add_option("dist", grid_dist, "Distorted PNG")->required();
    int grid_radius = 3;
    shift_grid->add_option("--shift-radius", grid_radius, "Search radius");
    shift_grid->add_option("--out,-o", grid_out, "Output CSV (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (score->parsed())
            return run_score(manifest_path, score_flags, ablation, pool, workers,
                             score_format, score_out);
        if (visualize->parsed())
            return run_visualize(vis_gt, vis_dist, vis_flags, vis_out, vis_json);
        if (correlate->parsed()) {
            if (votes_file.empty() && subjective_file.empty()) {
                std::cerr << "error: correlate needs --votes or --subjective\n";
                return 1;
            }
            return run_correlate(score_files, votes_file, subjective_file, region_filter,
                                 corr_format, corr_out);
        }
        if (panel->parsed())
            return run_panel(panel_gt, panel_dist, panel_format, panel_out);
        if (edges->parsed())
            return run_edges(edges_in, edges_low, edges_high, edges_l2, edges_smooth,
                             edges_out);
        if (shift_grid->parsed())
            return run_shift_grid(grid_gt, grid_dist, grid_radius, grid_out);
    } catch (const erqa::ManifestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const erqa::DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const erqa::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const erqa::AlignmentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const erqa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
