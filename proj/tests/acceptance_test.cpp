// Acceptance suite: each test prints one pass/fail line for its criterion.
// Runs against the library and, for the determinism criterion, the CLI binary.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "erqa/erqa.hpp"
#include "reference_canny.hpp"
#include "reference_matching.hpp"
#include "test_util.hpp"

using erqa::EdgeMap;
using erqa::ErqaConfig;
using erqa::ErqaVersion;
using erqa::Frame;

namespace {

void report_line(int criterion, const std::string& name, bool ok) {
    std::printf("criterion %d (%s): %s\n", criterion, name.c_str(), ok ? "PASS" : "FAIL");
    std::fflush(stdout);
}

ErqaConfig make_config(ErqaVersion version, bool global_shift, bool tolerance) {
    ErqaConfig c;
    c.version = version;
    c.enable_global_shift = global_shift;
    c.enable_local_tolerance = tolerance;
    return c;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("acceptance: pipeline identity") {
    // erqa(f, f) = 1.0 exactly for 20 textured 128x128 frames under every
    // combination of version x global shift x local tolerance. The two
    // combinations presenting v1.1 without local tolerance are rejected by
    // config validation, which is asserted instead. Runtime budget:
    // 50 ms per frame per configuration.
    bool ok = true;
    std::int64_t frames_scored = 0;
    double total_seconds = 0.0;
    for (ErqaVersion version : {ErqaVersion::v1_0, ErqaVersion::v1_1})
        for (bool global_shift : {false, true})
            for (bool tolerance : {false, true}) {
                const ErqaConfig config = make_config(version, global_shift, tolerance);
                if (version == ErqaVersion::v1_1 && !tolerance) {
                    bool rejected = false;
                    try {
                        erqa::validate(config);
                    } catch (const erqa::ContractError&) {
                        rejected = true;
                    }
                    ok = ok && rejected;
                    continue;
                }
                for (unsigned seed = 0; seed < 20; ++seed) {
                    const Frame f = testutil::textured_frame(128, 128, 1000 + seed, 6);
                    const auto t0 = std::chrono::steady_clock::now();
                    const double f1 = erqa::erqa(f, f, config).f1;
                    const auto t1 = std::chrono::steady_clock::now();
                    total_seconds += std::chrono::duration<double>(t1 - t0).count();
                    ++frames_scored;
                    ok = ok && f1 == 1.0;
                }
            }
    const double avg_ms = 1000.0 * total_seconds / static_cast<double>(frames_scored);
    ok = ok && avg_ms < 50.0;
    report_line(1, "pipeline identity", ok);
    CHECK(ok);
}

TEST_CASE("acceptance: global shift recovery") {
    bool ok = true;
    for (unsigned seed = 0; seed < 10; ++seed) {
        const Frame gt = testutil::textured_frame(64, 64, 1100 + seed, 4);
        for (int dy = -3; dy <= 3; ++dy)
            for (int dx = -3; dx <= 3; ++dx) {
                const Frame dist = testutil::translate_with_noise(
                    gt, dx, dy, 1200 + seed * 49 + static_cast<unsigned>((dy + 3) * 7 + dx + 3));
                const auto search = erqa::find_global_shift(gt, dist);
                ok = ok && search.shift.dx == dx && search.shift.dy == dy;
                ok = ok && erqa::erqa(gt, dist).f1 == 1.0;
            }
        // Direction of the ablation's global-shift stage: disabling the
        // stage on a (3,3)-shifted copy must hurt.
        const Frame shifted = testutil::translate_with_noise(gt, 3, 3, 1300 + seed);
        ErqaConfig no_global = make_config(ErqaVersion::v1_1, false, true);
        ok = ok && erqa::erqa(gt, shifted, no_global).f1 < 1.0;
    }
    report_line(2, "global shift recovery", ok);
    CHECK(ok);
}

TEST_CASE("acceptance: local tolerance absorbs one-pixel jitter") {
    bool ok = true;
    std::mt19937 rng(1400);
    std::uniform_int_distribution<int> offset(-1, 1);
    const ErqaConfig tolerant = make_config(ErqaVersion::v1_0, false, true);
    const ErqaConfig strict = make_config(ErqaVersion::v1_0, false, false);
    for (int trial = 0; trial < 20; ++trial) {
        const EdgeMap gt = testutil::random_edge_map(48, 48, 0.06, 1500 + trial);
        if (gt.edge_count() == 0)
            continue;
        EdgeMap jittered(48, 48);
        for (int y = 0; y < 48; ++y)
            for (int x = 0; x < 48; ++x)
                if (gt.at(x, y)) {
                    const int nx = std::clamp(x + offset(rng), 0, 47);
                    const int ny = std::clamp(y + offset(rng), 0, 47);
                    jittered.set(nx, ny, true);
                }
        ok = ok && erqa::match_edges(gt, jittered, tolerant).f1 == 1.0;
        ok = ok && erqa::match_edges(gt, jittered, strict).f1 < 0.5;
    }
    report_line(3, "local tolerance", ok);
    CHECK(ok);
}

TEST_CASE("acceptance: wide-edge penalization") {
    bool ok = true;
    const ErqaConfig v10 = make_config(ErqaVersion::v1_0, false, true);
    const ErqaConfig v11 = make_config(ErqaVersion::v1_1, false, true);

    // One-pixel widened edges: GT points on even columns only, the distorted
    // map adds the right neighbor of every GT pixel. v1.0 forgives this
    // completely; the one-to-one rule leaves the duplicates unmatched, which
    // is exactly the 2/3 ratio of the one-pixel hand trace.
    std::mt19937 rng(1600);
    for (int trial = 0; trial < 20; ++trial) {
        EdgeMap gt(32, 32);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; x += 2)
                if (rng() % 4 == 0)
                    gt.set(x, y, true);
        if (gt.edge_count() == 0)
            continue;
        EdgeMap dilated = gt;
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; x += 2)
                if (gt.at(x, y))
                    dilated.set(x + 1, y, true);
        ok = ok && erqa::match_edges(gt, dilated, v10).f1 == 1.0;
        ok = ok && erqa::match_edges(gt, dilated, v11).f1 <= 2.0 / 3.0 + 0.05;
    }

    // Dominance: v1.1 never exceeds v1.0, 1000 random pairs, zero violations.
    std::mt19937 pair_rng(1700);
    for (int trial = 0; trial < 1000; ++trial) {
        const int w = 6 + static_cast<int>(pair_rng() % 10);
        const int h = 6 + static_cast<int>(pair_rng() % 10);
        const double density = 0.05 + (pair_rng() % 25) / 100.0;
        const EdgeMap a = testutil::random_edge_map(w, h, density, pair_rng());
        const EdgeMap b = testutil::random_edge_map(w, h, density, pair_rng());
        ok = ok && erqa::match_edges(a, b, v11).f1 <= erqa::match_edges(a, b, v10).f1;
    }
    report_line(4, "wide-edge penalization", ok);
    CHECK(ok);
}

TEST_CASE("acceptance: canny equals the brute-force reference") {
    bool ok = true;
    for (unsigned seed = 0; seed < 100; ++seed) {
        const Frame f = seed % 2 ? testutil::random_frame(32, 32, 1, 1800 + seed)
                                 : testutil::textured_frame(32, 32, 1800 + seed, 4);
        ok = ok && erqa::detect_edges(f) == testref::reference_canny(f);
    }

    Frame step(16, 16, 1);
    for (int y = 0; y < 16; ++y)
        for (int x = 8; x < 16; ++x)
            step.set(x, y, 0, 255);
    ok = ok && erqa::detect_edges(step) == testref::reference_canny(step);

    Frame ramp(32, 32, 1);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            ramp.set(x, y, 0, static_cast<std::uint8_t>(x * 255 / 31));
    ok = ok && erqa::detect_edges(ramp) == testref::reference_canny(ramp);

    Frame steep_ramp(32, 32, 1);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            steep_ramp.set(x, y, 0, static_cast<std::uint8_t>(std::min(255, x * 32)));
    ok = ok && erqa::detect_edges(steep_ramp) == testref::reference_canny(steep_ramp);

    Frame constant(16, 16, 1);
    for (auto& v : constant.data)
        v = 55;
    ok = ok && erqa::detect_edges(constant) == testref::reference_canny(constant);
    ok = ok && erqa::detect_edges(constant).edge_count() == 0;

    report_line(5, "canny oracle equivalence", ok);
    CHECK(ok);
}

TEST_CASE("acceptance: v1.0 matching equals brute-force enumeration") {
    bool ok = true;
    const ErqaConfig v10 = make_config(ErqaVersion::v1_0, false, true);
    std::mt19937 rng(1900);
    for (int trial = 0; trial < 1000; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 12);
        const int h = 1 + static_cast<int>(rng() % 12);
        const double density = (rng() % 40) / 100.0;
        const EdgeMap gt = testutil::random_edge_map(w, h, density, rng());
        const EdgeMap dist = testutil::random_edge_map(w, h, density, rng());
        const auto expected = testref::reference_match_v1_0(gt, dist);
        const auto r = erqa::match_edges(gt, dist, v10);
        ok = ok && r.tp == expected.tp && r.fp == expected.fp && r.fn == expected.fn;
    }
    report_line(6, "v1.0 matching oracle", ok);
    CHECK(ok);
}

TEST_CASE("acceptance: statistics closed forms and likelihood monotonicity") {
    bool ok = true;

    const std::vector<double> x = {1, 2, 3, 4};
    const std::vector<double> y = {1, 3, 2, 4};
    ok = ok && std::abs(erqa::plcc(x, y) - 0.8) < 1e-12;
    ok = ok && std::abs(erqa::srcc(x, y) - 0.8) < 1e-12;

    const std::vector<double> a = {0.4, 1.9, 0.1, 2.8, 1.3, 0.6, 2.2};
    const std::vector<double> b = {1.1, 0.3, 2.0, 2.6, 0.9, 1.7, 0.2};
    std::vector<double> eb, cb;
    for (double v : b) {
        eb.push_back(std::exp(v));
        cb.push_back(v * v * v);
    }
    ok = ok && std::abs(erqa::srcc(a, eb) - erqa::srcc(a, b)) < 1e-12;
    ok = ok && std::abs(erqa::srcc(a, cb) - erqa::srcc(a, b)) < 1e-12;
    std::vector<double> affine;
    for (double v : b)
        affine.push_back(2.0 * v + 1.0);
    ok = ok && std::abs(erqa::plcc(a, affine) - erqa::plcc(a, b)) < 1e-12;

    erqa::PairwiseTally two(2);
    two.at(0, 1) = 3.0;
    two.at(1, 0) = 1.0;
    const auto fitted = erqa::fit_bradley_terry(two);
    ok = ok && std::abs(fitted.scores[0] - 0.75) < 1e-6;
    ok = ok && std::abs(fitted.scores[1] - 0.25) < 1e-6;

    std::mt19937 rng(2000);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 6);
        erqa::PairwiseTally tally(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    tally.at(i, j) = static_cast<double>(1 + rng() % 12);
        double last = -1e300;
        bool monotone = true;
        erqa::fit_bradley_terry(tally, 1e-9, 10000, [&](std::span<const double> pi) {
            const double ll = erqa::bradley_terry_log_likelihood(tally, pi);
            monotone = monotone && ll >= last - 1e-10 * std::max(1.0, std::abs(last));
            last = ll;
        });
        ok = ok && monotone;
    }
    report_line(7, "statistics", ok);
    CHECK(ok);
}

TEST_CASE("acceptance: compensation wrapper direction") {
    bool ok = true;
    auto psnr_metric = [](const Frame& a, const Frame& b) { return erqa::psnr(a, b); };
    auto ssim_metric = [](const Frame& a, const Frame& b) { return erqa::ssim(a, b); };

    for (unsigned seed = 0; seed < 10; ++seed) {
        const Frame gt = testutil::textured_frame(48, 48, 2100 + seed, 4);

        // Translated copies: compensated strictly exceeds raw.
        const Frame shifted = testutil::translate_with_noise(gt, 2, -1, 2200 + seed);
        const auto raw_psnr = erqa::psnr(gt, shifted);
        const auto comp_psnr = erqa::score_with_compensation(psnr_metric, gt, shifted);
        ok = ok && comp_psnr > raw_psnr;
        const double raw_ssim = erqa::ssim(gt, shifted);
        const double comp_ssim = erqa::score_with_compensation(ssim_metric, gt, shifted);
        ok = ok && comp_ssim > raw_ssim;

        // Damaged-but-unshifted copies: the search picks (0,0) and the
        // wrapper must equal the raw metric exactly.
        Frame damaged = gt;
        for (int i = 0; i < 16; ++i)
            damaged.data[37 * (i + 1)] ^= 0x08;
        ok = ok && erqa::find_global_shift(gt, damaged).shift == erqa::ShiftVector{0, 0};
        ok = ok && erqa::score_with_compensation(psnr_metric, gt, damaged).db ==
                       erqa::psnr(gt, damaged).db;
        ok = ok && erqa::score_with_compensation(ssim_metric, gt, damaged) ==
                       erqa::ssim(gt, damaged);
    }
    report_line(8, "compensation wrapper direction", ok);
    CHECK(ok);
}

TEST_CASE("acceptance: cli determinism across worker counts") {
    namespace fs = std::filesystem;
    testutil::TempDir dir("acceptance_cli");
    fs::create_directories(dir.str("gt"));
    fs::create_directories(dir.str("model_a"));
    fs::create_directories(dir.str("model_b"));
    for (int i = 0; i < 6; ++i) {
        const Frame f = testutil::textured_frame(48, 48, 2300 + static_cast<unsigned>(i), 4);
        const std::string name = "f" + std::to_string(i) + ".png";
        erqa::save_frame(dir.str("gt") + "/" + name, f);
        erqa::save_frame(dir.str("model_a") + "/" + name,
                         testutil::translate_with_noise(f, 1, 1, 2400 + static_cast<unsigned>(i)));
        erqa::save_frame(dir.str("model_b") + "/" + name,
                         testutil::random_frame(48, 48, 1, 2500 + static_cast<unsigned>(i)));
    }
    {
        std::ofstream manifest(dir.str("manifest.json"));
        manifest << R"({
  "gt_dir": "gt",
  "dist_dirs": {"model_a": "model_a", "model_b": "model_b"},
  "metrics": ["erqa", "psnr", "ssim"],
  "output": {"path": "report.json", "format": "json"}
})";
    }

    auto run_cli = [&](const std::string& args) {
        const std::string cmd = std::string(ERQA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };

    bool ok = true;
    ok = ok && run_cli("score " + dir.str("manifest.json") + " --workers 1 --out " +
                       dir.str("w1.json")) == 0;
    ok = ok && run_cli("score " + dir.str("manifest.json") + " --workers 7 --out " +
                       dir.str("w7.json")) == 0;
    ok = ok && read_file(dir.str("w1.json")) == read_file(dir.str("w7.json"));

    ok = ok && run_cli("score " + dir.str("manifest.json") + " --workers 2 --format csv --out " +
                       dir.str("w2.csv")) == 0;
    ok = ok && run_cli("score " + dir.str("manifest.json") + " --workers 5 --format csv --out " +
                       dir.str("w5.csv")) == 0;
    ok = ok && read_file(dir.str("w2.csv")) == read_file(dir.str("w5.csv"));

    // Ablation reports must be deterministic too.
    ok = ok && run_cli("score " + dir.str("manifest.json") + " --ablation --workers 1 --out " +
                       dir.str("a1.json")) == 0;
    ok = ok && run_cli("score " + dir.str("manifest.json") + " --ablation --workers 6 --out " +
                       dir.str("a6.json")) == 0;
    ok = ok && read_file(dir.str("a1.json")) == read_file(dir.str("a6.json"));

    report_line(9, "cli determinism", ok);
    CHECK(ok);
}

// Not a numbered criterion: end-to-end checks of the CLI error contract and
// the printed outputs the spec examples rely on.
TEST_CASE("cli exit codes and printed outputs") {
    namespace fs = std::filesystem;
    testutil::TempDir dir("cli_contract");
    fs::create_directories(dir.str("gt"));
    fs::create_directories(dir.str("up"));
    for (int i = 0; i < 2; ++i) {
        const Frame f = testutil::textured_frame(48, 48, 2600 + static_cast<unsigned>(i), 4);
        const std::string name = "f" + std::to_string(i) + ".png";
        erqa::save_frame(dir.str("gt") + "/" + name, f);
        erqa::save_frame(dir.str("up") + "/" + name, f);
    }
    {
        std::ofstream manifest(dir.str("manifest.json"));
        manifest << R"({"gt_dir": "gt", "dist_dirs": {"up": "up"},)"
                 << R"( "output": {"path": "r.json", "format": "json"}})";
    }
    auto run_cli = [&](const std::string& args, const std::string& stdout_path) {
        const std::string cmd = std::string(ERQA_CLI_PATH) + " " + args + " > " +
                                stdout_path + " 2> /dev/null";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };

    // Success path, and the visualize output of identical frames.
    CHECK(run_cli("score " + dir.str("manifest.json"), dir.str("out.txt")) == 0);
    CHECK(run_cli("visualize " + dir.str("gt/f0.png") + " " + dir.str("up/f0.png") +
                      " -o " + dir.str("vis.png") + " --json-out " + dir.str("vis.json"),
                  dir.str("vis.txt")) == 0);
    const std::string vis = read_file(dir.str("vis.txt"));
    CHECK(vis.find("fp=0") != std::string::npos);
    CHECK(vis.find("fn=0") != std::string::npos);
    CHECK(vis.find("f1=1.000000") != std::string::npos);
    const std::string vis_json = read_file(dir.str("vis.json"));
    CHECK(vis_json.find("\"precision\":1.000000") != std::string::npos);

    // Exit 2: frame-set mismatch, named after the first offending file.
    fs::remove(dir.str("up") + "/f1.png");
    CHECK(run_cli("score " + dir.str("manifest.json"), dir.str("out.txt")) == 2);

    // Exit 3: unreadable input frame.
    CHECK(run_cli("visualize " + dir.str("gt/missing.png") + " " + dir.str("gt/f0.png") +
                      " -o " + dir.str("x.png"),
                  dir.str("out.txt")) == 3);

    // Exit 4: item misalignment in correlate.
    {
        std::ofstream scores(dir.str("scores.csv"));
        scores << "region,item,metric,value\n"
               << "crop,a,m,0.1\ncrop,b,m,0.5\ncrop,c,m,0.9\n";
        std::ofstream subj(dir.str("subj.csv"));
        subj << "region,item,score\n"
             << "crop,a,0.2\ncrop,b,0.4\ncrop,x,0.8\n";
    }
    CHECK(run_cli("correlate --scores " + dir.str("scores.csv") + " --subjective " +
                      dir.str("subj.csv") + " --out " + dir.str("c.json"),
                  dir.str("out.txt")) == 4);

    // The two-item vote fixture prints its closed-form fit before any
    // correlation runs (the report itself then fails: 2 items is below the
    // correlation minimum).
    {
        std::ofstream votes(dir.str("votes.csv"));
        votes << "item_a,item_b,winner\n"
              << "a,b,a\na,b,a\na,b,a\na,b,b\n";
        std::ofstream scores(dir.str("scores2.csv"));
        scores << "region,item,metric,value\n"
               << "crop,a,m,0.9\ncrop,b,m,0.1\n";
    }
    run_cli("correlate --scores " + dir.str("scores2.csv") + " --votes " + dir.str("votes.csv") +
                " --out " + dir.str("c2.json"),
            dir.str("bt.txt"));
    const std::string bt = read_file(dir.str("bt.txt"));
    CHECK(bt.find("a,0.750000") != std::string::npos);
    CHECK(bt.find("b,0.250000") != std::string::npos);
}
