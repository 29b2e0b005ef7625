#ifndef ERQA_CORRELATE_HPP
#define ERQA_CORRELATE_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "erqa/csv.hpp"
#include "erqa/error.hpp"
#include "erqa/stats.hpp"

namespace erqa {

/// Ingests metric score files (CSV header region,item,metric,value). Several
/// files merge; region and metric ordering follows first appearance.
inline std::vector<RegionScores> read_scores_csv(const std::vector<std::string>& paths) {
    std::vector<RegionScores> regions;
    for (const std::string& path : paths) {
        const auto rows = read_csv(path);
        if (rows.empty() || rows[0] != std::vector<std::string>{"region", "item", "metric", "value"})
            throw ManifestError("score file " + path +
                                " must start with header region,item,metric,value");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() != 4)
                throw ManifestError("score file " + path + " row " + std::to_string(i + 1) +
                                    " has " + std::to_string(rows[i].size()) + " fields");
            const std::string& region = rows[i][0];
            const std::string& item = rows[i][1];
            const std::string& metric = rows[i][2];
            const double value = std::stod(rows[i][3]);

            auto rit = std::find_if(regions.begin(), regions.end(),
                                    [&](const RegionScores& r) { return r.region == region; });
            if (rit == regions.end()) {
                regions.push_back({region, {}});
                rit = regions.end() - 1;
            }
            auto mit = std::find_if(rit->metrics.begin(), rit->metrics.end(),
                                    [&](const MetricSeries& m) { return m.metric == metric; });
            if (mit == rit->metrics.end()) {
                rit->metrics.push_back({metric, {}});
                mit = rit->metrics.end() - 1;
            }
            mit->values.emplace_back(item, value);
        }
    }
    return regions;
}

struct Vote {
    std::string item_a;
    std::string item_b;
    std::string winner; // "a", "b" or "tie"
};

/// Vote file: CSV header item_a,item_b,winner with winner in {a, b, tie}.
inline std::vector<Vote> read_votes_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"item_a", "item_b", "winner"})
        throw ManifestError("vote file " + path +
                            " must start with header item_a,item_b,winner");
    std::vector<Vote> votes;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3)
            throw ManifestError("vote file " + path + " row " + std::to_string(i + 1) +
                                " has " + std::to_string(rows[i].size()) + " fields");
        if (rows[i][2] != "a" && rows[i][2] != "b" && rows[i][2] != "tie")
            throw ManifestError("vote file " + path + " row " + std::to_string(i + 1) +
                                ": winner must be a, b or tie");
        votes.push_back({rows[i][0], rows[i][1], rows[i][2]});
    }
    return votes;
}

/// Builds a named tally from raw votes. Items are indexed in order of first
/// appearance; a tie credits half a win in each direction.
inline PairwiseTally tally_from_votes(const std::vector<Vote>& votes) {
    std::vector<std::string> items;
    auto index_of = [&](const std::string& name) {
        const auto it = std::find(items.begin(), items.end(), name);
        if (it != items.end())
            return static_cast<int>(it - items.begin());
        items.push_back(name);
        return static_cast<int>(items.size() - 1);
    };
    for (const Vote& v : votes) {
        index_of(v.item_a);
        index_of(v.item_b);
    }
    PairwiseTally tally(static_cast<int>(items.size()));
    tally.items = items;
    for (const Vote& v : votes) {
        const int a = index_of(v.item_a);
        const int b = index_of(v.item_b);
        if (a == b)
            throw ManifestError("vote compares item '" + v.item_a + "' with itself");
        if (v.winner == "a") {
            tally.at(a, b) += 1.0;
        } else if (v.winner == "b") {
            tally.at(b, a) += 1.0;
        } else {
            tally.at(a, b) += 0.5;
            tally.at(b, a) += 0.5;
        }
    }
    return tally;
}

/// Subjective score file: CSV header region,item,score.
inline std::vector<RegionSubjective> read_subjective_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"region", "item", "score"})
        throw ManifestError("subjective file " + path +
                            " must start with header region,item,score");
    std::vector<RegionSubjective> regions;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3)
            throw ManifestError("subjective file " + path + " row " + std::to_string(i + 1) +
                                " has " + std::to_string(rows[i].size()) + " fields");
        const std::string& region = rows[i][0];
        auto rit = std::find_if(regions.begin(), regions.end(),
                                [&](const RegionSubjective& r) { return r.region == region; });
        if (rit == regions.end()) {
            regions.push_back({region, {}});
            rit = regions.end() - 1;
        }
        rit->scores.emplace_back(rows[i][1], std::stod(rows[i][2]));
    }
    return regions;
}

/// Expands one fitted score set to every region present in the metric scores.
inline std::vector<RegionSubjective> broadcast_subjective(
    const std::vector<RegionScores>& scores, const std::vector<std::string>& items,
    const SubjectiveScores& fitted) {
    std::vector<std::pair<std::string, double>> pairs;
    pairs.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        pairs.emplace_back(items[i], fitted.scores[i]);
    std::vector<RegionSubjective> out;
    out.reserve(scores.size());
    for (const RegionScores& rs : scores)
        out.push_back({rs.region, pairs});
    return out;
}

/// Keeps only the named regions (in the given order). Empty filter = keep all.
inline std::vector<RegionScores> filter_regions(std::vector<RegionScores> scores,
                                                const std::vector<std::string>& keep) {
    if (keep.empty())
        return scores;
    std::vector<RegionScores> out;
    for (const std::string& name : keep) {
        const auto it = std::find_if(scores.begin(), scores.end(),
                                     [&](const RegionScores& r) { return r.region == name; });
        if (it == scores.end())
            throw AlignmentError("region '" + name + "' not present in the score files");
        out.push_back(std::move(*it));
    }
    return out;
}

} // namespace erqa

#endif // ERQA_CORRELATE_HPP
