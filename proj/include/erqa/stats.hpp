#ifndef ERQA_STATS_HPP
#define ERQA_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "erqa/error.hpp"

namespace erqa {

/// Pairwise win counts: wins(i, j) = number of times item i beat item j.
/// An "indistinguishable" vote is recorded upstream as 0.5 in each direction.
struct PairwiseTally {
    int n_items = 0;
    std::vector<double> wins;        // n_items x n_items, row-major, zero diagonal
    std::vector<std::string> items;  // optional names; indices used when empty

    explicit PairwiseTally(int n = 0)
        : n_items(n), wins(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}

    double& at(int i, int j) { return wins[static_cast<std::size_t>(i) * n_items + j]; }
    double at(int i, int j) const { return wins[static_cast<std::size_t>(i) * n_items + j]; }

    std::string item_name(int i) const {
        return items.empty() ? std::to_string(i) : items[static_cast<std::size_t>(i)];
    }
};

/// Bradley-Terry strengths, normalized to sum 1.
struct SubjectiveScores {
    std::vector<double> scores;
};

/// Log-likelihood of strengths under P(i beats j) = pi_i / (pi_i + pi_j).
inline double bradley_terry_log_likelihood(const PairwiseTally& tally,
                                           std::span<const double> strengths) {
    double ll = 0.0;
    for (int i = 0; i < tally.n_items; ++i)
        for (int j = 0; j < tally.n_items; ++j) {
            if (i == j)
                continue;
            const double w = tally.at(i, j);
            if (w > 0.0)
                ll += w * (std::log(strengths[static_cast<std::size_t>(i)]) -
                           std::log(strengths[static_cast<std::size_t>(i)] +
                                    strengths[static_cast<std::size_t>(j)]));
        }
    return ll;
}

namespace detail {

// Union-find over items connected by at least one comparison.
inline std::vector<std::vector<int>> comparison_components(const PairwiseTally& tally) {
    const int n = tally.n_items;
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (tally.at(i, j) + tally.at(j, i) > 0.0)
                parent[static_cast<std::size_t>(find(i))] = find(j);
    std::vector<std::vector<int>> components;
    std::vector<int> root_slot(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (root_slot[static_cast<std::size_t>(r)] < 0) {
            root_slot[static_cast<std::size_t>(r)] = static_cast<int>(components.size());
            components.emplace_back();
        }
        components[static_cast<std::size_t>(root_slot[static_cast<std::size_t>(r)])].push_back(i);
    }
    return components;
}

} // namespace detail

/// Maximum-likelihood Bradley-Terry strengths via the standard
/// minorization-maximization iteration, normalized to sum 1. Converged when
/// the largest absolute score change drops below `tol`. When some item has
/// zero wins the finite MLE does not exist, so 0.5 is added to both
/// directions of every compared pair (with a warning through `on_warning`).
/// `on_iteration`, when set, observes the normalized strengths after every
/// iteration; the log-likelihood is non-decreasing along this sequence.
inline SubjectiveScores fit_bradley_terry(
    const PairwiseTally& tally, double tol = 1e-9, int max_iter = 10000,
    const std::function<void(std::span<const double>)>& on_iteration = {},
    const std::function<void(const std::string&)>& on_warning = {}) {
    const int n = tally.n_items;
    if (n < 2)
        throw FittingError("bradley-terry fit needs at least two items");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (tally.at(i, j) < 0.0)
                throw FittingError("negative win count for " + tally.item_name(i) +
                                   " vs " + tally.item_name(j));
            if (i == j && tally.at(i, j) != 0.0)
                throw FittingError("tally diagonal must be zero");
        }

    const auto components = detail::comparison_components(tally);
    if (components.size() > 1) {
        std::string msg = "comparison graph is disconnected: components";
        for (const auto& comp : components) {
            msg += " {";
            for (std::size_t k = 0; k < comp.size(); ++k)
                msg += (k ? "," : "") + tally.item_name(comp[static_cast<std::size_t>(k)]);
            msg += "}";
        }
        throw FittingError(msg);
    }

    PairwiseTally work = tally;
    bool needs_smoothing = false;
    for (int i = 0; i < n && !needs_smoothing; ++i) {
        double row_wins = 0.0;
        for (int j = 0; j < n; ++j)
            row_wins += work.at(i, j);
        needs_smoothing = row_wins <= 0.0;
    }
    if (needs_smoothing) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (work.at(i, j) + work.at(j, i) > 0.0) {
                    work.at(i, j) += 0.5;
                    work.at(j, i) += 0.5;
                }
        if (on_warning)
            on_warning("an item has zero wins; added 0.5 smoothing to every compared pair");
    }

    std::vector<double> pi(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i < n; ++i) {
            double total_wins = 0.0;
            double denom = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                total_wins += work.at(i, j);
                const double games = work.at(i, j) + work.at(j, i);
                if (games > 0.0)
                    denom += games / (pi[static_cast<std::size_t>(i)] +
                                      pi[static_cast<std::size_t>(j)]);
            }
            next[static_cast<std::size_t>(i)] = total_wins / denom;
        }
        const double sum = std::accumulate(next.begin(), next.end(), 0.0);
        for (double& v : next)
            v /= sum;
        double max_change = 0.0;
        for (int i = 0; i < n; ++i)
            max_change = std::max(max_change, std::abs(next[static_cast<std::size_t>(i)] -
                                                       pi[static_cast<std::size_t>(i)]));
        pi = next;
        if (on_iteration)
            on_iteration(pi);
        if (max_change < tol)
            return {std::move(pi)};
    }
    throw FittingError("bradley-terry fit did not converge in " + std::to_string(max_iter) +
                       " iterations");
}

/// Pearson product-moment correlation.
inline double plcc(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw CorrelationError("correlation inputs must have equal length");
    if (x.size() < 3)
        throw CorrelationError("correlation needs at least 3 samples, got " +
                               std::to_string(x.size()));
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw CorrelationError("correlation undefined: input vector is constant");
    return sxy / std::sqrt(sxx * syy);
}

namespace detail {

// Average (fractional) ranks for ties.
inline std::vector<double> fractional_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]])
            ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

} // namespace detail

/// Spearman rank correlation: Pearson correlation of fractional ranks.
inline double srcc(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw CorrelationError("correlation inputs must have equal length");
    if (x.size() < 3)
        throw CorrelationError("correlation needs at least 3 samples, got " +
                               std::to_string(x.size()));
    const std::vector<double> rx = detail::fractional_ranks(x);
    const std::vector<double> ry = detail::fractional_ranks(y);
    return plcc(rx, ry);
}

struct CorrelationCell {
    double plcc = 0.0;
    double srcc = 0.0;
};

/// Per-item values of one metric in one region.
struct MetricSeries {
    std::string metric;
    std::vector<std::pair<std::string, double>> values; // item -> value
};

struct RegionScores {
    std::string region;
    std::vector<MetricSeries> metrics;
};

struct RegionSubjective {
    std::string region;
    std::vector<std::pair<std::string, double>> scores; // item -> subjective score
};

/// Correlations of every metric against subjective scores, region by region,
/// plus the arithmetic mean over regions. Region and metric ordering follows
/// the input.
struct CorrelationReport {
    std::vector<std::string> regions;
    std::vector<std::string> metrics;
    std::vector<std::vector<CorrelationCell>> cells; // [metric][region]
    std::vector<CorrelationCell> mean_row;           // [metric]
};

inline CorrelationReport build_correlation_report(
    std::span<const RegionScores> metric_scores,
    std::span<const RegionSubjective> subjective) {
    CorrelationReport report;
    for (const RegionScores& rs : metric_scores) {
        report.regions.push_back(rs.region);
        for (const MetricSeries& ms : rs.metrics)
            if (std::find(report.metrics.begin(), report.metrics.end(), ms.metric) ==
                report.metrics.end())
                report.metrics.push_back(ms.metric);
    }

    report.cells.assign(report.metrics.size(),
                        std::vector<CorrelationCell>(report.regions.size()));
    for (std::size_t ri = 0; ri < report.regions.size(); ++ri) {
        const RegionScores& rs = metric_scores[ri];
        const auto subj = std::find_if(subjective.begin(), subjective.end(),
                                       [&](const RegionSubjective& s) {
                                           return s.region == rs.region;
                                       });
        if (subj == subjective.end())
            throw AlignmentError("no subjective scores for region '" + rs.region + "'");

        for (std::size_t mi = 0; mi < report.metrics.size(); ++mi) {
            const auto series = std::find_if(rs.metrics.begin(), rs.metrics.end(),
                                             [&](const MetricSeries& ms) {
                                                 return ms.metric == report.metrics[mi];
                                             });
            if (series == rs.metrics.end())
                throw AlignmentError("metric '" + report.metrics[mi] +
                                     "' missing in region '" + rs.region + "'");
            std::vector<double> x, y;
            x.reserve(subj->scores.size());
            y.reserve(subj->scores.size());
            std::string missing;
            for (const auto& [item, subj_score] : subj->scores) {
                const auto value = std::find_if(series->values.begin(), series->values.end(),
                                                [&](const auto& kv) { return kv.first == item; });
                if (value == series->values.end()) {
                    missing += missing.empty() ? item : ", " + item;
                    continue;
                }
                x.push_back(value->second);
                y.push_back(subj_score);
            }
            if (!missing.empty())
                throw AlignmentError("metric '" + report.metrics[mi] + "' in region '" +
                                     rs.region + "' is missing items: " + missing);
            if (series->values.size() != subj->scores.size())
                throw AlignmentError("metric '" + report.metrics[mi] + "' in region '" +
                                     rs.region + "' has items absent from the subjective scores");
            report.cells[mi][ri] = {plcc(x, y), srcc(x, y)};
        }
    }

    report.mean_row.resize(report.metrics.size());
    for (std::size_t mi = 0; mi < report.metrics.size(); ++mi) {
        double sp = 0.0, ss = 0.0;
        for (std::size_t ri = 0; ri < report.regions.size(); ++ri) {
            sp += report.cells[mi][ri].plcc;
            ss += report.cells[mi][ri].srcc;
        }
        const double nr = static_cast<double>(report.regions.size());
        report.mean_row[mi] = {sp / nr, ss / nr};
    }
    return report;
}

} // namespace erqa

#endif // ERQA_STATS_HPP
