#ifndef ERQA_REPORT_HPP
#define ERQA_REPORT_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "erqa/csv.hpp"
#include "erqa/error.hpp"
#include "erqa/matching.hpp"
#include "erqa/panel.hpp"
#include "erqa/stats.hpp"

namespace erqa {

/// Fixed 6-decimal float formatting used in every report, so identical runs
/// produce byte-identical files. Infinities print as inf / -inf.
inline std::string format_value(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

/// Minimal JSON emitter with caller-controlled key order and the fixed
/// numeric formatting above (infinite values are emitted as the string "inf").
class JsonWriter {
public:
    std::string take() { return std::move(out_); }

    void begin_object() { out_ += '{'; }
    void end_object() { out_ += '}'; }
    void begin_array() { out_ += '['; }
    void end_array() { out_ += ']'; }
    void comma() { out_ += ','; }

    void key(const std::string& k) {
        string(k);
        out_ += ':';
    }
    void string(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\r': out_ += "\\r"; break;
            case '\t': out_ += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out_ += buf;
                } else {
                    out_ += c;
                }
            }
        }
        out_ += '"';
    }
    void number(double v) {
        if (std::isinf(v)) {
            string(v > 0 ? "inf" : "-inf");
            return;
        }
        out_ += format_value(v);
    }
    void integer(std::int64_t v) { out_ += std::to_string(v); }
    void boolean(bool v) { out_ += v ? "true" : "false"; }

private:
    std::string out_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw IoError("write failed: " + path);
}

/// The six numeric fields of a match result.
inline std::string match_result_to_json(const EdgeMatchResult& result) {
    JsonWriter w;
    w.begin_object();
    w.key("tp");
    w.integer(result.tp);
    w.comma();
    w.key("fp");
    w.integer(result.fp);
    w.comma();
    w.key("fn");
    w.integer(result.fn);
    w.comma();
    w.key("precision");
    w.number(result.precision);
    w.comma();
    w.key("recall");
    w.number(result.recall);
    w.comma();
    w.key("f1");
    w.number(result.f1);
    w.end_object();
    return w.take();
}

// ---------------------------------------------------------------------------
// Batch score report
// ---------------------------------------------------------------------------

struct FrameScore {
    std::string frame;
    std::vector<double> values; // aligned with ScoreReport::columns
};

struct RegionScoreBlock {
    std::string region;
    std::vector<FrameScore> frames;
    std::vector<double> pooled;
};

struct ModelScoreBlock {
    std::string model;
    std::vector<RegionScoreBlock> regions;
};

struct ScoreReport {
    std::vector<std::string> columns;
    std::string pool_name = "mean";
    std::vector<ModelScoreBlock> models;
};

inline std::string score_report_to_json(const ScoreReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("columns");
    w.begin_array();
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
        if (i) w.comma();
        w.string(report.columns[i]);
    }
    w.end_array();
    w.comma();
    w.key("pooling");
    w.string(report.pool_name);
    w.comma();
    w.key("models");
    w.begin_array();
    for (std::size_t m = 0; m < report.models.size(); ++m) {
        if (m) w.comma();
        const ModelScoreBlock& model = report.models[m];
        w.begin_object();
        w.key("model");
        w.string(model.model);
        w.comma();
        w.key("regions");
        w.begin_array();
        for (std::size_t r = 0; r < model.regions.size(); ++r) {
            if (r) w.comma();
            const RegionScoreBlock& region = model.regions[r];
            w.begin_object();
            w.key("region");
            w.string(region.region);
            w.comma();
            w.key("frames");
            w.begin_array();
            for (std::size_t f = 0; f < region.frames.size(); ++f) {
                if (f) w.comma();
                w.begin_object();
                w.key("frame");
                w.string(region.frames[f].frame);
                for (std::size_t c = 0; c < report.columns.size(); ++c) {
                    w.comma();
                    w.key(report.columns[c]);
                    w.number(region.frames[f].values[c]);
                }
                w.end_object();
            }
            w.end_array();
            w.comma();
            w.key(report.pool_name);
            w.begin_object();
            for (std::size_t c = 0; c < report.columns.size(); ++c) {
                if (c) w.comma();
                w.key(report.columns[c]);
                w.number(region.pooled[c]);
            }
            w.end_object();
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.take();
}

inline std::string score_report_to_csv(const ScoreReport& report) {
    std::string out = "model,region,frame";
    for (const std::string& c : report.columns)
        out += "," + csv_escape(c);
    out += "\n";
    for (const ModelScoreBlock& model : report.models)
        for (const RegionScoreBlock& region : model.regions) {
            for (const FrameScore& fs : region.frames) {
                out += csv_escape(model.model) + "," + csv_escape(region.region) + "," +
                       csv_escape(fs.frame);
                for (double v : fs.values)
                    out += "," + format_value(v);
                out += "\n";
            }
            out += csv_escape(model.model) + "," + csv_escape(region.region) + "," +
                   csv_escape(report.pool_name);
            for (double v : region.pooled)
                out += "," + format_value(v);
            out += "\n";
        }
    return out;
}

// ---------------------------------------------------------------------------
// Correlation report (regions as columns, metrics as rows, mean column last)
// ---------------------------------------------------------------------------

inline std::string correlation_report_to_json(const CorrelationReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("regions");
    w.begin_array();
    for (std::size_t i = 0; i < report.regions.size(); ++i) {
        if (i) w.comma();
        w.string(report.regions[i]);
    }
    w.end_array();
    w.comma();
    w.key("metrics");
    w.begin_array();
    for (std::size_t mi = 0; mi < report.metrics.size(); ++mi) {
        if (mi) w.comma();
        w.begin_object();
        w.key("metric");
        w.string(report.metrics[mi]);
        w.comma();
        w.key("cells");
        w.begin_array();
        for (std::size_t ri = 0; ri < report.regions.size(); ++ri) {
            if (ri) w.comma();
            w.begin_object();
            w.key("region");
            w.string(report.regions[ri]);
            w.comma();
            w.key("plcc");
            w.number(report.cells[mi][ri].plcc);
            w.comma();
            w.key("srcc");
            w.number(report.cells[mi][ri].srcc);
            w.end_object();
        }
        w.end_array();
        w.comma();
        w.key("mean");
        w.begin_object();
        w.key("plcc");
        w.number(report.mean_row[mi].plcc);
        w.comma();
        w.key("srcc");
        w.number(report.mean_row[mi].srcc);
        w.end_object();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.take();
}

inline std::string correlation_report_to_csv(const CorrelationReport& report) {
    std::string out = "metric";
    for (const std::string& r : report.regions)
        out += "," + csv_escape(r + "_plcc") + "," + csv_escape(r + "_srcc");
    out += ",mean_plcc,mean_srcc\n";
    for (std::size_t mi = 0; mi < report.metrics.size(); ++mi) {
        out += csv_escape(report.metrics[mi]);
        for (std::size_t ri = 0; ri < report.regions.size(); ++ri)
            out += "," + format_value(report.cells[mi][ri].plcc) + "," +
                   format_value(report.cells[mi][ri].srcc);
        out += "," + format_value(report.mean_row[mi].plcc) + "," +
               format_value(report.mean_row[mi].srcc) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metric panel
// ---------------------------------------------------------------------------

inline std::string panel_to_json(const MetricPanel& panel) {
    JsonWriter w;
    w.begin_array();
    for (std::size_t i = 0; i < panel.rows.size(); ++i) {
        if (i) w.comma();
        w.begin_object();
        w.key("metric");
        w.string(panel.rows[i].metric);
        w.comma();
        w.key("raw");
        w.number(panel.rows[i].raw);
        w.comma();
        w.key("shift_compensated");
        w.number(panel.rows[i].compensated);
        w.end_object();
    }
    w.end_array();
    return w.take();
}

inline std::string panel_to_csv(const MetricPanel& panel) {
    std::string out = "metric,raw,shift_compensated\n";
    for (const PanelRow& row : panel.rows)
        out += csv_escape(row.metric) + "," + format_value(row.raw) + "," +
               format_value(row.compensated) + "\n";
    return out;
}

} // namespace erqa

#endif // ERQA_REPORT_HPP
