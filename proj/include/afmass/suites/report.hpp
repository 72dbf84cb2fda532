#pragma once

//! Report assembly and rendering. A report is a flat list of checks plus
//! plot-ready series; renderers never consult the clock or the environment,
//! so equal configurations produce byte-identical output.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afmass/suites/config.hpp"

namespace afmass::suites {

//! One verified check: a computed value, what it was held against, and the
//! verdict. `error` is the estimator's own reported error bound (0 when the
//! method carries none); `tolerance` is the acceptance threshold the verdict
//! used.
struct ReportEntry {
    std::string suite;
    std::string instance; // "-" for instance-free checks
    std::string check;
    std::string method;
    double value = 0.0;
    double error = 0.0;
    std::optional<double> expected;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

//! One point of a plot-ready series (flux profiles, quasilocal mass curves).
struct SeriesRow {
    std::string instance;
    std::string series;
    double x = 0.0;
    double y = 0.0;
};

struct VerificationReport {
    json config = json::object(); // reproducibility echo
    std::vector<ReportEntry> entries;
    std::vector<SeriesRow> series;

    int failures() const {
        int c = 0;
        for (const auto& e : entries)
            if (!e.passed) ++c;
        return c;
    }

    //! An empty report never counts as a pass; every suite emits at least a
    //! coverage entry.
    bool all_passed() const { return !entries.empty() && failures() == 0; }
};

namespace detail {

//! Shortest digit string that round-trips a double.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec <= 16; ++prec) {
            char s[40];
            std::snprintf(s, sizeof s, "%.*g", prec, v);
            std::sscanf(s, "%lf", &back);
            if (back == v) return s;
        }
    }
    return buf;
}

//! Short human-facing form for tables and details.
inline std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace detail

inline json to_json(const VerificationReport& rep) {
    json j;
    j["format"] = "afmass-report/1";
    j["config"] = rep.config;
    json summary;
    summary["checks"] = rep.entries.size();
    summary["failures"] = rep.failures();
    summary["passed"] = rep.all_passed();
    j["summary"] = std::move(summary);
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json row;
        row["suite"] = e.suite;
        row["instance"] = e.instance;
        row["check"] = e.check;
        row["method"] = e.method;
        row["value"] = e.value;
        row["error"] = e.error;
        if (e.expected) row["expected"] = *e.expected;
        row["tolerance"] = e.tolerance;
        row["passed"] = e.passed;
        if (!e.detail.empty()) row["detail"] = e.detail;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    json series = json::array();
    for (const auto& s : rep.series) {
        json row;
        row["instance"] = s.instance;
        row["series"] = s.series;
        row["x"] = s.x;
        row["y"] = s.y;
        series.push_back(std::move(row));
    }
    j["series"] = std::move(series);
    return j;
}

inline std::string render_json(const VerificationReport& rep) { return to_json(rep).dump(2) + "\n"; }

//! Flat rows, one per check: instance, method, value, error.
inline std::string render_csv(const VerificationReport& rep) {
    std::string out = "instance,method,value,error\n";
    for (const auto& e : rep.entries)
        out += e.instance + "," + e.method + "," + detail::fmt_double(e.value) + "," +
               detail::fmt_double(e.error) + "\n";
    return out;
}

//! Plot-ready series rows (radius against partial mass, quasilocal curves).
inline std::string render_series_csv(const VerificationReport& rep) {
    std::string out = "instance,series,x,y\n";
    for (const auto& s : rep.series)
        out += s.instance + "," + s.series + "," + detail::fmt_double(s.x) + "," +
               detail::fmt_double(s.y) + "\n";
    return out;
}

//! Aligned text table with one row per check and a summary footer.
inline std::string render_table(const VerificationReport& rep) {
    const std::vector<std::string> head{"suite", "instance",  "check",  "method",
                                        "value", "expected", "verdict"};
    std::vector<std::vector<std::string>> rows;
    rows.push_back(head);
    for (const auto& e : rep.entries)
        rows.push_back({e.suite, e.instance, e.check, e.method, detail::fmt_short(e.value),
                        e.expected ? detail::fmt_short(*e.expected) : "-",
                        e.passed ? "pass" : "FAIL"});
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::string out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            out += rows[r][c];
            if (c + 1 < rows[r].size())
                out += std::string(width[c] - rows[r][c].size() + 2, ' ');
        }
        out += '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < width.size(); ++c)
                total += width[c] + (c + 1 < width.size() ? 2 : 0);
            out += std::string(total, '-') + '\n';
        }
    }
    out += '\n' + std::to_string(rep.entries.size()) + " checks, " +
           std::to_string(rep.failures()) + " failures";
    if (!rep.series.empty())
        out += "; " + std::to_string(rep.series.size()) +
               " series rows (use --format csv or json to capture them)";
    out += rep.all_passed() ? "; all passed\n" : "\n";
    return out;
}

} // namespace afmass::suites
