#pragma once
// CSV emission and ingestion for every artifact the tool produces. All
// writers use a fixed column order and 9-significant-digit rendering so
// identical inputs produce byte-identical files.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbmc/analytic.hpp"
#include "dbmc/detection.hpp"
#include "dbmc/particle_sim.hpp"

namespace dbmc {

struct IoError : std::runtime_error {
    std::string path;
    IoError(const std::string& p, const std::string& message)
        : std::runtime_error(p + ": " + message), path(p) {}
};

// The one number format used everywhere: shortest form at 9 significant
// digits, enough to round-trip the float32 counts and to keep the double
// statistics stable across rebuilds.
inline std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // no newline translation
    if (!out) throw IoError(path, "cannot open for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace detail

inline void write_curve_csv(const std::string& path, const ImpulseCurve& c) {
    auto out = detail::open_out(path);
    out << "time_s,expected_count\n";
    for (size_t i = 0; i < c.times.size(); ++i)
        out << format_g9(c.times[i]) << ','
            << format_g9(c.expected_counts[i]) << '\n';
    detail::finish(out, path);
}

inline void write_series_csv(const std::string& path,
                             const ObservationSeries& s) {
    auto out = detail::open_out(path);
    out << "time_s,count\n";
    for (size_t i = 0; i < s.sample_times.size(); ++i)
        out << format_g9(s.sample_times[i]) << ',' << s.counts[i] << '\n';
    detail::finish(out, path);
}

inline void write_aggregated_csv(const std::string& path,
                                 const AggregatedSeries& a) {
    auto out = detail::open_out(path);
    out << "time_s,mean,std,ci99_low,ci99_high\n";
    for (size_t i = 0; i < a.sample_times.size(); ++i)
        out << format_g9(a.sample_times[i]) << ',' << format_g9(a.mean[i])
            << ',' << format_g9(a.stddev[i]) << ','
            << format_g9(a.ci99_low[i]) << ',' << format_g9(a.ci99_high[i])
            << '\n';
    detail::finish(out, path);
}

inline void write_pe_csv(const std::string& path,
                         const std::vector<DetectionResult>& rows,
                         const std::string& scenario) {
    auto out = detail::open_out(path);
    out << "zeta,method,p_detect,p_error,scenario\n";
    for (const DetectionResult& r : rows)
        out << r.threshold_zeta << ',' << to_string(r.method) << ','
            << format_g9(r.p_detect) << ',' << format_g9(r.p_error) << ','
            << scenario << '\n';
    detail::finish(out, path);
}

inline void write_itr_csv(const std::string& path, const ItrValue& itr,
                          const std::string& scenario) {
    auto out = detail::open_out(path);
    out << "t_s,t_end,itr,scenario\n";
    out << format_g9(itr.t_s) << ',' << format_g9(itr.t_end) << ','
        << format_g9(itr.value) << ',' << scenario << '\n';
    detail::finish(out, path);
}

// A loaded value-over-time table: either an analytic curve
// (time_s,expected_count) or an aggregated simulation (time_s,mean,...).
struct SeriesTable {
    std::vector<double> times;
    std::vector<double> values;
    bool is_curve = false;  // true when the value column is expected_count
};

// Reads either emitted schema back, keyed on the header line.
inline SeriesTable read_series_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open for reading");
    std::string header;
    if (!std::getline(in, header)) throw IoError(path, "empty file");
    if (!header.empty() && header.back() == '\r') header.pop_back();

    SeriesTable t;
    if (header == "time_s,expected_count") t.is_curve = true;
    else if (header.rfind("time_s,mean", 0) == 0) t.is_curve = false;
    else if (header.rfind("time_s,count", 0) == 0) t.is_curve = false;
    else
        throw IoError(path, "unrecognized header '" + header +
                                "'; expected a curve, series or aggregated "
                                "CSV");

    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError(path, "line " + std::to_string(line_no) +
                                        ": non-numeric cell '" + cell + "'");
            }
        }
        if (vals.size() < 2)
            throw IoError(path, "line " + std::to_string(line_no) +
                                    ": expected at least 2 columns");
        t.times.push_back(vals[0]);
        t.values.push_back(vals[1]);
    }
    if (t.times.empty()) throw IoError(path, "no data rows");
    return t;
}

}  // namespace dbmc
