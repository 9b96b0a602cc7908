#pragma once

// CSV records, sweep manifests and a small SVG line-chart writer.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "milburn/detail/format.hpp"
#include "milburn/errors.hpp"
#include "milburn/experiments.hpp"

namespace milburn {

inline constexpr std::string_view kCsvHeader = "t,N1,N2,E_N,S_ab,S_ba,dS,purity,nu_min_raw";

namespace detail {

struct CsvColumn {
    std::string_view name;
    double CorrelationRecord::*field;
};

inline constexpr std::array<CsvColumn, 11> kColumns{{
    {"t", &CorrelationRecord::t},
    {"N1", &CorrelationRecord::N1},
    {"N2", &CorrelationRecord::N2},
    {"E_N", &CorrelationRecord::E_N},
    {"S_ab", &CorrelationRecord::S_ab},
    {"S_ba", &CorrelationRecord::S_ba},
    {"dS", &CorrelationRecord::dS},
    {"purity", &CorrelationRecord::purity},
    {"nu_min_raw", &CorrelationRecord::nu_min_raw},
    {"S_ab_raw", &CorrelationRecord::S_ab_raw},
    {"S_ba_raw", &CorrelationRecord::S_ba_raw},
}};

inline constexpr std::size_t kSchemaColumns = 9;

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace detail

/// Writes one row per record with 17 significant digits and LF endings. `verbose` appends the
/// unclamped steering columns.
inline void write_csv(std::ostream& out, const std::vector<CorrelationRecord>& records, bool verbose = false) {
    const std::size_t ncols = verbose ? detail::kColumns.size() : detail::kSchemaColumns;
    for (std::size_t c = 0; c < ncols; ++c) out << (c ? "," : "") << detail::kColumns[c].name;
    out << '\n';
    for (const auto& r : records) {
        for (std::size_t c = 0; c < ncols; ++c) out << (c ? "," : "") << detail::exact_num(r.*detail::kColumns[c].field);
        out << '\n';
    }
    if (!out) throw IoError("failed writing CSV stream");
}

/// Parses a CSV produced by write_csv. Columns are matched by header name; absent optional columns
/// keep their defaults.
inline std::vector<CorrelationRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV");
    const auto header = detail::split_commas(line);
    std::vector<double CorrelationRecord::*> fields;
    for (const auto& name : header) {
        const auto it = std::find_if(detail::kColumns.begin(), detail::kColumns.end(),
                                     [&](const auto& c) { return c.name == name; });
        if (it == detail::kColumns.end()) throw IoError("unknown CSV column '" + name + "'");
        fields.push_back(it->field);
    }
    std::vector<CorrelationRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_commas(line);
        if (cells.size() != fields.size()) throw IoError("CSV row has " + std::to_string(cells.size()) + " cells");
        CorrelationRecord r;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            char* end = nullptr;
            const double v = std::strtod(cells[c].c_str(), &end);
            if (end == cells[c].c_str() || *end != '\0') throw IoError("bad CSV number '" + cells[c] + "'");
            r.*fields[c] = v;
        }
        out.push_back(r);
    }
    return out;
}

inline void write_csv_file(const std::filesystem::path& path, const std::vector<CorrelationRecord>& records,
                           bool verbose = false) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_csv(out, records, verbose);
}

inline std::vector<CorrelationRecord> read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_csv(in);
}

inline nlohmann::json to_json(const SystemParams& p) {
    return {{"omega1", p.omega1}, {"omega2", p.omega2}, {"J", p.coupling}, {"Gamma", p.gamma}};
}

inline nlohmann::json to_json(const NormalModes& m) {
    return {{"R", m.R},           {"g", m.g},           {"theta", m.theta}, {"Omega1", m.Omega1},
            {"Omega2", m.Omega2}, {"s1", m.s1},         {"s2", m.s2}};
}

inline nlohmann::json to_json(const TimeGrid& g) {
    return {{"t_start", g.t_start}, {"t_end", g.t_end}, {"steps", g.steps}};
}

/// One manifest entry; `file` is relative to the manifest's directory.
struct ManifestCell {
    std::string label;
    SystemParams params;
    TimeGrid grid;
    Kernel kernel = Kernel::milburn;
    std::string file;
    bool resonance = false;
    std::string error;
};

inline nlohmann::json manifest_json(const std::string& kind, const std::vector<ManifestCell>& cells) {
    nlohmann::json doc;
    doc["kind"] = kind;
    doc["schema"] = std::string(kCsvHeader);
    auto& arr = doc["cells"] = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json j;
        j["label"] = c.label;
        j["params"] = to_json(c.params);
        j["grid"] = to_json(c.grid);
        j["kernel"] = std::string(to_string(c.kernel));
        j["flags"] = {{"resonance", c.resonance}, {"kernel", std::string(to_string(c.kernel))}};
        if (c.error.empty()) {
            j["file"] = c.file;
            j["error"] = nullptr;
        } else {
            j["file"] = nullptr;
            j["error"] = c.error;
        }
        arr.push_back(std::move(j));
    }
    return doc;
}

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal line chart: a framed plot area, one polyline per series, axis extents and a legend.
inline void write_svg(std::ostream& out, const std::string& title, const std::string& y_label,
                      const std::vector<SvgSeries>& series) {
    constexpr double W = 640, H = 400, L = 70, R = 150, T = 40, B = 50;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    const auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
    static constexpr std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">t</text>\n";
    out << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2 << ")\" text-anchor=\"middle\">"
        << y_label << "</text>\n";
    out << "<text x=\"" << L << "\" y=\"" << H - B + 15 << "\" font-size=\"10\">" << detail::short_num(xmin) << "</text>\n";
    out << "<text x=\"" << W - R << "\" y=\"" << H - B + 15 << "\" font-size=\"10\" text-anchor=\"end\">"
        << detail::short_num(xmax) << "</text>\n";
    out << "<text x=\"" << L - 5 << "\" y=\"" << H - B << "\" font-size=\"10\" text-anchor=\"end\">"
        << detail::short_num(ymin) << "</text>\n";
    out << "<text x=\"" << L - 5 << "\" y=\"" << T + 10 << "\" font-size=\"10\" text-anchor=\"end\">"
        << detail::short_num(ymax) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = colors[k % colors.size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) out << (i ? " " : "") << px(s.x[i]) << ',' << py(s.y[i]);
        out << "\"/>\n";
        out << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 15 + 15 * static_cast<double>(k) << "\" fill=\"" << color
            << "\" font-size=\"11\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("failed writing SVG stream");
}

/// Extracts (t, field) columns from a run for plotting.
inline SvgSeries series_of(const std::string& name, const RunResult& run, double CorrelationRecord::*field) {
    SvgSeries s{name, {}, {}};
    for (const auto& r : run.records) {
        s.x.push_back(r.t);
        s.y.push_back(r.*field);
    }
    return s;
}

}  // namespace milburn
