#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsasim/phy.hpp"
#include "dsasim/propagation.hpp"
#include "dsasim/units.hpp"

namespace dsasim {

// CSV schemas: measurement input `freq_hz,rss_dbm`, curve output
// `freq_hz,rss_dbm,mode`, PSD output `freq_hz,psd_db`. UTF-8, LF, '.'
// decimal separator. Readers exist for every writer so files round-trip.

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, sep)) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == sep) {
        fields.push_back("");
    }
    return fields;
}

inline double parse_double(const std::string& text, const std::string& where) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *detail::trim(end).c_str() != '\0') {
        throw ParseError(where + ": not a number: '" + text + "'");
    }
    return value;
}

}  // namespace detail

inline MeasurementSet read_measurement_csv(std::istream& in, const std::string& name) {
    MeasurementSet set;
    set.label = name;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        if (!saw_header) {
            if (t != "freq_hz,rss_dbm") {
                throw ParseError(name + ":" + std::to_string(line_no) +
                                 ": expected header 'freq_hz,rss_dbm', got '" + t + "'");
            }
            saw_header = true;
            continue;
        }
        auto fields = detail::split(t, ',');
        if (fields.size() != 2) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": expected 2 fields, got " +
                             std::to_string(fields.size()));
        }
        const std::string where = name + ":" + std::to_string(line_no);
        double hz = detail::parse_double(fields[0], where);
        double rss = detail::parse_double(fields[1], where);
        if (!(hz > 0.0)) {
            throw ParseError(where + ": frequency must be positive");
        }
        set.points.push_back({freq_hz(hz), rss});
    }
    if (!saw_header) {
        throw ParseError(name + ":1: empty file, expected header 'freq_hz,rss_dbm'");
    }
    set.validate();
    return set;
}

inline MeasurementSet read_measurement_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    MeasurementSet set = read_measurement_csv(in, path);
    set.label = std::filesystem::path(path).stem().string();
    return set;
}

inline void write_curve_csv(std::ostream& out, const RssCurve& curve) {
    out << "freq_hz,rss_dbm,mode\n";
    for (const auto& sample : curve.samples) {
        out << format_number(sample.freq.hertz) << ',' << format_number(sample.rss_dbm) << ','
            << to_string(curve.mode) << '\n';
    }
}

inline RssCurve read_curve_csv(std::istream& in, const std::string& name) {
    RssCurve curve;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = detail::trim(line);
        if (t.empty()) {
            continue;
        }
        if (!saw_header) {
            if (t != "freq_hz,rss_dbm,mode") {
                throw ParseError(name + ":" + std::to_string(line_no) + ": bad curve header");
            }
            saw_header = true;
            continue;
        }
        auto fields = detail::split(t, ',');
        if (fields.size() != 3) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": expected 3 fields");
        }
        const std::string where = name + ":" + std::to_string(line_no);
        curve.samples.push_back(
            {freq_hz(detail::parse_double(fields[0], where)), detail::parse_double(fields[1], where)});
        curve.mode = fields[2] == "analytic_alpha" ? CurveMode::AnalyticAlpha
                                                   : CurveMode::PiecewiseLogLinear;
    }
    return curve;
}

inline void write_psd_csv(std::ostream& out, const std::vector<PsdBin>& bins) {
    out << "freq_hz,psd_db\n";
    for (const auto& bin : bins) {
        out << format_number(bin.freq_hz) << ',' << format_number(bin.psd_db) << '\n';
    }
}

inline std::vector<PsdBin> read_psd_csv(std::istream& in, const std::string& name) {
    std::vector<PsdBin> bins;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = detail::trim(line);
        if (t.empty()) {
            continue;
        }
        if (!saw_header) {
            if (t != "freq_hz,psd_db") {
                throw ParseError(name + ":" + std::to_string(line_no) + ": bad psd header");
            }
            saw_header = true;
            continue;
        }
        auto fields = detail::split(t, ',');
        if (fields.size() != 2) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": expected 2 fields");
        }
        const std::string where = name + ":" + std::to_string(line_no);
        bins.push_back({detail::parse_double(fields[0], where), detail::parse_double(fields[1], where)});
    }
    return bins;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << content;
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace dsasim
