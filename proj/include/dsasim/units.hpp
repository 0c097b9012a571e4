#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace dsasim {

// Operating frequency. Stored in Hz; formulas that are stated in MHz
// convert explicitly via megahertz().
struct Frequency {
    double hertz = 0.0;

    constexpr double megahertz() const { return hertz / 1e6; }
};

constexpr Frequency freq_hz(double hz) { return Frequency{hz}; }
constexpr Frequency freq_mhz(double mhz) { return Frequency{mhz * 1e6}; }
constexpr Frequency freq_ghz(double ghz) { return Frequency{ghz * 1e9}; }

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double power) { return 10.0 * std::log10(power); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

// Sum of two powers given in dB, back in dB.
inline double power_sum_db(double a_db, double b_db) {
    return power_to_db(db_to_power(a_db) + db_to_power(b_db));
}

// Accepts "830MHz", "1.9 GHz", "2.4e9", "1500kHz", "830e6Hz" (suffix
// case-insensitive, optional whitespace before it).
inline Frequency parse_frequency(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) {
        throw std::invalid_argument("not a frequency: '" + text + "'");
    }
    std::string suffix;
    for (const char* p = end; *p != '\0'; ++p) {
        if (!std::isspace(static_cast<unsigned char>(*p))) {
            suffix += static_cast<char>(std::tolower(static_cast<unsigned char>(*p)));
        }
    }
    double scale = 1.0;
    if (suffix == "ghz") {
        scale = 1e9;
    } else if (suffix == "mhz") {
        scale = 1e6;
    } else if (suffix == "khz") {
        scale = 1e3;
    } else if (suffix == "hz" || suffix.empty()) {
        scale = 1.0;
    } else {
        throw std::invalid_argument("unknown frequency suffix '" + suffix + "' in '" + text + "'");
    }
    double hz = value * scale;
    if (!(hz > 0.0)) {
        throw std::invalid_argument("frequency must be positive: '" + text + "'");
    }
    return freq_hz(hz);
}

// Shortest representation that strtod reads back exactly enough for our
// file formats; used by every CSV writer so outputs stay byte-stable.
inline std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return std::string(buf);
}

}  // namespace dsasim
