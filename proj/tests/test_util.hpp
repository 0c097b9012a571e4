#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "dsasim/propagation.hpp"

namespace testutil {

// Four measured RSS-vs-frequency sessions plus the published alpha averages.
struct Table1Row {
    const char* label;
    std::array<double, 4> rss_dbm;
    double published_alpha_db;
};

inline constexpr std::array<double, 4> kTable1FreqHz = {830e6, 1.2e9, 1.6e9, 1.9e9};

inline constexpr std::array<Table1Row, 4> kTable1 = {{
    {"Set1", {-43.09, -53.53, -60.85, -63.15}, 126.59},
    {"Set2", {-43.09, -55.92, -61.84, -62.50}, 126.20},
    {"Set3", {-41.44, -56.57, -62.14, -62.82}, 126.03},
    {"Set4", {-42.70, -56.57, -61.84, -62.10}, 126.23},
}};

// Mean-fit values recomputed with an independent calculator and frozen here.
inline constexpr std::array<double, 4> kTable1AlphaHz = {127.250664610, 126.568164610,
                                                         126.663164610, 126.603164610};
inline constexpr std::array<double, 4> kSet1ResidualsDb = {8.040897, 0.802960, -4.018265,
                                                           -4.825593};

inline dsasim::MeasurementSet table1_set(std::size_t row) {
    dsasim::MeasurementSet set;
    set.label = kTable1[row].label;
    for (std::size_t i = 0; i < kTable1FreqHz.size(); ++i) {
        set.points.push_back({dsasim::freq_hz(kTable1FreqHz[i]), kTable1[row].rss_dbm[i]});
    }
    return set;
}

inline std::string data_path(const std::string& file) {
    return std::string(DSASIM_DATA_DIR) + "/" + file;
}

inline std::string scenario_path(const std::string& file) {
    return std::string(DSASIM_SCENARIO_DIR) + "/" + file;
}

// fresh per-process scratch directory
inline std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("dsasim_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil
