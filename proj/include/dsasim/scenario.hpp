#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsasim/channel.hpp"
#include "dsasim/dsa.hpp"
#include "dsasim/io.hpp"
#include "dsasim/phy.hpp"
#include "dsasim/units.hpp"

namespace dsasim {

// Scenario files: line-oriented `[section]` / `key = value` format with `#`
// comments. Sections: [run], [channel], [bands], [pool], [policy], [phy] and
// [schedule]; schedule lines are `tick kind args`, one event per line.
// Frequencies accept MHz/GHz suffixes anywhere a frequency is expected.

enum class EventKind { ObstructionStart, ObstructionEnd, SetGain, SetFrequency, SetPoolCapacity };

struct TimedEvent {
    int tick = 0;
    EventKind kind = EventKind::ObstructionStart;
    double value_db = 0.0;   // ObstructionStart / SetGain
    Frequency freq;          // SetFrequency / SetPoolCapacity
    int units = 0;           // SetPoolCapacity
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Scenario {
    std::string name = "scenario";

    // [run]
    int duration_ticks = 0;
    int symbols_per_tick = 100;
    std::uint64_t seed = 1;
    bool controller_enabled = true;

    // [channel]
    LinkBudgetMode mode = LinkBudgetMode::AnalyticAlpha;
    double alpha_db = 0.0;
    FreqUnit alpha_unit = FreqUnit::Hz;
    bool alpha_set = false;
    PathLossParams params;
    double tx_power_dbm = 0.0;
    MeasurementSet measurements;
    double noise_floor_db = -90.0;
    double beta_sigma_db = 0.2;
    double beta_clip_db = 2.0;
    double tx_gain_db = 0.0;
    double rx_gain_db = 10.0;

    // [bands] / [pool]
    BandPlan plan = default_band_plan();
    int start_band = -1;  // default: highest band
    std::vector<int> pool_capacity;
    std::vector<int> pool_occupied;

    // [policy] / [phy]
    DsaPolicy policy;
    OfdmConfig phy;
    int block_bits = 800;
    double sample_rate_hz = 10e6;

    std::vector<TimedEvent> schedule;

    int start_band_index() const {
        return start_band >= 0 ? start_band : static_cast<int>(plan.bands.size()) - 1;
    }

    double tick_seconds() const {
        return static_cast<double>(symbols_per_tick) * phy.symbol_len() / sample_rate_hz;
    }

    SpectrumPool make_pool() const {
        SpectrumPool pool;
        for (std::size_t i = 0; i < plan.bands.size(); ++i) {
            int cap = i < pool_capacity.size() ? pool_capacity[i] : 1;
            int occ = i < pool_occupied.size() ? pool_occupied[i] : 0;
            pool.bands.push_back({cap, occ});
        }
        return pool;
    }

    void validate() const {
        if (duration_ticks < 1) {
            throw ScenarioError(name + ": duration_ticks must be positive");
        }
        if (symbols_per_tick < 1) {
            throw ScenarioError(name + ": symbols_per_tick must be positive");
        }
        plan.validate();
        phy.validate();
        policy.validate();
        if (start_band >= static_cast<int>(plan.bands.size())) {
            throw ScenarioError(name + ": start band index out of range");
        }
        if (!pool_capacity.empty() && pool_capacity.size() != plan.bands.size()) {
            throw ScenarioError(name + ": pool capacity list must match the band plan");
        }
        if (!pool_occupied.empty() && pool_occupied.size() != plan.bands.size()) {
            throw ScenarioError(name + ": pool occupied list must match the band plan");
        }
        make_pool().validate();
        if (tx_gain_db < 0.0 || tx_gain_db > 40.0) {
            throw ScenarioError(name + ": tx_gain_db must be within [0, 40]");
        }
        if (block_bits < 1 || block_bits % 4 != 0) {
            throw ScenarioError(name + ": block_bits must be a positive multiple of 4");
        }
        const int tick_bits = symbols_per_tick * phy.bits_per_ofdm_symbol();
        if (tick_bits % block_bits != 0) {
            throw ScenarioError(name + ": per-tick bits (" + std::to_string(tick_bits) +
                                ") must divide into block_bits");
        }
        switch (mode) {
            case LinkBudgetMode::AnalyticAlpha:
                if (!alpha_set) {
                    throw ScenarioError(name + ": analytic_alpha mode needs alpha_db");
                }
                break;
            case LinkBudgetMode::ItuModel:
                break;
            case LinkBudgetMode::Empirical:
                measurements.validate();
                break;
        }
        for (const auto& event : schedule) {
            if (event.tick < 0 || event.tick >= duration_ticks) {
                throw ScenarioError(name + ": schedule tick " + std::to_string(event.tick) +
                                    " outside run duration");
            }
            if (event.kind == EventKind::SetFrequency || event.kind == EventKind::SetPoolCapacity) {
                if (plan.index_of(event.freq) < 0) {
                    throw ScenarioError(name + ": scheduled frequency " +
                                        format_number(event.freq.hertz) + " Hz not in band plan");
                }
            }
            if (event.kind == EventKind::SetGain &&
                (event.value_db < 0.0 || event.value_db > 40.0)) {
                throw ScenarioError(name + ": scheduled gain outside [0, 40] dB");
            }
            if (event.kind == EventKind::ObstructionStart && event.value_db < 0.0) {
                throw ScenarioError(name + ": obstruction loss must be non-negative");
            }
        }
    }

    ChannelState initial_channel() const {
        ChannelState chan;
        chan.freq = plan.bands[static_cast<std::size_t>(start_band_index())];
        chan.tx_gain_db = tx_gain_db;
        chan.rx_gain_db = rx_gain_db;
        chan.mode = mode;
        chan.alpha = AlphaEstimate{alpha_db, {}, alpha_unit};
        chan.params = params;
        chan.tx_power_dbm = tx_power_dbm;
        chan.empirical = measurements;
        chan.noise_floor_db = noise_floor_db;
        return chan;
    }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) {
        out.push_back(token);
    }
    return out;
}

struct ScenarioParser {
    Scenario scenario;
    std::string file;
    std::filesystem::path base_dir;
    std::size_t line_no = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw ScenarioError(file + ":" + std::to_string(line_no) + ": " + message);
    }

    double number(const std::string& value) const {
        const char* begin = value.c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin || !trim(end).empty()) {
            fail("not a number: '" + value + "'");
        }
        return v;
    }

    int integer(const std::string& value) const {
        double v = number(value);
        if (v != static_cast<double>(static_cast<long long>(v))) {
            fail("expected an integer, got '" + value + "'");
        }
        return static_cast<int>(v);
    }

    Frequency frequency(const std::string& value) const {
        try {
            return parse_frequency(value);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    std::vector<int> int_list(const std::string& value) const {
        std::vector<int> out;
        for (const auto& token : split_ws(value)) {
            out.push_back(integer(token));
        }
        return out;
    }

    void run_key(const std::string& key, const std::string& value) {
        if (key == "duration_ticks") {
            scenario.duration_ticks = integer(value);
        } else if (key == "symbols_per_tick") {
            scenario.symbols_per_tick = integer(value);
        } else if (key == "seed") {
            scenario.seed = static_cast<std::uint64_t>(number(value));
        } else if (key == "controller") {
            if (value == "on") {
                scenario.controller_enabled = true;
            } else if (value == "off") {
                scenario.controller_enabled = false;
            } else {
                fail("controller must be 'on' or 'off'");
            }
        } else {
            fail("unknown key '" + key + "' in [run]");
        }
    }

    void channel_key(const std::string& key, const std::string& value) {
        if (key == "mode") {
            if (value == "analytic_alpha") {
                scenario.mode = LinkBudgetMode::AnalyticAlpha;
            } else if (value == "itu") {
                scenario.mode = LinkBudgetMode::ItuModel;
            } else if (value == "empirical") {
                scenario.mode = LinkBudgetMode::Empirical;
            } else {
                fail("unknown channel mode '" + value + "'");
            }
        } else if (key == "alpha_db") {
            scenario.alpha_db = number(value);
            scenario.alpha_set = true;
        } else if (key == "alpha_unit") {
            if (value == "hz") {
                scenario.alpha_unit = FreqUnit::Hz;
            } else if (value == "mhz") {
                scenario.alpha_unit = FreqUnit::MHz;
            } else {
                fail("alpha_unit must be 'hz' or 'mhz'");
            }
        } else if (key == "n_coeff") {
            scenario.params.n_coeff = number(value);
        } else if (key == "distance_m") {
            scenario.params.distance_m = number(value);
        } else if (key == "floors") {
            scenario.params.floors = integer(value);
        } else if (key == "floor_penetration_db") {
            scenario.params.floor_penetration_db = number(value);
        } else if (key == "tx_power_dbm") {
            scenario.tx_power_dbm = number(value);
        } else if (key == "measurements") {
            scenario.measurements = read_measurement_csv((base_dir / value).string());
        } else if (key == "point") {
            auto tokens = split_ws(value);
            if (tokens.size() != 2) {
                fail("point needs '<freq> <rss_dbm>'");
            }
            scenario.measurements.points.push_back({frequency(tokens[0]), number(tokens[1])});
            if (scenario.measurements.label.empty()) {
                scenario.measurements.label = scenario.name;
            }
        } else if (key == "noise_floor_db") {
            scenario.noise_floor_db = number(value);
        } else if (key == "beta_sigma_db") {
            scenario.beta_sigma_db = number(value);
        } else if (key == "beta_clip_db") {
            scenario.beta_clip_db = number(value);
        } else if (key == "tx_gain_db") {
            scenario.tx_gain_db = number(value);
        } else if (key == "rx_gain_db") {
            scenario.rx_gain_db = number(value);
        } else {
            fail("unknown key '" + key + "' in [channel]");
        }
    }

    void bands_key(const std::string& key, const std::string& value) {
        if (key == "plan") {
            BandPlan plan;
            for (const auto& token : split_ws(value)) {
                plan.bands.push_back(frequency(token));
            }
            scenario.plan = plan;
        } else if (key == "start") {
            Frequency f = frequency(value);
            int index = scenario.plan.index_of(f);
            if (index < 0) {
                fail("start frequency not in band plan");
            }
            scenario.start_band = index;
        } else {
            fail("unknown key '" + key + "' in [bands]");
        }
    }

    void pool_key(const std::string& key, const std::string& value) {
        if (key == "capacity") {
            scenario.pool_capacity = int_list(value);
        } else if (key == "occupied") {
            scenario.pool_occupied = int_list(value);
        } else {
            fail("unknown key '" + key + "' in [pool]");
        }
    }

    void policy_key(const std::string& key, const std::string& value) {
        if (key == "rss_margin_db") {
            scenario.policy.rss_margin_db = number(value);
        } else if (key == "bler_max") {
            scenario.policy.bler_max = number(value);
        } else if (key == "hysteresis_db") {
            scenario.policy.hysteresis_db = number(value);
        } else if (key == "dwell_ticks") {
            scenario.policy.dwell_ticks = integer(value);
        } else if (key == "gain_step_db") {
            scenario.policy.gain_step_db = number(value);
        } else if (key == "gain_max_db") {
            scenario.policy.gain_max_db = number(value);
        } else if (key == "prefer") {
            if (value == "downshift_first") {
                scenario.policy.prefer = Preference::DownshiftFirst;
            } else if (value == "gain_first") {
                scenario.policy.prefer = Preference::GainFirst;
            } else {
                fail("prefer must be 'downshift_first' or 'gain_first'");
            }
        } else {
            fail("unknown key '" + key + "' in [policy]");
        }
    }

    void phy_key(const std::string& key, const std::string& value) {
        if (key == "fft_size") {
            scenario.phy.fft_size = integer(value);
        } else if (key == "occupied_tones") {
            scenario.phy.occupied_tones = integer(value);
        } else if (key == "cp_len") {
            scenario.phy.cp_len = integer(value);
        } else if (key == "block_bits") {
            scenario.block_bits = integer(value);
        } else if (key == "sample_rate_hz") {
            scenario.sample_rate_hz = number(value);
        } else {
            fail("unknown key '" + key + "' in [phy]");
        }
    }

    void schedule_line(const std::string& line) {
        auto tokens = split_ws(line);
        if (tokens.size() < 2) {
            fail("schedule line needs '<tick> <kind> [args]'");
        }
        TimedEvent event;
        event.tick = integer(tokens[0]);
        const std::string& kind = tokens[1];
        if (kind == "obstruction_start") {
            if (tokens.size() != 3) {
                fail("obstruction_start needs a loss in dB");
            }
            event.kind = EventKind::ObstructionStart;
            event.value_db = number(tokens[2]);
        } else if (kind == "obstruction_end") {
            if (tokens.size() != 2) {
                fail("obstruction_end takes no arguments");
            }
            event.kind = EventKind::ObstructionEnd;
        } else if (kind == "set_gain") {
            if (tokens.size() != 3) {
                fail("set_gain needs a gain in dB");
            }
            event.kind = EventKind::SetGain;
            event.value_db = number(tokens[2]);
        } else if (kind == "set_frequency") {
            if (tokens.size() != 3) {
                fail("set_frequency needs a frequency");
            }
            event.kind = EventKind::SetFrequency;
            event.freq = frequency(tokens[2]);
        } else if (kind == "set_pool_capacity") {
            if (tokens.size() != 4) {
                fail("set_pool_capacity needs '<band freq> <units>'");
            }
            event.kind = EventKind::SetPoolCapacity;
            event.freq = frequency(tokens[2]);
            event.units = integer(tokens[3]);
        } else {
            fail("unknown schedule event '" + kind + "'");
        }
        scenario.schedule.push_back(event);
    }
};

}  // namespace detail

inline Scenario parse_scenario(std::istream& in, const std::string& name,
                               const std::filesystem::path& base_dir = ".") {
    detail::ScenarioParser parser;
    parser.scenario.name = name;
    parser.file = name;
    parser.base_dir = base_dir;
    std::string line;
    std::string section;
    const std::set<std::string> known_sections = {"run",  "channel", "bands",
                                                  "pool", "policy",  "phy",   "schedule"};
    while (std::getline(in, line)) {
        ++parser.line_no;
        std::string text = detail::trim(line);
        if (text.empty() || text[0] == '#') {
            continue;
        }
        if (text.front() == '[') {
            if (text.back() != ']') {
                parser.fail("malformed section header '" + text + "'");
            }
            section = text.substr(1, text.size() - 2);
            if (known_sections.count(section) == 0) {
                parser.fail("unknown section [" + section + "]");
            }
            continue;
        }
        if (section.empty()) {
            parser.fail("content before any [section] header");
        }
        if (section == "schedule") {
            parser.schedule_line(text);
            continue;
        }
        std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            parser.fail("expected 'key = value'");
        }
        std::string key = detail::trim(text.substr(0, eq));
        std::string value = detail::trim(text.substr(eq + 1));
        if (key.empty() || value.empty()) {
            parser.fail("expected 'key = value'");
        }
        if (section == "run") {
            parser.run_key(key, value);
        } else if (section == "channel") {
            parser.channel_key(key, value);
        } else if (section == "bands") {
            parser.bands_key(key, value);
        } else if (section == "pool") {
            parser.pool_key(key, value);
        } else if (section == "policy") {
            parser.policy_key(key, value);
        } else if (section == "phy") {
            parser.phy_key(key, value);
        }
    }
    parser.scenario.validate();
    return parser.scenario;
}

inline Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file " + path);
    }
    return parse_scenario(in, path, std::filesystem::path(path).parent_path());
}

}  // namespace dsasim
