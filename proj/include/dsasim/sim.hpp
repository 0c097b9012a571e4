#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsasim/channel.hpp"
#include "dsasim/dsa.hpp"
#include "dsasim/phy.hpp"
#include "dsasim/scenario.hpp"

namespace dsasim {

// Discrete-time engine. One tick = one metrics/decision epoch of
// symbols_per_tick OFDM symbols. Per tick: scheduled events, beta step, bit
// generation, modulation, channel, demodulation, metrics, then (when
// enabled) one controller decision. Runs are bit-reproducible for a fixed
// scenario.

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MetricsRow {
    int tick = 0;
    double time_s = 0.0;
    double band_hz = 0.0;
    double tx_gain_db = 0.0;
    double rss_db = 0.0;
    double ber = 0.0;
    double bler = 0.0;
    double beta_db = 0.0;
    double obstruction_db = 0.0;
    std::string action = "hold";
    std::string status = "active";
};

struct MetricsLog {
    std::vector<MetricsRow> rows;
};

struct EventRecord {
    int tick = 0;
    std::string action;
    std::string reason;
};

struct SimResult {
    MetricsLog log;
    std::vector<EventRecord> events;
    ControllerState final_state;
    SpectrumPool final_pool;
};

class Simulation {
  public:
    explicit Simulation(Scenario scenario) : scenario_(std::move(scenario)) {
        scenario_.validate();
        chan_ = scenario_.initial_channel();
        plan_ = scenario_.plan;
        policy_ = scenario_.policy;
        pool_ = scenario_.make_pool();
        cs_.band_index = scenario_.start_band_index();
        cs_.tx_gain_db = scenario_.tx_gain_db;
        cs_.ticks_since_change = policy_.dwell_ticks;  // free to act at tick 0
        if (!pool_.has_free(cs_.band_index)) {
            throw SimError(scenario_.name + ": start band has no free capacity");
        }
        pool_ = reserve(pool_, cs_.band_index);
        env_.sigma_db = scenario_.beta_sigma_db;
        env_.clip_db = scenario_.beta_clip_db;
        env_.rng = derive_rng(scenario_.seed, 0xBE7A);
        noise_rng_ = derive_rng(scenario_.seed, 0xC4A);
        next_event_ = 0;
        // events apply in tick order regardless of file order
        std::stable_sort(scenario_.schedule.begin(), scenario_.schedule.end(),
                         [](const TimedEvent& a, const TimedEvent& b) { return a.tick < b.tick; });
    }

    bool done() const { return tick_ >= scenario_.duration_ticks; }
    const IqFrame& last_rx_frame() const { return rx_frame_; }
    // carrier the last transmitted frame actually used (pre-action band)
    double last_carrier_hz() const { return last_carrier_hz_; }
    const ControllerState& controller() const { return cs_; }
    const SpectrumPool& pool() const { return pool_; }
    const std::vector<EventRecord>& events() const { return events_; }

    MetricsRow step() {
        if (done()) {
            throw SimError("simulation already finished");
        }
        const int tick = tick_;
        const double now_s = tick * scenario_.tick_seconds();
        std::vector<std::string> forced = apply_scheduled_events(tick, now_s);

        env_ = step_environment(env_, scenario_.tick_seconds());
        chan_.beta_db = env_.current_db;
        chan_.freq = plan_.bands[static_cast<std::size_t>(cs_.band_index)];
        chan_.tx_gain_db = cs_.tx_gain_db;
        last_carrier_hz_ = chan_.freq.hertz;

        const std::size_t tick_bits =
            static_cast<std::size_t>(scenario_.symbols_per_tick) * scenario_.phy.bits_per_ofdm_symbol();
        BitBlock tx_bits = generate_bits(tick_bits, tick_bit_seed(tick));
        IqFrame tx_frame = ofdm_modulate(qam16_modulate(tx_bits), scenario_.phy);
        tx_frame.sample_rate_hz = scenario_.sample_rate_hz;
        rx_frame_ = apply_channel(tx_frame, chan_, now_s, noise_rng_);
        BitBlock rx_bits = qam16_demodulate(ofdm_demodulate(rx_frame_, scenario_.phy));

        LinkMetrics metrics;
        metrics.rss_db = measure_rss(rx_frame_, scenario_.phy);
        metrics.ber = compute_ber(tx_bits, rx_bits);
        metrics.bler = compute_bler(tx_bits, rx_bits, static_cast<std::size_t>(scenario_.block_bits));
        metrics.snr_db = metrics.rss_db - chan_.noise_floor_db;

        std::string controller_action = "hold";
        if (scenario_.controller_enabled && cs_.status == LinkStatus::Active) {
            ++cs_.ticks_since_change;  // counter sees ticks elapsed since the last change
            Action action = evaluate(metrics, policy_, plan_, pool_, cs_, chan_.noise_floor_db);
            if (action.kind != ActionKind::Hold) {
                ApplyResult result = apply_action(cs_, action, plan_, pool_, policy_);
                if (!result.applied) {
                    throw SimError(scenario_.name + ": tick " + std::to_string(tick) +
                                   ": action " + to_string(action.kind) + " rejected by pool");
                }
                cs_ = result.state;
                pool_ = result.pool;
                controller_action = to_string(action.kind);
                events_.push_back({tick, controller_action, action.reason});
            }
        }

        MetricsRow row;
        row.tick = tick;
        row.time_s = now_s;
        row.band_hz = plan_.bands[static_cast<std::size_t>(cs_.band_index)].hertz;
        row.tx_gain_db = cs_.tx_gain_db;
        row.rss_db = metrics.rss_db;
        row.ber = metrics.ber;
        row.bler = metrics.bler;
        row.beta_db = chan_.beta_db;
        row.obstruction_db = active_obstruction_loss(chan_, now_s);
        row.status = cs_.status == LinkStatus::Active ? "active" : "failed";
        std::string action_col;
        for (const auto& f : forced) {
            action_col += action_col.empty() ? f : "+" + f;
        }
        if (controller_action != "hold" || action_col.empty()) {
            action_col += action_col.empty() ? controller_action : "+" + controller_action;
        }
        row.action = action_col;
        ++tick_;
        return row;
    }

  private:
    std::uint64_t tick_bit_seed(int tick) const {
        Rng seeder = derive_rng(scenario_.seed, 0xB175 + static_cast<std::uint64_t>(tick));
        return seeder.next_u64();
    }

    std::vector<std::string> apply_scheduled_events(int tick, double now_s) {
        std::vector<std::string> forced;
        while (next_event_ < scenario_.schedule.size() &&
               scenario_.schedule[next_event_].tick == tick) {
            const TimedEvent& event = scenario_.schedule[next_event_];
            ++next_event_;
            switch (event.kind) {
                case EventKind::ObstructionStart:
                    chan_.obstructions.push_back({now_s, std::numeric_limits<double>::infinity(),
                                                  event.value_db});
                    break;
                case EventKind::ObstructionEnd: {
                    bool closed = false;
                    for (auto it = chan_.obstructions.rbegin(); it != chan_.obstructions.rend(); ++it) {
                        if (std::isinf(it->end_s)) {
                            it->end_s = now_s;
                            closed = true;
                            break;
                        }
                    }
                    if (!closed) {
                        throw SimError(scenario_.name + ": tick " + std::to_string(tick) +
                                       ": obstruction_end without an open obstruction");
                    }
                    break;
                }
                case EventKind::SetGain:
                    cs_.tx_gain_db = event.value_db;
                    cs_.ticks_since_change = 0;
                    forced.push_back("set_gain");
                    break;
                case EventKind::SetFrequency: {
                    int target = plan_.index_of(event.freq);
                    if (target != cs_.band_index) {
                        if (!pool_.has_free(target)) {
                            throw SimError(scenario_.name + ": tick " + std::to_string(tick) +
                                           ": forced retune to a full band");
                        }
                        pool_ = reserve(release(pool_, cs_.band_index), target);
                        cs_.band_index = target;
                        cs_.ticks_since_change = 0;
                    }
                    forced.push_back("set_frequency");
                    break;
                }
                case EventKind::SetPoolCapacity: {
                    int index = plan_.index_of(event.freq);
                    BandPool& band = pool_.bands[static_cast<std::size_t>(index)];
                    if (event.units < band.occupied) {
                        throw SimError(scenario_.name + ": tick " + std::to_string(tick) +
                                       ": cannot shrink pool below current occupancy");
                    }
                    band.capacity = event.units;
                    break;
                }
            }
        }
        return forced;
    }

    Scenario scenario_;
    ChannelState chan_;
    BandPlan plan_;
    DsaPolicy policy_;
    SpectrumPool pool_;
    ControllerState cs_;
    EnvironmentProcess env_;
    Rng noise_rng_{0};
    IqFrame rx_frame_;
    double last_carrier_hz_ = 0.0;
    std::vector<EventRecord> events_;
    std::size_t next_event_ = 0;
    int tick_ = 0;
};

inline SimResult run(const Scenario& scenario) {
    Simulation sim(scenario);
    SimResult result;
    result.log.rows.reserve(static_cast<std::size_t>(scenario.duration_ticks));
    while (!sim.done()) {
        result.log.rows.push_back(sim.step());
    }
    result.events = sim.events();
    result.final_state = sim.controller();
    result.final_pool = sim.pool();
    return result;
}

// Received frame at one tick, for PSD inspection.
inline IqFrame rx_frame_at_tick(const Scenario& scenario, int tick) {
    if (tick < 0 || tick >= scenario.duration_ticks) {
        throw std::invalid_argument("tick " + std::to_string(tick) + " outside run duration [0, " +
                                    std::to_string(scenario.duration_ticks) + ")");
    }
    Simulation sim(scenario);
    for (int t = 0; t < tick; ++t) {
        sim.step();
    }
    sim.step();
    return sim.last_rx_frame();
}

inline void write_metrics_csv(std::ostream& out, const MetricsLog& log) {
    out << "tick,time_s,band_hz,tx_gain_db,rss_db,ber,bler,beta_db,obstruction_db,action,status\n";
    for (const auto& row : log.rows) {
        out << row.tick << ',' << format_number(row.time_s) << ',' << format_number(row.band_hz)
            << ',' << format_number(row.tx_gain_db) << ',' << format_number(row.rss_db) << ','
            << format_number(row.ber) << ',' << format_number(row.bler) << ','
            << format_number(row.beta_db) << ',' << format_number(row.obstruction_db) << ','
            << row.action << ',' << row.status << '\n';
    }
}

inline MetricsLog read_metrics_csv(std::istream& in, const std::string& name) {
    MetricsLog log;
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
            if (t.rfind("tick,", 0) != 0) {
                throw ParseError(name + ":" + std::to_string(line_no) + ": bad metrics header");
            }
            saw_header = true;
            continue;
        }
        auto fields = detail::split(t, ',');
        if (fields.size() != 11) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": expected 11 fields");
        }
        const std::string where = name + ":" + std::to_string(line_no);
        MetricsRow row;
        row.tick = static_cast<int>(detail::parse_double(fields[0], where));
        row.time_s = detail::parse_double(fields[1], where);
        row.band_hz = detail::parse_double(fields[2], where);
        row.tx_gain_db = detail::parse_double(fields[3], where);
        row.rss_db = detail::parse_double(fields[4], where);
        row.ber = detail::parse_double(fields[5], where);
        row.bler = detail::parse_double(fields[6], where);
        row.beta_db = detail::parse_double(fields[7], where);
        row.obstruction_db = detail::parse_double(fields[8], where);
        row.action = fields[9];
        row.status = fields[10];
        log.rows.push_back(row);
    }
    return log;
}

struct PhaseStat {
    int start_tick = 0;
    int end_tick = 0;  // inclusive
    double band_hz = 0.0;
    double tx_gain_db = 0.0;
    double mean_rss_db = 0.0;
};

struct Summary {
    std::map<double, int> dwell_ticks_by_band;
    std::map<std::string, int> action_counts;
    std::vector<PhaseStat> phases;
    bool failed = false;
};

// Per-band dwell, action histogram and per-phase mean RSS, where a phase is
// a maximal run of constant (band, gain).
inline Summary summarize(const MetricsLog& log) {
    if (log.rows.empty()) {
        throw std::invalid_argument("cannot summarize an empty log");
    }
    Summary summary;
    PhaseStat phase{log.rows.front().tick, log.rows.front().tick, log.rows.front().band_hz,
                    log.rows.front().tx_gain_db, 0.0};
    double rss_sum = 0.0;
    int rss_count = 0;
    auto close_phase = [&]() {
        phase.mean_rss_db = rss_sum / rss_count;
        summary.phases.push_back(phase);
    };
    for (const auto& row : log.rows) {
        summary.dwell_ticks_by_band[row.band_hz] += 1;
        std::istringstream actions(row.action);
        std::string token;
        while (std::getline(actions, token, '+')) {
            summary.action_counts[token] += 1;
        }
        if (row.status == "failed") {
            summary.failed = true;
        }
        if (row.band_hz != phase.band_hz || row.tx_gain_db != phase.tx_gain_db) {
            close_phase();
            phase = {row.tick, row.tick, row.band_hz, row.tx_gain_db, 0.0};
            rss_sum = 0.0;
            rss_count = 0;
        }
        phase.end_tick = row.tick;
        rss_sum += row.rss_db;
        ++rss_count;
    }
    close_phase();
    return summary;
}

inline std::string format_summary(const Summary& summary) {
    std::ostringstream out;
    out << "phases:\n";
    for (const auto& phase : summary.phases) {
        out << "  ticks " << phase.start_tick << ".." << phase.end_tick << "  band "
            << format_number(phase.band_hz / 1e6) << " MHz  gain " << format_number(phase.tx_gain_db)
            << " dB  mean rss " << format_number(phase.mean_rss_db) << " dB\n";
    }
    out << "dwell ticks per band:\n";
    for (const auto& [band, ticks] : summary.dwell_ticks_by_band) {
        out << "  " << format_number(band / 1e6) << " MHz: " << ticks << "\n";
    }
    out << "action counts:\n";
    for (const auto& [action, count] : summary.action_counts) {
        out << "  " << action << ": " << count << "\n";
    }
    out << "link failed: " << (summary.failed ? "yes" : "no") << "\n";
    return out.str();
}

}  // namespace dsasim
