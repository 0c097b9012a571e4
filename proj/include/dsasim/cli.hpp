#pragma once

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dsasim/channel.hpp"
#include "dsasim/io.hpp"
#include "dsasim/propagation.hpp"
#include "dsasim/scenario.hpp"
#include "dsasim/sim.hpp"

namespace dsasim {

// Command implementations behind the CLI frontend. Exit codes: 0 success,
// 1 validation error, 2 I/O error, 3 simulation aborted at run time. Every
// command computes its full result before writing anything, so a validation
// failure never leaves partial output behind.

struct CommandResult {
    int exit_code = 0;
    std::vector<std::string> outputs;
};

namespace detail {

template <typename Fn>
CommandResult guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const SimError& e) {
        err << "error: " << e.what() << "\n";
        return {3, {}};
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return {2, {}};
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return {1, {}};
    }
}

}  // namespace detail

inline CommandResult cmd_fit_alpha(const std::string& input_csv, FreqUnit unit,
                                   const std::string& out_csv, std::ostream& out,
                                   std::ostream& err) {
    return detail::guarded(err, [&]() -> CommandResult {
        MeasurementSet set = read_measurement_csv(input_csv);
        AlphaEstimate estimate = fit_alpha(set, unit);
        std::ostringstream report;
        report << "set: " << set.label << "\n";
        report << "unit: " << to_string(unit) << "\n";
        report << "alpha_db: " << format_number(estimate.alpha_db) << "\n";
        for (std::size_t i = 0; i < set.points.size(); ++i) {
            report << "point freq_hz=" << format_number(set.points[i].freq.hertz)
                   << " rss_dbm=" << format_number(set.points[i].rss_dbm)
                   << " residual_db=" << format_number(estimate.residuals_db[i]) << "\n";
        }
        CommandResult result;
        if (!out_csv.empty()) {
            std::ostringstream csv;
            csv << "freq_hz,rss_dbm,model_rss_dbm,residual_db\n";
            for (std::size_t i = 0; i < set.points.size(); ++i) {
                csv << format_number(set.points[i].freq.hertz) << ','
                    << format_number(set.points[i].rss_dbm) << ','
                    << format_number(rss_from_alpha(estimate, set.points[i].freq)) << ','
                    << format_number(estimate.residuals_db[i]) << '\n';
            }
            write_text_file(out_csv, csv.str());
            result.outputs.push_back(out_csv);
        }
        out << report.str();
        return result;
    });
}

inline CommandResult cmd_curve(const std::string& input_csv, const std::string& f_lo,
                               const std::string& f_hi, int steps, CurveMode mode,
                               const std::string& out_csv, std::ostream& err) {
    return detail::guarded(err, [&]() -> CommandResult {
        MeasurementSet set = read_measurement_csv(input_csv);
        RssCurve curve = rss_curve(set, parse_frequency(f_lo), parse_frequency(f_hi), steps, mode);
        std::ostringstream csv;
        write_curve_csv(csv, curve);
        write_text_file(out_csv, csv.str());
        return {0, {out_csv}};
    });
}

inline CommandResult cmd_simulate(const std::string& scenario_file, const std::string& out_prefix,
                                  std::ostream& err) {
    return detail::guarded(err, [&]() -> CommandResult {
        Scenario scenario = parse_scenario_file(scenario_file);
        SimResult result = run(scenario);
        Summary summary = summarize(result.log);

        std::ostringstream metrics;
        write_metrics_csv(metrics, result.log);
        std::ostringstream events;
        for (const auto& event : result.events) {
            events << "tick " << event.tick << ": " << event.action << " (" << event.reason << ")\n";
        }
        const std::string metrics_path = out_prefix + "_metrics.csv";
        const std::string events_path = out_prefix + "_events.log";
        const std::string summary_path = out_prefix + "_summary.txt";
        write_text_file(metrics_path, metrics.str());
        write_text_file(events_path, events.str());
        write_text_file(summary_path, format_summary(summary));
        return {0, {metrics_path, events_path, summary_path}};
    });
}

inline CommandResult cmd_spectrum(const std::string& scenario_file, int tick,
                                  const std::string& out_csv, int nfft, std::ostream& err) {
    return detail::guarded(err, [&]() -> CommandResult {
        Scenario scenario = parse_scenario_file(scenario_file);
        if (tick < 0 || tick >= scenario.duration_ticks) {
            throw std::invalid_argument("tick " + std::to_string(tick) +
                                        " outside run duration [0, " +
                                        std::to_string(scenario.duration_ticks) + ")");
        }
        Simulation sim(scenario);
        for (int t = 0; t <= tick; ++t) {
            sim.step();
        }
        std::vector<PsdBin> bins =
            spectrum(sim.last_rx_frame(), nfft, freq_hz(sim.last_carrier_hz()));
        std::ostringstream csv;
        write_psd_csv(csv, bins);
        write_text_file(out_csv, csv.str());
        return {0, {out_csv}};
    });
}

inline CommandResult cmd_ber_curve(const std::vector<double>& esn0_db_list,
                                   std::size_t bits_per_point, std::uint64_t seed,
                                   const std::string& out_csv, std::ostream& err) {
    return detail::guarded(err, [&]() -> CommandResult {
        if (esn0_db_list.empty()) {
            throw std::invalid_argument("need at least one Es/N0 point");
        }
        if (bits_per_point < 10000) {
            throw std::invalid_argument("bits per point must be >= 10000 for a stable estimate");
        }
        OfdmConfig cfg;
        std::ostringstream csv;
        csv << "esn0_db,ber,theory_ber\n";
        for (std::size_t i = 0; i < esn0_db_list.size(); ++i) {
            const double esn0_db = esn0_db_list[i];
            // whole OFDM symbols covering at least bits_per_point bits
            const std::size_t per_symbol = static_cast<std::size_t>(cfg.bits_per_ofdm_symbol());
            const std::size_t symbols = (bits_per_point + per_symbol - 1) / per_symbol;
            BitBlock tx = generate_bits(symbols * per_symbol,
                                        derive_rng(seed, 0xBE5 + i).next_u64());
            IqFrame frame = ofdm_modulate(qam16_modulate(tx), cfg);
            Rng noise = derive_rng(seed, 0x4015E + i);
            add_awgn(frame, db_to_power(-esn0_db), noise);
            BitBlock rx = qam16_demodulate(ofdm_demodulate(frame, cfg));
            csv << format_number(esn0_db) << ',' << format_number(compute_ber(tx, rx)) << ','
                << format_number(qam16_ber_theory(esn0_db)) << '\n';
        }
        write_text_file(out_csv, csv.str());
        return {0, {out_csv}};
    });
}

}  // namespace dsasim
