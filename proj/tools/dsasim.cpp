// Command-line frontend: measurement ingestion, alpha fitting, RSS curve and
// PSD emission, scenario execution and a Monte-Carlo BER sweep.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsasim/cli.hpp"

namespace {

dsasim::FreqUnit parse_unit(const std::string& unit) {
    if (unit == "hz") {
        return dsasim::FreqUnit::Hz;
    }
    if (unit == "mhz") {
        return dsasim::FreqUnit::MHz;
    }
    throw CLI::ValidationError("--unit must be 'hz' or 'mhz'");
}

dsasim::CurveMode parse_mode(const std::string& mode) {
    if (mode == "alpha" || mode == "analytic_alpha") {
        return dsasim::CurveMode::AnalyticAlpha;
    }
    if (mode == "interp" || mode == "piecewise_loglinear") {
        return dsasim::CurveMode::PiecewiseLogLinear;
    }
    throw CLI::ValidationError("--mode must be 'interp' or 'alpha'");
}

std::vector<double> parse_esn0_list(const std::string& list) {
    std::vector<double> values;
    std::stringstream stream(list);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(token, &used));
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
        } catch (const std::exception&) {
            throw CLI::ValidationError("--esn0: bad value '" + token + "'");
        }
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dsasim - link-level path-loss / dynamic spectrum access simulator"};
    app.require_subcommand(1);

    std::string input;
    std::string out;
    std::string unit = "hz";
    std::string mode = "interp";
    std::string f_lo;
    std::string f_hi;
    std::string esn0 = "6,10,14";
    int steps = 100;
    int tick = 0;
    int nfft = 512;
    std::uint64_t seed = 1;
    std::uint64_t bits = 100000;

    auto* fit = app.add_subcommand("fit-alpha", "fit alpha from a measurement CSV");
    fit->add_option("--input", input, "measurement CSV (freq_hz,rss_dbm)")->required();
    fit->add_option("--unit", unit, "frequency unit convention: hz|mhz");
    fit->add_option("--out", out, "optional residual report CSV");

    auto* curve = app.add_subcommand("curve", "emit an RSS-vs-frequency curve CSV");
    curve->add_option("--input", input, "measurement CSV (freq_hz,rss_dbm)")->required();
    curve->add_option("--f-lo", f_lo, "curve start frequency, e.g. 830MHz")->required();
    curve->add_option("--f-hi", f_hi, "curve end frequency, e.g. 1.9GHz")->required();
    curve->add_option("--steps", steps, "number of log-spaced samples");
    curve->add_option("--mode", mode, "interp|alpha");
    curve->add_option("--out", out, "output CSV")->required();

    auto* simulate = app.add_subcommand("simulate", "run a scenario file");
    simulate->add_option("--input", input, "scenario file")->required();
    simulate->add_option("--out", out, "output prefix for _metrics.csv/_events.log/_summary.txt")
        ->required();

    auto* spectrumCmd = app.add_subcommand("spectrum", "PSD of the received frame at one tick");
    spectrumCmd->add_option("--input", input, "scenario file")->required();
    spectrumCmd->add_option("--tick", tick, "tick to inspect")->required();
    spectrumCmd->add_option("--nfft", nfft, "Welch FFT size");
    spectrumCmd->add_option("--out", out, "output CSV")->required();

    auto* ber = app.add_subcommand("ber-curve", "Monte-Carlo 16-QAM/OFDM BER sweep");
    ber->add_option("--esn0", esn0, "comma-separated Es/N0 list in dB");
    ber->add_option("--bits", bits, "bits per point (>= 10000)");
    ber->add_option("--seed", seed, "RNG seed");
    ber->add_option("--out", out, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    dsasim::CommandResult result;
    try {
        if (fit->parsed()) {
            result = dsasim::cmd_fit_alpha(input, parse_unit(unit), out, std::cout, std::cerr);
        } else if (curve->parsed()) {
            result = dsasim::cmd_curve(input, f_lo, f_hi, steps, parse_mode(mode), out, std::cerr);
        } else if (simulate->parsed()) {
            result = dsasim::cmd_simulate(input, out, std::cerr);
        } else if (spectrumCmd->parsed()) {
            result = dsasim::cmd_spectrum(input, tick, out, nfft, std::cerr);
        } else if (ber->parsed()) {
            result = dsasim::cmd_ber_curve(parse_esn0_list(esn0), bits, seed, out, std::cerr);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    for (const auto& path : result.outputs) {
        std::cout << "wrote " << path << "\n";
    }
    return result.exit_code;
}
