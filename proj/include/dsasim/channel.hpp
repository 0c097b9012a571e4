#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsasim/phy.hpp"
#include "dsasim/propagation.hpp"
#include "dsasim/rng.hpp"
#include "dsasim/units.hpp"

namespace dsasim {

// Frequency-dependent link budget applied to IqFrames: one scalar
// attenuation per carrier (the link is treated as flat across the occupied
// band), plus TX/RX gain chain, slow environment drift beta(t), obstruction
// losses and additive noise at the configured floor.

enum class LinkBudgetMode { AnalyticAlpha, ItuModel, Empirical };

struct ObstructionEvent {
    double start_s = 0.0;
    double end_s = std::numeric_limits<double>::infinity();  // open-ended until closed
    double extra_loss_db = 0.0;

    void validate() const {
        if (!(end_s > start_s)) {
            throw std::invalid_argument("obstruction must end after it starts");
        }
        if (extra_loss_db < 0.0) {
            throw std::invalid_argument("obstruction loss must be non-negative");
        }
    }
};

// Clipped Gaussian random walk standing in for the slow environment drift.
struct EnvironmentProcess {
    double sigma_db = 0.2;   // per sqrt(second)
    double clip_db = 2.0;
    Rng rng{0};
    double current_db = 0.0;
};

inline EnvironmentProcess step_environment(EnvironmentProcess env, double dt_s) {
    if (!(dt_s > 0.0)) {
        throw std::invalid_argument("dt must be positive");
    }
    double next = env.current_db + env.sigma_db * std::sqrt(dt_s) * env.rng.gaussian();
    env.current_db = std::clamp(next, -env.clip_db, env.clip_db);
    return env;
}

struct ChannelState {
    Frequency freq = freq_ghz(1.9);
    double tx_gain_db = 0.0;   // [0, 40]
    double rx_gain_db = 10.0;  // fixed RF chain gain
    LinkBudgetMode mode = LinkBudgetMode::AnalyticAlpha;
    AlphaEstimate alpha;               // AnalyticAlpha
    PathLossParams params;             // ItuModel
    double tx_power_dbm = 0.0;         // ItuModel
    MeasurementSet empirical;          // Empirical
    double noise_floor_db = -90.0;
    double beta_db = 0.0;
    std::vector<ObstructionEvent> obstructions;

    void validate() const {
        if (tx_gain_db < 0.0 || tx_gain_db > 40.0) {
            throw std::invalid_argument("tx gain must be within [0, 40] dB");
        }
        if (!(noise_floor_db < 0.0)) {
            throw std::invalid_argument("noise floor must be negative");
        }
        if (!(freq.hertz > 0.0)) {
            throw std::invalid_argument("operating frequency must be positive");
        }
        for (const auto& event : obstructions) {
            event.validate();
        }
    }
};

struct BudgetComponent {
    std::string name;
    double db = 0.0;
};

struct LinkBudget {
    double expected_rss_db = 0.0;
    double noise_db = 0.0;
    double snr_db = 0.0;
    std::vector<BudgetComponent> components;
};

inline double active_obstruction_loss(const ChannelState& state, double t_s) {
    double loss = 0.0;
    for (const auto& event : state.obstructions) {
        if (event.start_s <= t_s && t_s < event.end_s) {
            loss += event.extra_loss_db;
        }
    }
    return loss;
}

inline LinkBudget link_budget(const ChannelState& state, double t_s) {
    state.validate();
    double base = 0.0;
    switch (state.mode) {
        case LinkBudgetMode::AnalyticAlpha:
            base = rss_from_alpha(state.alpha, state.freq);
            break;
        case LinkBudgetMode::ItuModel:
            base = state.tx_power_dbm - itu_indoor_path_loss(state.freq, state.params);
            break;
        case LinkBudgetMode::Empirical:
            base = interpolate_rss(state.empirical, state.freq);
            break;
    }
    LinkBudget budget;
    budget.components = {
        {"base_rss", base},
        {"tx_gain", state.tx_gain_db},
        {"rx_gain", state.rx_gain_db},
        {"beta", state.beta_db},
        {"obstruction", -active_obstruction_loss(state, t_s)},
    };
    double sum = 0.0;
    for (const auto& component : budget.components) {
        sum += component.db;
    }
    budget.expected_rss_db = sum;
    budget.noise_db = state.noise_floor_db;
    budget.snr_db = budget.expected_rss_db - budget.noise_db;
    return budget;
}

// Scales the frame so a unit-reference input lands at the budgeted RSS and
// adds white noise calibrated to the floor (unitary FFT keeps the per-sample
// variance equal to the per-tone noise power).
inline IqFrame apply_channel(const IqFrame& frame, const ChannelState& state, double t_s, Rng& rng) {
    if (frame.samples.empty()) {
        throw std::invalid_argument("cannot apply channel to an empty frame");
    }
    LinkBudget budget = link_budget(state, t_s);
    const double amplitude = db_to_amplitude(budget.expected_rss_db);
    IqFrame out = frame;
    for (Cplx& s : out.samples) {
        s *= amplitude;
    }
    add_awgn(out, db_to_power(state.noise_floor_db), rng);
    return out;
}

}  // namespace dsasim
