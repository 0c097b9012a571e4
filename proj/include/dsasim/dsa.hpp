#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsasim/phy.hpp"
#include "dsasim/units.hpp"

namespace dsasim {

// Spectrum-switching controller: watches link metrics and, when the link
// degrades, moves the carrier to a lower band (spectrum permitting), raises
// TX gain when no band is left, or declares failure. Hysteresis plus a dwell
// count keep it from oscillating. Uplink and downlink are assumed to retune
// together, so a band move is a single reassignment.

struct BandPlan {
    std::vector<Frequency> bands;  // ascending

    void validate() const {
        if (bands.empty()) {
            throw std::invalid_argument("band plan must not be empty");
        }
        for (std::size_t i = 0; i < bands.size(); ++i) {
            if (!(bands[i].hertz > 0.0)) {
                throw std::invalid_argument("band plan frequencies must be positive");
            }
            if (i > 0 && !(bands[i].hertz > bands[i - 1].hertz)) {
                throw std::invalid_argument("band plan must be strictly ascending");
            }
        }
    }

    // index of an exact frequency match, -1 if absent
    int index_of(Frequency f) const {
        for (std::size_t i = 0; i < bands.size(); ++i) {
            if (bands[i].hertz == f.hertz) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }
};

inline BandPlan default_band_plan() {
    return BandPlan{{freq_mhz(830), freq_ghz(1.2), freq_ghz(1.6), freq_ghz(1.9)}};
}

struct BandPool {
    int capacity = 0;
    int occupied = 0;
};

// Per-band resource units, aligned with the plan's band order.
struct SpectrumPool {
    std::vector<BandPool> bands;

    void validate() const {
        for (const auto& band : bands) {
            if (band.capacity < 0 || band.occupied < 0 || band.occupied > band.capacity) {
                throw std::invalid_argument("pool occupancy out of bounds");
            }
        }
    }

    bool has_free(int index) const {
        return index >= 0 && index < static_cast<int>(bands.size()) &&
               bands[static_cast<std::size_t>(index)].occupied <
                   bands[static_cast<std::size_t>(index)].capacity;
    }

    int total_occupied() const {
        int sum = 0;
        for (const auto& band : bands) {
            sum += band.occupied;
        }
        return sum;
    }
};

inline SpectrumPool reserve(SpectrumPool pool, int band_index) {
    if (band_index < 0 || band_index >= static_cast<int>(pool.bands.size())) {
        throw std::out_of_range("band index out of range");
    }
    BandPool& band = pool.bands[static_cast<std::size_t>(band_index)];
    if (band.occupied >= band.capacity) {
        throw std::runtime_error("reserve on full band " + std::to_string(band_index));
    }
    ++band.occupied;
    return pool;
}

inline SpectrumPool release(SpectrumPool pool, int band_index) {
    if (band_index < 0 || band_index >= static_cast<int>(pool.bands.size())) {
        throw std::out_of_range("band index out of range");
    }
    BandPool& band = pool.bands[static_cast<std::size_t>(band_index)];
    if (band.occupied <= 0) {
        throw std::runtime_error("release on empty band " + std::to_string(band_index));
    }
    --band.occupied;
    return pool;
}

enum class Preference { DownshiftFirst, GainFirst };

struct DsaPolicy {
    double rss_margin_db = 3.0;   // degraded when rss < floor + margin
    double bler_max = 0.1;
    double hysteresis_db = 3.0;
    int dwell_ticks = 5;
    double gain_step_db = 13.0;
    double gain_max_db = 40.0;
    Preference prefer = Preference::DownshiftFirst;

    void validate() const {
        if (rss_margin_db < 0.0 || hysteresis_db < 0.0 || gain_step_db <= 0.0) {
            throw std::invalid_argument("policy margins must be non-negative, gain step positive");
        }
        if (bler_max < 0.0 || bler_max > 1.0) {
            throw std::invalid_argument("bler_max must be in [0, 1]");
        }
        if (dwell_ticks < 1) {
            throw std::invalid_argument("dwell_ticks must be positive");
        }
        if (gain_max_db < 0.0) {
            throw std::invalid_argument("gain_max_db must be non-negative");
        }
    }
};

enum class LinkStatus { Active, Failed };

struct ControllerState {
    int band_index = 0;
    double tx_gain_db = 0.0;
    int ticks_since_change = 0;
    LinkStatus status = LinkStatus::Active;
};

enum class ActionKind { Hold, Downshift, Upshift, IncreaseGain, DecreaseGain, DeclareFailure };

inline const char* to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::Hold: return "hold";
        case ActionKind::Downshift: return "downshift";
        case ActionKind::Upshift: return "upshift";
        case ActionKind::IncreaseGain: return "increase_gain";
        case ActionKind::DecreaseGain: return "decrease_gain";
        case ActionKind::DeclareFailure: return "declare_failure";
    }
    return "unknown";
}

struct Action {
    ActionKind kind = ActionKind::Hold;
    std::string reason;
    int target_band = -1;       // Downshift/Upshift
    double gain_delta_db = 0.0; // IncreaseGain/DecreaseGain
};

namespace detail {

// nearest lower band with a free unit, -1 if none
inline int nearest_free_below(const SpectrumPool& pool, int from) {
    for (int i = from - 1; i >= 0; --i) {
        if (pool.has_free(i)) {
            return i;
        }
    }
    return -1;
}

inline int nearest_free_above(const SpectrumPool& pool, int from, int count) {
    for (int i = from + 1; i < count; ++i) {
        if (pool.has_free(i)) {
            return i;
        }
    }
    return -1;
}

}  // namespace detail

// Pure decision function. Degraded := rss below floor + margin, or BLER over
// the acceptable level. While degraded the preference order picks downshift
// or gain; a healthy link may move back up only when the measured rss also
// covers the predictable 20*log10(f_up/f_cur) penalty plus hysteresis.
inline Action evaluate(const LinkMetrics& metrics, const DsaPolicy& policy, const BandPlan& plan,
                       const SpectrumPool& pool, const ControllerState& cs, double noise_floor_db) {
    policy.validate();
    plan.validate();
    pool.validate();
    if (cs.status != LinkStatus::Active) {
        return {ActionKind::Hold, "controller inactive"};
    }
    const double threshold = noise_floor_db + policy.rss_margin_db;
    const bool rss_low = metrics.rss_db < threshold;
    const bool bler_high = metrics.bler > policy.bler_max;
    const bool degraded = rss_low || bler_high;
    if (cs.ticks_since_change < policy.dwell_ticks) {
        return {ActionKind::Hold, "dwell"};
    }
    if (!degraded) {
        int up = detail::nearest_free_above(pool, cs.band_index, static_cast<int>(plan.bands.size()));
        if (up >= 0) {
            const double penalty =
                20.0 * std::log10(plan.bands[static_cast<std::size_t>(up)].hertz /
                                  plan.bands[static_cast<std::size_t>(cs.band_index)].hertz);
            if (metrics.rss_db > threshold + policy.hysteresis_db + penalty) {
                Action action{ActionKind::Upshift,
                              "rss " + format_number(metrics.rss_db) +
                                  " dB covers upshift penalty " + format_number(penalty) + " dB"};
                action.target_band = up;
                return action;
            }
        }
        return {ActionKind::Hold, "healthy"};
    }
    const std::string cause =
        rss_low ? "rss " + format_number(metrics.rss_db) + " dB below threshold " +
                      format_number(threshold) + " dB"
                : "bler " + format_number(metrics.bler) + " above " + format_number(policy.bler_max);
    const int down = detail::nearest_free_below(pool, cs.band_index);
    const bool gain_headroom = cs.tx_gain_db + policy.gain_step_db <= policy.gain_max_db;
    auto downshift = [&]() {
        Action action{ActionKind::Downshift, cause};
        action.target_band = down;
        return action;
    };
    auto raise_gain = [&]() {
        Action action{ActionKind::IncreaseGain, cause};
        action.gain_delta_db = policy.gain_step_db;
        return action;
    };
    if (policy.prefer == Preference::DownshiftFirst) {
        if (down >= 0) {
            return downshift();
        }
        if (gain_headroom) {
            return raise_gain();
        }
    } else {
        if (gain_headroom) {
            return raise_gain();
        }
        if (down >= 0) {
            return downshift();
        }
    }
    return {ActionKind::DeclareFailure, cause + "; no lower band free, gain exhausted"};
}

struct ApplyResult {
    ControllerState state;
    SpectrumPool pool;
    bool applied = false;
};

// Single mutation point for (controller, pool). Band moves release the old
// unit and reserve the new one atomically; anything that would break pool
// bounds or gain bounds is rejected with both values unchanged.
inline ApplyResult apply_action(const ControllerState& cs, const Action& action,
                                const BandPlan& plan, const SpectrumPool& pool,
                                const DsaPolicy& policy) {
    plan.validate();
    pool.validate();
    ApplyResult result{cs, pool, false};
    switch (action.kind) {
        case ActionKind::Hold:
            result.applied = true;
            return result;
        case ActionKind::Downshift:
        case ActionKind::Upshift: {
            const int target = action.target_band;
            if (target < 0 || target >= static_cast<int>(plan.bands.size()) ||
                target == cs.band_index || !pool.has_free(target)) {
                return result;  // pool race or bad target: reject
            }
            result.pool = reserve(release(pool, cs.band_index), target);
            result.state.band_index = target;
            result.state.ticks_since_change = 0;
            result.applied = true;
            return result;
        }
        case ActionKind::IncreaseGain:
        case ActionKind::DecreaseGain: {
            const double delta =
                action.kind == ActionKind::IncreaseGain ? action.gain_delta_db : -action.gain_delta_db;
            const double next = cs.tx_gain_db + delta;
            if (next < 0.0 || next > policy.gain_max_db) {
                return result;
            }
            result.state.tx_gain_db = next;
            result.state.ticks_since_change = 0;
            result.applied = true;
            return result;
        }
        case ActionKind::DeclareFailure:
            result.state.status = LinkStatus::Failed;
            result.state.ticks_since_change = 0;
            result.pool = release(pool, cs.band_index);
            result.applied = true;
            return result;
    }
    return result;
}

}  // namespace dsasim
