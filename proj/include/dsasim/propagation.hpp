#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsasim/units.hpp"

namespace dsasim {

// ITU indoor path-loss model and the measurement-driven RSS tools built on
// top of it. All values are dB / dBm, frequencies carried as Frequency.

struct PathLossParams {
    double n_coeff = 30.0;           // distance power loss coefficient
    double distance_m = 2.0;
    int floors = 0;
    double floor_penetration_db = 0.0;
};

enum class FreqUnit { Hz, MHz };

inline const char* to_string(FreqUnit unit) {
    return unit == FreqUnit::Hz ? "hz" : "mhz";
}

struct MeasurementPoint {
    Frequency freq;
    double rss_dbm = 0.0;
};

// One measurement session: RSS sampled at strictly increasing frequencies.
struct MeasurementSet {
    std::string label;
    std::vector<MeasurementPoint> points;

    void validate() const {
        if (points.size() < 2) {
            throw std::invalid_argument("measurement set '" + label + "' needs at least 2 points");
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!(points[i].freq.hertz > 0.0)) {
                throw std::invalid_argument("measurement set '" + label + "': non-positive frequency");
            }
            if (i > 0 && !(points[i].freq.hertz > points[i - 1].freq.hertz)) {
                throw std::invalid_argument("measurement set '" + label +
                                            "': frequencies must be strictly increasing");
            }
        }
    }

    double min_freq_hz() const { return points.front().freq.hertz; }
    double max_freq_hz() const { return points.back().freq.hertz; }
};

// Fitted aggregate constant of the unit-slope model rss = alpha - 20*log10(f).
// The unit convention records which f goes into the log; the two conventions
// differ by a constant 120 dB.
struct AlphaEstimate {
    double alpha_db = 0.0;
    std::vector<double> residuals_db;
    FreqUnit unit = FreqUnit::Hz;
};

enum class CurveMode { AnalyticAlpha, PiecewiseLogLinear };

inline const char* to_string(CurveMode mode) {
    return mode == CurveMode::AnalyticAlpha ? "analytic_alpha" : "piecewise_loglinear";
}

struct RssCurve {
    std::vector<MeasurementPoint> samples;
    CurveMode mode = CurveMode::PiecewiseLogLinear;
};

namespace detail {
inline void check_path_loss_inputs(Frequency f, const PathLossParams& p) {
    if (!(f.hertz > 0.0)) {
        throw std::domain_error("frequency must be positive");
    }
    if (!(p.distance_m > 0.0)) {
        throw std::domain_error("distance must be positive");
    }
    if (!(p.n_coeff > 0.0)) {
        throw std::domain_error("distance power loss coefficient must be positive");
    }
    if (p.floors < 0 || p.floor_penetration_db < 0.0) {
        throw std::domain_error("floor penetration must be non-negative");
    }
    if (p.floors == 0 && p.floor_penetration_db != 0.0) {
        throw std::domain_error("floor penetration given with zero floors");
    }
}

inline double log_freq(Frequency f, FreqUnit unit) {
    return std::log10(unit == FreqUnit::Hz ? f.hertz : f.megahertz());
}
}  // namespace detail

// PL = 20*log10(f_MHz) + N*log10(d) + P_f(n) - 28, in dB.
inline double itu_indoor_path_loss(Frequency f, const PathLossParams& p) {
    detail::check_path_loss_inputs(f, p);
    return 20.0 * std::log10(f.megahertz()) + p.n_coeff * std::log10(p.distance_m) +
           p.floor_penetration_db - 28.0;
}

// Receiver-side form without the floor term: P_r = P_t - 20*log10(f_MHz) - N*log10(d) + 28.
inline double received_power_model(double p_t_dbm, Frequency f, const PathLossParams& p) {
    detail::check_path_loss_inputs(f, p);
    return p_t_dbm - 20.0 * std::log10(f.megahertz()) - p.n_coeff * std::log10(p.distance_m) + 28.0;
}

inline double rss_from_alpha(const AlphaEstimate& alpha, Frequency f) {
    if (!(f.hertz > 0.0)) {
        throw std::domain_error("frequency must be positive");
    }
    return alpha.alpha_db - 20.0 * detail::log_freq(f, alpha.unit);
}

// Mean of per-point alpha = rss + 20*log10(f); for a unit-slope model this is
// the least-squares intercept. Residuals are reported because measured data
// can sit far off the 20*log10(f) law.
inline AlphaEstimate fit_alpha(const MeasurementSet& set, FreqUnit unit = FreqUnit::Hz) {
    set.validate();
    AlphaEstimate estimate;
    estimate.unit = unit;
    std::vector<double> per_point;
    per_point.reserve(set.points.size());
    double sum = 0.0;
    for (const auto& point : set.points) {
        double a = point.rss_dbm + 20.0 * detail::log_freq(point.freq, unit);
        per_point.push_back(a);
        sum += a;
    }
    estimate.alpha_db = sum / static_cast<double>(per_point.size());
    estimate.residuals_db.reserve(per_point.size());
    for (double a : per_point) {
        estimate.residuals_db.push_back(a - estimate.alpha_db);
    }
    return estimate;
}

// Piecewise-linear in (log10 f, dB) coordinates; exact at anchors, refuses
// to extrapolate.
inline double interpolate_rss(const MeasurementSet& set, Frequency f) {
    set.validate();
    if (!(f.hertz >= set.min_freq_hz() && f.hertz <= set.max_freq_hz())) {
        throw std::out_of_range("frequency " + format_number(f.hertz) + " Hz outside measured band [" +
                                format_number(set.min_freq_hz()) + ", " +
                                format_number(set.max_freq_hz()) + "] of set '" + set.label + "'");
    }
    for (const auto& point : set.points) {
        if (point.freq.hertz == f.hertz) {
            return point.rss_dbm;
        }
    }
    auto upper = std::upper_bound(set.points.begin(), set.points.end(), f.hertz,
                                  [](double hz, const MeasurementPoint& p) { return hz < p.freq.hertz; });
    const MeasurementPoint& hi = *upper;
    const MeasurementPoint& lo = *(upper - 1);
    double x0 = std::log10(lo.freq.hertz);
    double x1 = std::log10(hi.freq.hertz);
    double t = (std::log10(f.hertz) - x0) / (x1 - x0);
    return lo.rss_dbm + t * (hi.rss_dbm - lo.rss_dbm);
}

// `steps` log-spaced samples over [f_lo, f_hi].
inline RssCurve rss_curve(const MeasurementSet& set, Frequency f_lo, Frequency f_hi, int steps,
                          CurveMode mode) {
    set.validate();
    if (steps < 2) {
        throw std::invalid_argument("curve needs at least 2 steps, got " + std::to_string(steps));
    }
    if (!(f_lo.hertz > 0.0) || !(f_lo.hertz < f_hi.hertz)) {
        throw std::invalid_argument("need 0 < f_lo < f_hi");
    }
    RssCurve curve;
    curve.mode = mode;
    curve.samples.reserve(static_cast<std::size_t>(steps));
    AlphaEstimate alpha;
    if (mode == CurveMode::AnalyticAlpha) {
        alpha = fit_alpha(set);
    }
    const double ratio = f_hi.hertz / f_lo.hertz;
    for (int i = 0; i < steps; ++i) {
        double frac = static_cast<double>(i) / static_cast<double>(steps - 1);
        Frequency f = freq_hz(i + 1 == steps ? f_hi.hertz : f_lo.hertz * std::pow(ratio, frac));
        double rss = mode == CurveMode::AnalyticAlpha ? rss_from_alpha(alpha, f)
                                                      : interpolate_rss(set, f);
        curve.samples.push_back({f, rss});
    }
    return curve;
}

}  // namespace dsasim
