#include <catch2/catch.hpp>

#include <cmath>

#include "dsasim/propagation.hpp"
#include "dsasim/rng.hpp"
#include "test_util.hpp"

using namespace dsasim;

TEST_CASE("ITU indoor path loss", "[propagation]") {
    PathLossParams params{30.0, 1.0, 0, 0.0};

    SECTION("log terms vanish at 1 MHz and 1 m") {
        CHECK(itu_indoor_path_loss(freq_mhz(1), params) == Approx(-28.0).margin(1e-12));
    }
    SECTION("lab geometry values") {
        params.distance_m = 2.0;
        CHECK(itu_indoor_path_loss(freq_mhz(830), params) == Approx(39.412461717440905).margin(1e-9));
        CHECK(itu_indoor_path_loss(freq_mhz(1900), params) == Approx(46.605971888976015).margin(1e-9));
    }
    SECTION("floor penetration adds straight through") {
        PathLossParams with_floors{30.0, 2.0, 2, 15.0};
        CHECK(itu_indoor_path_loss(freq_mhz(830), with_floors) ==
              Approx(39.412461717440905 + 15.0).margin(1e-9));
    }
    SECTION("domain errors") {
        CHECK_THROWS_AS(itu_indoor_path_loss(freq_hz(0.0), params), std::domain_error);
        CHECK_THROWS_AS(itu_indoor_path_loss(freq_hz(-5.0), params), std::domain_error);
        PathLossParams bad = params;
        bad.distance_m = 0.0;
        CHECK_THROWS_AS(itu_indoor_path_loss(freq_mhz(830), bad), std::domain_error);
        PathLossParams pen_without_floors{30.0, 2.0, 0, 3.0};
        CHECK_THROWS_AS(itu_indoor_path_loss(freq_mhz(830), pen_without_floors), std::domain_error);
    }
}

TEST_CASE("received power model", "[propagation]") {
    PathLossParams params{30.0, 1.0, 0, 0.0};

    SECTION("log terms vanish") {
        CHECK(received_power_model(0.0, freq_mhz(1), params) == Approx(28.0).margin(1e-12));
    }
    SECTION("lab geometry values") {
        params.distance_m = 2.0;
        CHECK(received_power_model(10.0, freq_mhz(830), params) ==
              Approx(-29.412461717440905).margin(1e-9));
        CHECK(received_power_model(10.0, freq_mhz(1900), params) ==
              Approx(-36.605971888976015).margin(1e-9));
    }
    SECTION("consistent with the path-loss form when no floors") {
        Rng rng(42);
        for (int i = 0; i < 200; ++i) {
            PathLossParams p{10.0 + 30.0 * rng.uniform(), 0.5 + 20.0 * rng.uniform(), 0, 0.0};
            Frequency f = freq_mhz(100.0 + 3000.0 * rng.uniform());
            double p_t = -20.0 + 40.0 * rng.uniform();
            CHECK(received_power_model(p_t, f, p) ==
                  Approx(p_t - itu_indoor_path_loss(f, p)).margin(1e-12));
        }
    }
}

TEST_CASE("rss from alpha", "[propagation]") {
    SECTION("values") {
        CHECK(rss_from_alpha({127.25, {}, FreqUnit::Hz}, freq_ghz(1.2)) ==
              Approx(-54.3336249209525).margin(1e-9));
        CHECK(rss_from_alpha({0.0, {}, FreqUnit::Hz}, freq_hz(1.0)) == Approx(0.0).margin(1e-12));
        CHECK(rss_from_alpha({126.59, {}, FreqUnit::Hz}, freq_mhz(830)) ==
              Approx(-51.79156184752148).margin(1e-9));
    }
    SECTION("unit conventions differ by 120 dB") {
        AlphaEstimate hz{100.0, {}, FreqUnit::Hz};
        AlphaEstimate mhz{100.0, {}, FreqUnit::MHz};
        CHECK(rss_from_alpha(mhz, freq_mhz(830)) - rss_from_alpha(hz, freq_mhz(830)) ==
              Approx(120.0).margin(1e-9));
    }
    SECTION("frequency-ratio law holds exactly") {
        CHECK(rss_from_alpha({127.25, {}, FreqUnit::Hz}, freq_mhz(830)) -
                  rss_from_alpha({127.25, {}, FreqUnit::Hz}, freq_ghz(1.9)) ==
              Approx(7.1935101715351015).margin(1e-9));
        Rng rng(7);
        for (int i = 0; i < 200; ++i) {
            AlphaEstimate alpha{-50.0 + 300.0 * rng.uniform(), {}, FreqUnit::Hz};
            double f1 = 1e6 + 5e9 * rng.uniform();
            double f2 = 1e6 + 5e9 * rng.uniform();
            double delta = rss_from_alpha(alpha, freq_hz(f1)) - rss_from_alpha(alpha, freq_hz(f2));
            CHECK(delta == Approx(20.0 * std::log10(f2 / f1)).margin(1e-9));
        }
    }
    SECTION("rejects non-positive frequency") {
        CHECK_THROWS_AS(rss_from_alpha({100.0, {}, FreqUnit::Hz}, freq_hz(0.0)), std::domain_error);
    }
}

TEST_CASE("alpha fit", "[propagation]") {
    SECTION("Set1 mean fit") {
        AlphaEstimate estimate = fit_alpha(testutil::table1_set(0));
        CHECK(estimate.alpha_db == Approx(testutil::kTable1AlphaHz[0]).margin(1e-6));
        REQUIRE(estimate.residuals_db.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(estimate.residuals_db[i] == Approx(testutil::kSet1ResidualsDb[i]).margin(1e-5));
        }
    }
    SECTION("Set2 mean fit") {
        CHECK(fit_alpha(testutil::table1_set(1)).alpha_db ==
              Approx(testutil::kTable1AlphaHz[1]).margin(1e-6));
    }
    SECTION("all four rows stay within 1 dB of the published averages") {
        for (std::size_t row = 0; row < testutil::kTable1.size(); ++row) {
            AlphaEstimate estimate = fit_alpha(testutil::table1_set(row));
            CHECK(std::abs(estimate.alpha_db - testutil::kTable1[row].published_alpha_db) <= 1.0);
        }
    }
    SECTION("residual mean is zero by construction") {
        for (std::size_t row = 0; row < testutil::kTable1.size(); ++row) {
            AlphaEstimate estimate = fit_alpha(testutil::table1_set(row));
            double mean = 0.0;
            for (double r : estimate.residuals_db) {
                mean += r;
            }
            mean /= static_cast<double>(estimate.residuals_db.size());
            CHECK(std::abs(mean) < 1e-9);
        }
    }
    SECTION("exact-model data recovers alpha with zero residuals") {
        Rng rng(99);
        for (int trial = 0; trial < 100; ++trial) {
            double alpha0 = -100.0 + 400.0 * rng.uniform();
            MeasurementSet set;
            set.label = "synthetic";
            double hz = 1e6 * (1.0 + 10.0 * rng.uniform());
            int n = 2 + static_cast<int>(6.0 * rng.uniform());
            for (int i = 0; i < n; ++i) {
                set.points.push_back({freq_hz(hz), alpha0 - 20.0 * std::log10(hz)});
                hz *= 1.5 + 2.0 * rng.uniform();
            }
            AlphaEstimate estimate = fit_alpha(set);
            CHECK(estimate.alpha_db == Approx(alpha0).margin(1e-9));
            for (double r : estimate.residuals_db) {
                CHECK(std::abs(r) < 1e-9);
            }
        }
    }
    SECTION("two points on an exact line") {
        MeasurementSet set{"line",
                           {{freq_hz(1e8), 100.0 - 20.0 * std::log10(1e8)},
                            {freq_hz(1e9), 100.0 - 20.0 * std::log10(1e9)}}};
        AlphaEstimate estimate = fit_alpha(set);
        CHECK(estimate.alpha_db == Approx(100.0).margin(1e-9));
    }
    SECTION("needs at least two points") {
        MeasurementSet set{"short", {{freq_mhz(830), -43.0}}};
        CHECK_THROWS_AS(fit_alpha(set), std::invalid_argument);
    }
}

TEST_CASE("interpolation", "[propagation]") {
    MeasurementSet set1 = testutil::table1_set(0);

    SECTION("anchors reproduce exactly") {
        for (const auto& point : set1.points) {
            CHECK(std::abs(interpolate_rss(set1, point.freq) - point.rss_dbm) < 1e-12);
        }
    }
    SECTION("geometric midpoint of a log-linear segment") {
        MeasurementSet set{"two", {{freq_hz(100e6), -40.0}, {freq_hz(1e9), -60.0}}};
        CHECK(interpolate_rss(set, freq_hz(std::sqrt(100e6 * 1e9))) == Approx(-50.0).margin(1e-9));
    }
    SECTION("refuses extrapolation") {
        CHECK_THROWS_AS(interpolate_rss(set1, freq_mhz(100)), std::out_of_range);
        CHECK_THROWS_AS(interpolate_rss(set1, freq_ghz(2.5)), std::out_of_range);
    }
}

TEST_CASE("rss curve", "[propagation]") {
    MeasurementSet set1 = testutil::table1_set(0);

    SECTION("piecewise endpoints hit the measured anchors") {
        RssCurve curve = rss_curve(set1, freq_mhz(830), freq_ghz(1.9), 4,
                                   CurveMode::PiecewiseLogLinear);
        REQUIRE(curve.samples.size() == 4);
        CHECK(curve.samples.front().rss_dbm == Approx(-43.09).margin(1e-9));
        CHECK(curve.samples.back().rss_dbm == Approx(-63.15).margin(1e-9));
    }
    SECTION("analytic curves strictly decrease") {
        Rng rng(5);
        for (int trial = 0; trial < 50; ++trial) {
            double alpha0 = -100.0 + 400.0 * rng.uniform();
            MeasurementSet set{"synthetic",
                               {{freq_hz(830e6), alpha0 - 20.0 * std::log10(830e6)},
                                {freq_hz(1.9e9), alpha0 - 20.0 * std::log10(1.9e9)}}};
            RssCurve curve = rss_curve(set, freq_mhz(830), freq_ghz(1.9), 40,
                                       CurveMode::AnalyticAlpha);
            for (std::size_t i = 1; i < curve.samples.size(); ++i) {
                CHECK(curve.samples[i].rss_dbm < curve.samples[i - 1].rss_dbm);
            }
        }
    }
    SECTION("modes coincide on exact-model data") {
        double alpha0 = 120.0;
        MeasurementSet set{"exact",
                           {{freq_hz(500e6), alpha0 - 20.0 * std::log10(500e6)},
                            {freq_hz(2e9), alpha0 - 20.0 * std::log10(2e9)}}};
        RssCurve analytic = rss_curve(set, freq_mhz(500), freq_ghz(2), 33, CurveMode::AnalyticAlpha);
        RssCurve piecewise =
            rss_curve(set, freq_mhz(500), freq_ghz(2), 33, CurveMode::PiecewiseLogLinear);
        for (std::size_t i = 0; i < analytic.samples.size(); ++i) {
            CHECK(analytic.samples[i].rss_dbm ==
                  Approx(piecewise.samples[i].rss_dbm).margin(1e-9));
        }
    }
    SECTION("validation") {
        CHECK_THROWS_AS(rss_curve(set1, freq_mhz(830), freq_ghz(1.9), 1,
                                  CurveMode::PiecewiseLogLinear),
                        std::invalid_argument);
        CHECK_THROWS_AS(rss_curve(set1, freq_ghz(1.9), freq_mhz(830), 10,
                                  CurveMode::PiecewiseLogLinear),
                        std::invalid_argument);
        CHECK_THROWS_AS(rss_curve(set1, freq_mhz(100), freq_ghz(1.9), 10,
                                  CurveMode::PiecewiseLogLinear),
                        std::out_of_range);
    }
}
