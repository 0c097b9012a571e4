#include <catch2/catch.hpp>

#include <cmath>

#include "dsasim/channel.hpp"
#include "test_util.hpp"

using namespace dsasim;

namespace {

ChannelState analytic_state(double alpha_db, double freq_hz_value) {
    ChannelState state;
    state.mode = LinkBudgetMode::AnalyticAlpha;
    state.alpha = AlphaEstimate{alpha_db, {}, FreqUnit::Hz};
    state.freq = freq_hz(freq_hz_value);
    state.tx_gain_db = 0.0;
    state.rx_gain_db = 0.0;
    return state;
}

}  // namespace

TEST_CASE("link budget", "[channel]") {
    SECTION("analytic alpha baseline") {
        ChannelState state = analytic_state(127.25, 1.2e9);
        LinkBudget budget = link_budget(state, 0.0);
        CHECK(budget.expected_rss_db == Approx(-54.3336249209525).margin(1e-9));
        CHECK(budget.snr_db == Approx(-54.3336249209525 + 90.0).margin(1e-9));
    }
    SECTION("tx gain is purely additive") {
        ChannelState state = analytic_state(127.25, 1.2e9);
        double base = link_budget(state, 0.0).expected_rss_db;
        state.tx_gain_db = 13.0;
        CHECK(link_budget(state, 0.0).expected_rss_db - base == Approx(13.0).margin(1e-12));
        Rng rng(3);
        for (int i = 0; i < 100; ++i) {
            double delta = 40.0 * rng.uniform();
            state.tx_gain_db = delta;
            CHECK(link_budget(state, 0.0).expected_rss_db - base == Approx(delta).margin(1e-12));
        }
    }
    SECTION("empirical mode reproduces the measured anchor") {
        ChannelState state;
        state.mode = LinkBudgetMode::Empirical;
        state.empirical = testutil::table1_set(0);
        state.freq = freq_mhz(830);
        state.rx_gain_db = 0.0;
        CHECK(link_budget(state, 0.0).expected_rss_db == Approx(-43.09).margin(1e-12));
    }
    SECTION("empirical mode refuses out-of-band carriers") {
        ChannelState state;
        state.mode = LinkBudgetMode::Empirical;
        state.empirical = testutil::table1_set(0);
        state.freq = freq_mhz(100);
        state.rx_gain_db = 0.0;
        CHECK_THROWS_AS(link_budget(state, 0.0), std::out_of_range);
    }
    SECTION("itu mode equals tx power minus path loss") {
        ChannelState state;
        state.mode = LinkBudgetMode::ItuModel;
        state.params = PathLossParams{30.0, 2.0, 0, 0.0};
        state.tx_power_dbm = 10.0;
        state.freq = freq_mhz(830);
        state.rx_gain_db = 0.0;
        CHECK(link_budget(state, 0.0).expected_rss_db ==
              Approx(10.0 - itu_indoor_path_loss(freq_mhz(830), state.params)).margin(1e-12));
    }
    SECTION("components sum to the total") {
        ChannelState state = analytic_state(120.0, 1.6e9);
        state.tx_gain_db = 7.0;
        state.rx_gain_db = 10.0;
        state.beta_db = -0.75;
        state.obstructions.push_back({0.0, 100.0, 12.5});
        LinkBudget budget = link_budget(state, 50.0);
        double sum = 0.0;
        for (const auto& component : budget.components) {
            sum += component.db;
        }
        CHECK(budget.expected_rss_db == Approx(sum).margin(1e-9));
        CHECK(budget.snr_db == Approx(budget.expected_rss_db - budget.noise_db).margin(1e-12));
    }
    SECTION("frequency shift law") {
        ChannelState state = analytic_state(127.25, 1.9e9);
        double high = link_budget(state, 0.0).expected_rss_db;
        state.freq = freq_mhz(830);
        double low = link_budget(state, 0.0).expected_rss_db;
        CHECK(low - high == Approx(20.0 * std::log10(1.9e9 / 830e6)).margin(1e-9));
        CHECK(low - high == Approx(7.1935101715351015).margin(1e-9));
    }
    SECTION("tx gain bounds enforced") {
        ChannelState state = analytic_state(127.25, 1.9e9);
        state.tx_gain_db = 41.0;
        CHECK_THROWS_AS(link_budget(state, 0.0), std::invalid_argument);
    }
}

TEST_CASE("obstruction accounting", "[channel]") {
    ChannelState state = analytic_state(127.25, 1.9e9);

    SECTION("no events means no loss") {
        CHECK(active_obstruction_loss(state, 5.0) == 0.0);
    }
    SECTION("single active event") {
        state.obstructions.push_back({1.0, 10.0, 25.0});
        CHECK(active_obstruction_loss(state, 5.0) == 25.0);
        CHECK(active_obstruction_loss(state, 0.5) == 0.0);
        CHECK(active_obstruction_loss(state, 10.0) == 0.0);  // [start, end)
    }
    SECTION("overlapping events add") {
        state.obstructions.push_back({1.0, 10.0, 10.0});
        state.obstructions.push_back({2.0, 8.0, 15.0});
        CHECK(active_obstruction_loss(state, 5.0) == 25.0);
    }
    SECTION("an obstruction never raises the budget") {
        double clear = link_budget(state, 0.0).expected_rss_db;
        Rng rng(9);
        for (int i = 0; i < 50; ++i) {
            ChannelState blocked = state;
            blocked.obstructions.push_back({0.0, 100.0, 40.0 * rng.uniform()});
            CHECK(link_budget(blocked, 0.0).expected_rss_db <= clear);
        }
    }
}

TEST_CASE("channel application", "[channel]") {
    OfdmConfig cfg;

    SECTION("measured RSS follows the budget when noise is far below") {
        ChannelState state;
        state.mode = LinkBudgetMode::Empirical;
        state.empirical = testutil::table1_set(0);
        state.freq = freq_mhz(830);
        state.rx_gain_db = 0.0;
        BitBlock bits = generate_bits(100 * 800, 4);
        IqFrame tx = ofdm_modulate(qam16_modulate(bits), cfg);
        Rng rng(8);
        IqFrame rx = apply_channel(tx, state, 0.0, rng);
        CHECK(measure_rss(rx, cfg) == Approx(-43.09).margin(0.5));
    }
    SECTION("noise dominates a signal 30 dB below the floor") {
        ChannelState state = analytic_state(-120.0 + 20.0 * std::log10(1.9e9), 1.9e9);
        BitBlock bits = generate_bits(1000 * 800, 4);
        IqFrame tx = ofdm_modulate(qam16_modulate(bits), cfg);
        Rng rng(8);
        IqFrame rx = apply_channel(tx, state, 0.0, rng);
        // power sum of -120 dB signal and -90 dB noise
        CHECK(measure_rss(rx, cfg) == Approx(-89.9956592252).margin(0.5));
    }
    SECTION("same seed gives bit-identical output") {
        ChannelState state = analytic_state(127.25, 1.9e9);
        BitBlock bits = generate_bits(10 * 800, 4);
        IqFrame tx = ofdm_modulate(qam16_modulate(bits), cfg);
        Rng rng_a(99);
        Rng rng_b(99);
        IqFrame a = apply_channel(tx, state, 0.0, rng_a);
        IqFrame b = apply_channel(tx, state, 0.0, rng_b);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            CHECK(a.samples[i] == b.samples[i]);
        }
    }
    SECTION("empty frame is rejected") {
        ChannelState state = analytic_state(127.25, 1.9e9);
        Rng rng(1);
        IqFrame empty;
        CHECK_THROWS_AS(apply_channel(empty, state, 0.0, rng), std::invalid_argument);
    }
}

TEST_CASE("environment process", "[channel]") {
    SECTION("zero sigma never moves") {
        EnvironmentProcess env;
        env.sigma_db = 0.0;
        env.clip_db = 3.0;
        env.rng = Rng(4);
        for (int i = 0; i < 100; ++i) {
            env = step_environment(env, 0.1);
            CHECK(env.current_db == 0.0);
        }
    }
    SECTION("zero clip pins the walk at zero") {
        EnvironmentProcess env;
        env.sigma_db = 1.0;
        env.clip_db = 0.0;
        env.rng = Rng(4);
        for (int i = 0; i < 100; ++i) {
            env = step_environment(env, 0.1);
            CHECK(env.current_db == 0.0);
        }
    }
    SECTION("walk respects the clip over long runs") {
        EnvironmentProcess env;
        env.sigma_db = 0.5;
        env.clip_db = 3.0;
        env.rng = Rng(21);
        double sum = 0.0;
        double sum_sq = 0.0;
        const int steps = 10000;
        for (int i = 0; i < steps; ++i) {
            env = step_environment(env, 1.0);
            REQUIRE(std::abs(env.current_db) <= 3.0);
            sum += env.current_db;
            sum_sq += env.current_db * env.current_db;
        }
        double mean = sum / steps;
        double stddev = std::sqrt(sum_sq / steps - mean * mean);
        CHECK(stddev <= 3.0);
    }
    SECTION("dt must be positive") {
        EnvironmentProcess env;
        CHECK_THROWS_AS(step_environment(env, 0.0), std::invalid_argument);
    }
}
