#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "aloha/errors.hpp"
#include "aloha/recurrence.hpp"
#include "oracles.hpp"

using namespace aloha;

namespace {

NetworkConfig bb_network(std::vector<std::pair<double, double>> users) {
    std::vector<UserSpec> specs;
    for (auto [l, p] : users)
        specs.push_back({DistributionSpec::bernoulli(l), DistributionSpec::bernoulli(p)});
    return NetworkConfig(specs);
}

}  // namespace

TEST_CASE("return time is 1 exactly when the first arrivals are all zero") {
    const auto net = bb_network({{0.3, 0.7}, {0.4, 0.5}});
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SlotSampler sampler(net, seed);
        const bool empty_first_slot = sampler.arrival(1, 0) == 0 && sampler.arrival(1, 1) == 0;
        const ReturnTimeOutcome o = sample_return_time(net, 1000, seed);
        if (empty_first_slot) {
            CHECK_FALSE(o.censored);
            CHECK(o.value == 1);
        } else {
            CHECK((o.censored || o.value > 1));
        }
    }
}

TEST_CASE("single-user mean return time matches the birth-death value") {
    const auto net = bb_network({{0.3, 0.7}});
    const auto outcomes = collect_return_times(net, 1000000, 20000, 4242);
    const ReturnTimeStats s = return_time_stats(outcomes);
    REQUIRE(s.n_censored == 0);
    REQUIRE(s.mean.has_value());
    const double expect = oracles::birth_death_return_time(0.3, 0.7);
    CHECK(expect == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(std::abs(*s.mean - expect) <= 4.0 * *s.std_error);
}

TEST_CASE("transient network censors most replications") {
    // from the origin the chain still returns quickly with noticeable
    // probability (T = 1 alone has probability 0.16); the censored share
    // estimates the escape probability, well above one half here
    const auto net = bb_network({{0.6, 0.5}, {0.6, 0.5}});
    const auto outcomes = collect_return_times(net, 10000, 200, 7);
    const ReturnTimeStats s = return_time_stats(outcomes);
    CHECK(s.n_censored >= 140);
    CHECK_FALSE(s.mean.has_value());
    CHECK(s.mean_lower_bound > 6000.0);
}

TEST_CASE("stats arithmetic") {
    const std::vector<ReturnTimeOutcome> plain = {{1, false, 100}, {1, false, 100}, {3, false, 100}};
    const ReturnTimeStats s = return_time_stats(plain, {1, 2, 3, 4});
    CHECK(s.n_total == 3);
    CHECK(s.n_censored == 0);
    CHECK(*s.mean == doctest::Approx(5.0 / 3.0));
    CHECK(s.mean_lower_bound == doctest::Approx(5.0 / 3.0));
    CHECK(s.tail[0].second == doctest::Approx(1.0));        // T >= 1 always
    CHECK(s.tail[1].second == doctest::Approx(1.0 / 3.0));  // only the 3
    CHECK(s.tail[2].second == doctest::Approx(1.0 / 3.0));
    CHECK(s.tail[3].second == doctest::Approx(0.0));

    const std::vector<ReturnTimeOutcome> censored = {{2, false, 100}, {100, true, 100}};
    const ReturnTimeStats c = return_time_stats(censored);
    CHECK_FALSE(c.mean.has_value());
    CHECK(c.mean_lower_bound == doctest::Approx(51.0));
    CHECK(c.n_censored == 1);

    CHECK_THROWS_AS(return_time_stats({}), EmptyInput);
}

TEST_CASE("empirical tail is nonincreasing") {
    const auto net = bb_network({{0.2, 0.6}, {0.1, 0.4}});
    const auto outcomes = collect_return_times(net, 50, 500, 99);  // some censored
    std::vector<std::uint64_t> ks;
    for (std::uint64_t k = 1; k <= 60; ++k) ks.push_back(k);
    const ReturnTimeStats s = return_time_stats(outcomes, ks);
    for (std::size_t i = 1; i < s.tail.size(); ++i)
        CHECK(s.tail[i].second <= s.tail[i - 1].second + 1e-15);
}

TEST_CASE("return sampling is reproducible and thread-count invariant") {
    const auto net = bb_network({{0.3, 0.7}});
    const ReturnTimeOutcome a = sample_return_time(net, 1000, 5);
    const ReturnTimeOutcome b = sample_return_time(net, 1000, 5);
    CHECK(a.value == b.value);
    CHECK(a.censored == b.censored);

    setenv("ALOHA_THREADS", "1", 1);
    const auto seq = collect_return_times(net, 10000, 300, 21);
    setenv("ALOHA_THREADS", "4", 1);
    const auto par = collect_return_times(net, 10000, 300, 21);
    unsetenv("ALOHA_THREADS");
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(seq[i].value == par[i].value);
        CHECK(seq[i].censored == par[i].censored);
    }
}

TEST_CASE("lyapunov trace validation") {
    const auto net = bb_network({{0.1, 0.5}, {0.1, 0.5}});
    CHECK_THROWS_AS(lyapunov_trace(net, 100, 0, 1), InvalidSpec);
    CHECK_THROWS_AS(lyapunov_trace(net, 0, 10, 1), InvalidSpec);
    const NetworkConfig multi({{DistributionSpec::bernoulli(0.1),
                                DistributionSpec::finite_pmf({0.4, 0.3, 0.3})}});
    CHECK_THROWS_AS(lyapunov_trace(multi, 100, 10, 1), NotSinglePacket);
}

TEST_CASE("first-slot weighted mass equals the load sum") {
    // from the origin, Q_i(1) is just A_i(1) and T >= 1 always, so
    // E S_1 = sum lambda_i / v_i = 0.8 for this network
    const auto net = bb_network({{0.1, 0.5}, {0.1, 0.5}});
    const LyapunovTrace tr = lyapunov_trace(net, 4000, 10, 31337);
    CHECK(tr.load == doctest::Approx(0.8));
    CHECK(tr.epsilon == doctest::Approx(0.2));
    CHECK(tr.tail[0] == doctest::Approx(1.0));
    CHECK(std::abs(tr.y[0] - 0.8) <= 4.0 * tr.y_se[0]);
    CHECK(tr.y_se[0] > 0.0);
}

TEST_CASE("drift inequality holds statistically for a recurrent network") {
    const auto net = bb_network({{0.1, 0.5}, {0.1, 0.5}});
    const LyapunovTrace tr = lyapunov_trace(net, 4000, 30, 2025);
    REQUIRE(tr.drift.size() == 29);
    for (std::size_t k = 0; k < tr.drift.size(); ++k)
        CHECK(tr.drift[k] <= 4.0 * tr.drift_se[k] + 1e-12);

    // telescoped: sum_k P(T >= k+1) <= y_1/eps within noise
    double lhs = 0.0, se_sum = 0.0;
    for (std::size_t k = 1; k < tr.tail.size(); ++k) {
        lhs += tr.tail[k];
        se_sum += tr.tail_se[k];
    }
    CHECK(lhs <= 0.8 / 0.2 + 4.0 * (se_sum + tr.y_se[0]));
}

TEST_CASE("trace tail is nonincreasing") {
    const auto net = bb_network({{0.15, 0.45}, {0.05, 0.6}});
    const LyapunovTrace tr = lyapunov_trace(net, 2000, 25, 8);
    for (std::size_t k = 1; k < tr.tail.size(); ++k)
        CHECK(tr.tail[k] <= tr.tail[k - 1] + 1e-15);
}

TEST_CASE("escape probability: transient vs recurrent") {
    const auto transient = bb_network({{0.6, 0.5}, {0.6, 0.5}});
    const EscapeEstimate hi =
        escape_probability(transient, QueueState{{30, 30}}, 10000, 300, 17);
    CHECK(hi.p_hat > 0.99);
    CHECK(hi.ci_high <= 1.0);

    const auto recurrent = bb_network({{0.3, 0.7}});
    const EscapeEstimate lo = escape_probability(recurrent, QueueState{{5}}, 10000, 300, 18);
    CHECK(lo.p_hat < 0.01);
    CHECK(lo.ci_low >= 0.0);
    CHECK(lo.ci_low <= lo.p_hat);
    CHECK(lo.p_hat <= lo.ci_high);
}

TEST_CASE("escape validation and the saturated start convention") {
    const auto net = bb_network({{0.6, 0.5}, {0.6, 0.5}});
    CHECK_THROWS_AS(escape_probability(net, QueueState::origin(2), 100, 10, 1), InitIsOrigin);
    CHECK_THROWS_AS(escape_probability(net, QueueState{{1}}, 100, 10, 1), DimensionMismatch);
    // delta = 3 max C = 1.5, K = 10 -> every queue starts at 15
    const QueueState init = default_saturated_init(net);
    CHECK(init.q == std::vector<std::int64_t>{15, 15});
}

TEST_CASE("saturated drift shows in the observed growth rate") {
    // margins are 0.35 per user; over 4000 slots the total queue grows at
    // about 0.7 per slot
    const auto net = bb_network({{0.6, 0.5}, {0.6, 0.5}});
    const auto rec = simulate_trajectory(net, QueueState{{30, 30}}, 4000, 912);
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < rec.slots.size(); ++r) {
        xs.push_back(static_cast<double>(rec.slots[r]));
        ys.push_back(static_cast<double>(rec.states[r].q[0] + rec.states[r].q[1]));
    }
    const double slope = oracles::lsq_slope(xs, ys);
    CHECK(slope > 0.6);
    CHECK(slope < 0.8);
}

TEST_CASE("per-user saturated drift matches the mean increment within 4 SE") {
    const auto net = bb_network({{0.55, 0.4}, {0.62, 0.5}});
    const std::uint64_t horizon = 20000;
    const auto rec = simulate_trajectory(net, QueueState{{50, 50}}, horizon, 77);
    // expected per-slot increments 0.55 - 0.4*0.5 = 0.35 and 0.62 - 0.5*0.6 = 0.32
    const std::vector<double> expect = {0.35, 0.32};
    for (int i = 0; i < 2; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        // queues never drain here, so every slot is saturated; per-slot
        // increment variance is bounded by Var(A) + Var(serve) < 0.5
        const double drift =
            static_cast<double>(rec.final_state.q[iu] - 50) / static_cast<double>(horizon);
        const double se = std::sqrt(0.5 / static_cast<double>(horizon));
        CHECK(std::abs(drift - expect[iu]) <= 4.0 * se);
        CHECK(rec.nonempty_slots[iu] == horizon);
    }
}
