#include <doctest.h>

#include <sstream>

#include "aloha/chain.hpp"
#include "aloha/errors.hpp"
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

TEST_CASE("network validation") {
    CHECK_THROWS_AS(NetworkConfig({}), InvalidSpec);
    // zero-probability-of-one laws break irreducibility
    CHECK_THROWS_AS(NetworkConfig({{DistributionSpec::bernoulli(0.0),
                                    DistributionSpec::bernoulli(0.5)}}),
                    ZeroProbOfOne);
    CHECK_THROWS_AS(NetworkConfig({{DistributionSpec::bernoulli(0.5),
                                    DistributionSpec::finite_pmf({0.5, 0.0, 0.5})}}),
                    ZeroProbOfOne);
    const auto net = bb_network({{0.3, 0.7}, {0.2, 0.5}});
    CHECK(net.size() == 2);
    CHECK(net.lambda()[0] == doctest::Approx(0.3));
    CHECK(net.attempt_prob()[1] == doctest::Approx(0.5));
    CHECK(net.single_packet());

    const NetworkConfig multi({{DistributionSpec::bernoulli(0.3),
                                DistributionSpec::finite_pmf({0.2, 0.5, 0.3})}});
    CHECK_FALSE(multi.single_packet());
    CHECK(multi.mean_window()[0] == doctest::Approx(1.1));
    CHECK(multi.attempt_prob()[0] == doctest::Approx(0.8));
}

TEST_CASE("attempt probability") {
    CHECK(attempt_probability(make_distribution(DistributionSpec::bernoulli(0.5))) ==
          doctest::Approx(0.5));
    CHECK(attempt_probability(make_distribution(
              DistributionSpec::finite_pmf({0.2, 0.5, 0.3}))) == doctest::Approx(0.8));
    CHECK(attempt_probability(make_distribution(DistributionSpec::poisson(1.0))) ==
          doctest::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("step semantics") {
    // empty queue does not block the other user
    auto out = step({{0, 3}}, {{1, 0}, {1, 1}});
    CHECK(out.next.q == std::vector<std::int64_t>{1, 2});
    CHECK(out.success == std::vector<bool>{false, true});
    CHECK(out.served == std::vector<std::int64_t>{0, 1});

    // collision: both backlogged users attempt
    out = step({{2, 3}}, {{0, 0}, {1, 1}});
    CHECK(out.next.q == std::vector<std::int64_t>{2, 3});
    CHECK(out.success == std::vector<bool>{false, false});

    // multipacket service capped by the queue
    out = step({{5, 0}}, {{0, 0}, {3, 0}});
    CHECK(out.next.q == std::vector<std::int64_t>{2, 0});
    CHECK(out.success == std::vector<bool>{true, false});
    CHECK(out.served == std::vector<std::int64_t>{3, 0});

    // from the origin the next state is the arrival vector
    out = step({{0, 0}}, {{2, 1}, {1, 1}});
    CHECK(out.next.q == std::vector<std::int64_t>{2, 1});
    CHECK(out.success == std::vector<bool>{false, false});

    CHECK_THROWS_AS(step({{1, 1}}, {{1}, {1}}), DimensionMismatch);
}

TEST_CASE("step fuzz: nonnegativity, exclusivity, conservation") {
    SplitMix64 g{2024};
    for (int it = 0; it < 200000; ++it) {
        const int m = 1 + static_cast<int>(g() % 5);
        QueueState s;
        SlotDraw d;
        for (int i = 0; i < m; ++i) {
            s.q.push_back(static_cast<std::int64_t>(g() % 6));
            d.arrivals.push_back(static_cast<std::int64_t>(g() % 4));
            d.windows.push_back(static_cast<std::int64_t>(g() % 4));
        }
        const StepOutcome out = step(s, d);
        int successes = 0;
        for (int i = 0; i < m; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            CHECK(out.next.q[iu] >= 0);
            if (out.success[iu]) {
                ++successes;
                CHECK(out.served[iu] == std::min(s.q[iu], d.windows[iu]));
            } else {
                CHECK(out.served[iu] == 0);
            }
            CHECK(out.next.q[iu] - s.q[iu] - d.arrivals[iu] == -out.served[iu]);
        }
        CHECK(successes <= 1);
    }
}

TEST_CASE("deterministic laws give the expected trajectory") {
    const auto net = bb_network({{1.0, 1.0}});
    const auto rec = simulate_trajectory(net, QueueState::origin(1), 3, 7);
    REQUIRE(rec.slots == std::vector<std::uint64_t>{0, 1, 2, 3});
    CHECK(rec.states[1].q[0] == 1);
    CHECK(rec.states[2].q[0] == 1);
    CHECK(rec.states[3].q[0] == 1);
    // slot 1 starts empty, so the first service happens in slot 2
    CHECK(rec.success_counts[0] == 2);
}

TEST_CASE("permanent collision never serves") {
    const auto net = bb_network({{0.4, 1.0}, {0.4, 1.0}});
    const auto rec = simulate_trajectory(net, QueueState{{1, 1}}, 2000, 11);
    CHECK(rec.success_counts[0] == 0);
    CHECK(rec.success_counts[1] == 0);
    CHECK(rec.final_state.q[0] >= 1);
}

TEST_CASE("single-user occupancy matches the birth-death law") {
    const auto net = bb_network({{0.3, 0.7}});
    const auto rec = simulate_trajectory(net, QueueState::origin(1), 100000, 31);
    const double frac =
        static_cast<double>(rec.nonempty_slots[0]) / static_cast<double>(rec.horizon);
    const double pi0 = oracles::birth_death_pi0(0.3, 0.7);
    CHECK(pi0 == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    CHECK(std::abs(frac - (1.0 - pi0)) < 0.01);
}

TEST_CASE("trajectory transitions replay through step") {
    const NetworkConfig net({{DistributionSpec::poisson(0.4),
                              DistributionSpec::finite_pmf({0.3, 0.5, 0.2})},
                             {DistributionSpec::bernoulli(0.3),
                              DistributionSpec::bernoulli(0.6)}});
    const std::uint64_t seed = 99;
    const auto rec = simulate_trajectory(net, QueueState{{2, 0}}, 500, seed);
    const SlotSampler sampler(net, seed);
    QueueState s = rec.states[0];
    std::size_t row = 1;
    for (std::uint64_t n = 1; n <= rec.horizon; ++n) {
        SlotDraw d;
        sampler.draw(n, d);
        const StepOutcome out = step(s, d);
        s = out.next;
        if (rec.slots[row] == n) {
            CHECK(s == rec.states[row]);
            ++row;
        }
    }
    CHECK(row == rec.slots.size());
}

TEST_CASE("same seed, same bytes; thinning kicks in for long runs") {
    const auto net = bb_network({{0.3, 0.7}});
    const auto a = simulate_trajectory(net, QueueState::origin(1), 1000, 5);
    const auto b = simulate_trajectory(net, QueueState::origin(1), 1000, 5);
    std::ostringstream csv_a, csv_b;
    write_trajectory_csv(a, csv_a);
    write_trajectory_csv(b, csv_b);
    CHECK(csv_a.str() == csv_b.str());
    CHECK(a.record_every == 1);

    const auto thin = simulate_trajectory(net, QueueState::origin(1), 200001, 5);
    CHECK(thin.record_every == 3);
    CHECK(thin.slots.size() <= 100002);
    CHECK(thin.slots.back() == 200001);
}

TEST_CASE("trajectory validation") {
    const auto net = bb_network({{0.3, 0.7}});
    CHECK_THROWS_AS(simulate_trajectory(net, QueueState::origin(1), 0, 1), InvalidSpec);
    CHECK_THROWS_AS(simulate_trajectory(net, QueueState::origin(2), 10, 1),
                    DimensionMismatch);
    CHECK_THROWS_AS(simulate_trajectory(net, QueueState{{-1}}, 10, 1), InvalidSpec);
}
