#include "aloha/chain.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "aloha/errors.hpp"

namespace aloha {

NetworkConfig::NetworkConfig(const std::vector<UserSpec>& users) {
    if (users.empty()) throw InvalidSpec("network needs at least one user");
    const int m = static_cast<int>(users.size());
    arrivals_.reserve(users.size());
    windows_.reserve(users.size());
    for (int i = 0; i < m; ++i) {
        const auto& u = users[static_cast<std::size_t>(i)];
        Distribution a = make_distribution(u.arrival);
        Distribution w = make_distribution(u.window);
        if (!a.has_mass_at_one())
            throw ZeroProbOfOne("arrival law of user " + std::to_string(i) +
                                    " has P(A = 1) = 0",
                                i);
        if (!w.has_mass_at_one())
            throw ZeroProbOfOne("window law of user " + std::to_string(i) +
                                    " has P(W = 1) = 0",
                                i);
        lambda_.push_back(a.moments().mean);
        mean_window_.push_back(w.moments().mean);
        attempt_prob_.push_back(w.moments().prob_geq_one);
        single_packet_ = single_packet_ && w.binary_support();
        arrivals_.push_back(std::move(a));
        windows_.push_back(std::move(w));
    }
}

double attempt_probability(const Distribution& window) {
    return window.moments().prob_geq_one;
}

StepOutcome step(const QueueState& state, const SlotDraw& draw) {
    const std::size_t m = state.q.size();
    if (draw.arrivals.size() != m || draw.windows.size() != m)
        throw DimensionMismatch("slot draw size does not match state size");

    int eligible = 0;
    std::size_t who = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (state.q[i] >= 1 && draw.windows[i] >= 1) {
            ++eligible;
            who = i;
        }
    }

    StepOutcome out;
    out.next.q.resize(m);
    out.success.assign(m, false);
    out.served.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        std::int64_t served = 0;
        if (eligible == 1 && i == who) {
            served = std::min(state.q[i], draw.windows[i]);
            out.success[i] = true;
        }
        out.served[i] = served;
        out.next.q[i] = state.q[i] + draw.arrivals[i] - served;
    }
    return out;
}

TrajectoryRecord simulate_trajectory(const NetworkConfig& config, const QueueState& init,
                                     std::uint64_t horizon, std::uint64_t seed,
                                     const TrajectoryOptions& opts) {
    if (horizon < 1) throw InvalidSpec("horizon must be >= 1");
    const int m = config.size();
    if (init.size() != m) throw DimensionMismatch("initial state size does not match network");
    for (auto v : init.q)
        if (v < 0) throw InvalidSpec("queue lengths must be nonnegative");

    std::uint64_t every = opts.record_every;
    if (every == 0) every = horizon <= 100000 ? 1 : (horizon + 99999) / 100000;

    TrajectoryRecord rec;
    rec.horizon = horizon;
    rec.record_every = every;
    rec.success_counts.assign(static_cast<std::size_t>(m), 0);
    rec.nonempty_slots.assign(static_cast<std::size_t>(m), 0);

    rec.slots.push_back(0);
    rec.states.push_back(init);
    rec.success_user.push_back(0);
    rec.served.push_back(0);

    SlotSampler sampler(config, seed);
    std::vector<std::int64_t> q = init.q;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        std::int64_t served = 0;
        const int winner = advance_slot(sampler, n, q, served);
        if (winner != 0) ++rec.success_counts[static_cast<std::size_t>(winner - 1)];
        for (int i = 0; i < m; ++i)
            if (q[static_cast<std::size_t>(i)] >= 1) ++rec.nonempty_slots[static_cast<std::size_t>(i)];
        if (n % every == 0 || n == horizon) {
            rec.slots.push_back(n);
            rec.states.push_back(QueueState{q});
            rec.success_user.push_back(winner);
            rec.served.push_back(served);
        }
    }
    rec.final_state = QueueState{q};
    return rec;
}

void write_trajectory_csv(const TrajectoryRecord& rec, std::ostream& out) {
    const std::size_t m = rec.final_state.q.size();
    out << "slot";
    for (std::size_t i = 1; i <= m; ++i) out << ",q_" << i;
    out << ",success_user,served\n";
    for (std::size_t r = 0; r < rec.slots.size(); ++r) {
        out << rec.slots[r];
        for (std::size_t i = 0; i < m; ++i) out << ',' << rec.states[r].q[i];
        out << ',' << rec.success_user[r] << ',' << rec.served[r] << '\n';
    }
}

}  // namespace aloha
