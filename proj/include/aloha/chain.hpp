#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "aloha/dist.hpp"

namespace aloha {

// One user: its arrival law A and transmission-window law W.
struct UserSpec {
    DistributionSpec arrival;
    DistributionSpec window;
    bool operator==(const UserSpec&) const = default;
};

// Validated network of M users with derived per-user rates. Rejects any
// arrival or window law with P(X = 1) = 0: the joint queue chain would not
// be irreducible.
class NetworkConfig {
  public:
    explicit NetworkConfig(const std::vector<UserSpec>& users);

    int size() const { return static_cast<int>(arrivals_.size()); }
    const Distribution& arrival(int i) const { return arrivals_[static_cast<std::size_t>(i)]; }
    const Distribution& window(int i) const { return windows_[static_cast<std::size_t>(i)]; }

    const std::vector<double>& lambda() const { return lambda_; }  // mean arrivals/slot
    const std::vector<double>& mean_window() const { return mean_window_; }
    const std::vector<double>& attempt_prob() const { return attempt_prob_; }

    // every window law has support within {0,1}
    bool single_packet() const { return single_packet_; }

  private:
    std::vector<Distribution> arrivals_;
    std::vector<Distribution> windows_;
    std::vector<double> lambda_;
    std::vector<double> mean_window_;
    std::vector<double> attempt_prob_;
    bool single_packet_ = true;
};

struct QueueState {
    std::vector<std::int64_t> q;

    static QueueState origin(int m) { return {std::vector<std::int64_t>(static_cast<std::size_t>(m), 0)}; }
    int size() const { return static_cast<int>(q.size()); }
    bool is_origin() const {
        for (auto v : q)
            if (v != 0) return false;
        return true;
    }
    bool operator==(const QueueState&) const = default;
};

// The (A, W) values drawn for one slot.
struct SlotDraw {
    std::vector<std::int64_t> arrivals;
    std::vector<std::int64_t> windows;
};

struct StepOutcome {
    QueueState next;
    std::vector<bool> success;        // at most one entry true
    std::vector<std::int64_t> served; // nonzero only at the successful user
};

// P(W >= 1) = 1 - P(W = 0).
double attempt_probability(const Distribution& window);

// One slot of the queue recursion. User i is eligible iff its pre-arrival
// queue is nonempty and W_i >= 1; it succeeds iff it is the only eligible
// user, clearing min(q_i, W_i) packets. Arrivals of the slot join after
// eligibility is decided and are never served in the same slot.
StepOutcome step(const QueueState& state, const SlotDraw& draw);

// Per-slot seeded draws for one trajectory. Draw (slot, user, tag) is a
// pure function of those coordinates, so trajectories are reproducible
// regardless of evaluation order or chunking.
class SlotSampler {
  public:
    SlotSampler(const NetworkConfig& config, std::uint64_t seed)
        : config_(&config), seed_(seed) {}

    std::int64_t arrival(std::uint64_t slot, int user) const {
        SplitMix64 g{derive_stream(seed_, slot, static_cast<std::uint64_t>(user), StreamTag::Arrival)};
        return config_->arrival(user).sample(g);
    }
    std::int64_t window(std::uint64_t slot, int user) const {
        SplitMix64 g{derive_stream(seed_, slot, static_cast<std::uint64_t>(user), StreamTag::Window)};
        return config_->window(user).sample(g);
    }
    void draw(std::uint64_t slot, SlotDraw& out) const {
        const int m = config_->size();
        out.arrivals.resize(static_cast<std::size_t>(m));
        out.windows.resize(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            out.arrivals[static_cast<std::size_t>(i)] = arrival(slot, i);
            out.windows[static_cast<std::size_t>(i)] = window(slot, i);
        }
    }

    const NetworkConfig& config() const { return *config_; }

  private:
    const NetworkConfig* config_;
    std::uint64_t seed_;
};

// Advances q through one slot in place. Window draws are skipped for empty
// queues; they cannot affect the outcome and every draw is independently
// seeded, so skipping preserves reproducibility. Returns the 1-based index
// of the successful user (0 for none) and the packets it cleared.
inline int advance_slot(const SlotSampler& sampler, std::uint64_t slot,
                        std::vector<std::int64_t>& q, std::int64_t& served) {
    const int m = static_cast<int>(q.size());
    int eligible = 0;
    int who = -1;
    std::int64_t window_who = 0;
    for (int i = 0; i < m; ++i) {
        if (q[static_cast<std::size_t>(i)] >= 1) {
            const std::int64_t w = sampler.window(slot, i);
            if (w >= 1) {
                ++eligible;
                who = i;
                window_who = w;
            }
        }
    }
    served = 0;
    if (eligible == 1) {
        served = std::min(q[static_cast<std::size_t>(who)], window_who);
        q[static_cast<std::size_t>(who)] -= served;
    }
    for (int i = 0; i < m; ++i) q[static_cast<std::size_t>(i)] += sampler.arrival(slot, i);
    return eligible == 1 ? who + 1 : 0;
}

struct TrajectoryRecord {
    std::uint64_t horizon = 0;
    std::uint64_t record_every = 1;

    // sampled rows; slot 0 is the initial state
    std::vector<std::uint64_t> slots;
    std::vector<QueueState> states;
    std::vector<int> success_user;          // 1-based, 0 = none
    std::vector<std::int64_t> served;

    // running aggregates over all slots, recorded or not
    std::vector<std::uint64_t> success_counts;   // per user
    std::vector<std::uint64_t> nonempty_slots;   // slots with Q_i(n) >= 1
    QueueState final_state;
};

struct TrajectoryOptions {
    // 0 = auto: full storage up to 1e5 slots, thinned beyond
    std::uint64_t record_every = 0;
};

TrajectoryRecord simulate_trajectory(const NetworkConfig& config, const QueueState& init,
                                     std::uint64_t horizon, std::uint64_t seed,
                                     const TrajectoryOptions& opts = {});

// CSV columns: slot,q_1..q_M,success_user,served. LF line endings.
void write_trajectory_csv(const TrajectoryRecord& rec, std::ostream& out);

}  // namespace aloha
