#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aloha/chain.hpp"

namespace aloha {

// One replication of the return-time experiment. T is the first slot
// k >= 1 with every queue empty, starting from the all-empty state.
struct ReturnTimeOutcome {
    std::uint64_t value = 0;    // T when uncensored, horizon otherwise
    bool censored = false;
    std::uint64_t horizon = 0;
};

// Censored-sample summary. The plain mean exists only for fully uncensored
// sample sets; otherwise only the lower bound (censored values counted at
// their horizon) is reported. Tail entries beyond a censoring horizon are
// lower bounds.
struct ReturnTimeStats {
    std::uint64_t n_total = 0;
    std::uint64_t n_censored = 0;
    std::optional<double> mean;
    std::optional<double> std_error;
    double mean_lower_bound = 0.0;
    std::vector<std::pair<std::uint64_t, double>> tail;  // (k, P(T >= k))
};

ReturnTimeOutcome sample_return_time(const NetworkConfig& config, std::uint64_t horizon,
                                     std::uint64_t seed);

// replications independent runs; replication r is seeded by the avalanche
// mix of (seed, r), so the set is reproducible and parallelism-invariant.
std::vector<ReturnTimeOutcome> collect_return_times(const NetworkConfig& config,
                                                    std::uint64_t horizon,
                                                    std::uint64_t replications,
                                                    std::uint64_t seed);

ReturnTimeStats return_time_stats(const std::vector<ReturnTimeOutcome>& outcomes,
                                  const std::vector<std::uint64_t>& tail_ks = {});

// Monte Carlo estimates of the weighted surviving-queue mass
//   y_n = sum_i E[Q_i(n) 1(T >= n)] / v_i
// together with P(T >= n) and the per-slot drift statistic
//   d_n = y_{n+1} - y_n + epsilon P(T >= n+1),  epsilon = 1 - load_sum,
// whose mean is <= 0 for any single-packet network with load_sum < 1.
// Index [n-1] holds slot n; drift has n_max - 1 entries.
struct LyapunovTrace {
    std::uint64_t n_max = 0;
    std::uint64_t replications = 0;
    double load = 0.0;
    double epsilon = 0.0;
    std::vector<double> offered;  // v_i
    std::vector<double> y, y_se;
    std::vector<double> tail, tail_se;
    std::vector<double> drift, drift_se;
};

// Requires a single-packet network (every window law supported on {0,1}).
LyapunovTrace lyapunov_trace(const NetworkConfig& config, std::uint64_t replications,
                             std::uint64_t n_max, std::uint64_t seed);

struct EscapeEstimate {
    std::uint64_t replications = 0;
    std::uint64_t never_returned = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;   // Wilson 95% interval
    double ci_high = 0.0;
};

// Fraction of replications that never visit the all-empty state within the
// horizon, started from init (which must not be the origin).
EscapeEstimate escape_probability(const NetworkConfig& config, const QueueState& init,
                                  std::uint64_t horizon, std::uint64_t replications,
                                  std::uint64_t seed);

// Start-state convention for escape experiments: every queue at
// ceil(3 K max_i C_i), with K defaulting to 10.
QueueState default_saturated_init(const NetworkConfig& config, int k = 10);

}  // namespace aloha
