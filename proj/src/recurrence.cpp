#include "aloha/recurrence.hpp"

#include <algorithm>
#include <cmath>

#include "aloha/errors.hpp"
#include "aloha/parallel.hpp"
#include "aloha/region.hpp"

namespace aloha {

namespace {

constexpr std::uint64_t kChunk = 256;  // replications per work unit

bool all_zero(const std::vector<std::int64_t>& q) {
    for (auto v : q)
        if (v != 0) return false;
    return true;
}

std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t r) {
    return derive_stream(seed, r, 0, StreamTag::Replication);
}

// sample mean and standard error of the mean from (sum, sum of squares)
std::pair<double, double> mean_se(double sum, double sumsq, std::uint64_t n) {
    const double mean = sum / static_cast<double>(n);
    if (n < 2) return {mean, 0.0};
    double var = (sumsq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

ReturnTimeOutcome sample_return_time(const NetworkConfig& config, std::uint64_t horizon,
                                     std::uint64_t seed) {
    if (horizon < 1) throw InvalidSpec("horizon must be >= 1");
    SlotSampler sampler(config, seed);
    std::vector<std::int64_t> q(static_cast<std::size_t>(config.size()), 0);
    std::int64_t served = 0;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        advance_slot(sampler, n, q, served);
        if (all_zero(q)) return {n, false, horizon};
    }
    return {horizon, true, horizon};
}

std::vector<ReturnTimeOutcome> collect_return_times(const NetworkConfig& config,
                                                    std::uint64_t horizon,
                                                    std::uint64_t replications,
                                                    std::uint64_t seed) {
    if (horizon < 1) throw InvalidSpec("horizon must be >= 1");
    if (replications < 1) throw InvalidSpec("replications must be >= 1");
    std::vector<ReturnTimeOutcome> out(replications);
    parallel_chunks(replications, kChunk,
                    [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
                        for (std::uint64_t r = begin; r < end; ++r)
                            out[r] = sample_return_time(config, horizon,
                                                        replication_seed(seed, r));
                    });
    return out;
}

ReturnTimeStats return_time_stats(const std::vector<ReturnTimeOutcome>& outcomes,
                                  const std::vector<std::uint64_t>& tail_ks) {
    if (outcomes.empty()) throw EmptyInput("no return-time outcomes");
    ReturnTimeStats s;
    s.n_total = outcomes.size();
    double sum_lb = 0.0;
    double sum = 0.0, sumsq = 0.0;
    for (const auto& o : outcomes) {
        if (o.censored) ++s.n_censored;
        const double v = static_cast<double>(o.censored ? o.horizon : o.value);
        sum_lb += v;
        if (!o.censored) {
            sum += v;
            sumsq += v * v;
        }
    }
    s.mean_lower_bound = sum_lb / static_cast<double>(s.n_total);
    if (s.n_censored == 0) {
        auto [m, se] = mean_se(sum, sumsq, s.n_total);
        s.mean = m;
        s.std_error = se;
    }
    for (std::uint64_t k : tail_ks) {
        std::uint64_t hits = 0;
        for (const auto& o : outcomes) {
            // censored at H certifies T >= H + 1
            const bool geq = o.censored ? k <= o.horizon + 1 : o.value >= k;
            if (geq) ++hits;
        }
        s.tail.emplace_back(k, static_cast<double>(hits) / static_cast<double>(s.n_total));
    }
    return s;
}

LyapunovTrace lyapunov_trace(const NetworkConfig& config, std::uint64_t replications,
                             std::uint64_t n_max, std::uint64_t seed) {
    if (!config.single_packet())
        throw NotSinglePacket("lyapunov trace requires window laws supported on {0,1}");
    if (n_max < 1) throw InvalidSpec("n_max must be >= 1");
    if (replications < 1) throw InvalidSpec("replications must be >= 1");

    LyapunovTrace tr;
    tr.n_max = n_max;
    tr.replications = replications;
    tr.offered = offered_rates(config.mean_window(), config.attempt_prob());
    tr.load = load_sum(config.lambda(), config.mean_window(), config.attempt_prob());
    tr.epsilon = 1.0 - tr.load;

    const std::size_t m = static_cast<std::size_t>(config.size());
    const std::size_t n = static_cast<std::size_t>(n_max);

    struct Partial {
        std::vector<double> s, s2;    // per slot: sum and sum of squares of S_r(n)
        std::vector<double> p;        // survivals (0/1 sums)
        std::vector<double> d, d2;    // drift statistic sums, n = 1..n_max-1
    };
    const std::uint64_t chunks = chunk_count(replications, kChunk);
    std::vector<Partial> partials(chunks);

    parallel_chunks(replications, kChunk,
                    [&](std::uint64_t begin, std::uint64_t end, std::size_t c) {
        Partial& acc = partials[c];
        acc.s.assign(n, 0.0);
        acc.s2.assign(n, 0.0);
        acc.p.assign(n, 0.0);
        acc.d.assign(n > 1 ? n - 1 : 0, 0.0);
        acc.d2.assign(n > 1 ? n - 1 : 0, 0.0);
        std::vector<double> srep(n, 0.0);
        std::vector<std::uint8_t> alive(n, 0);
        std::vector<std::int64_t> q(m);
        for (std::uint64_t r = begin; r < end; ++r) {
            std::fill(srep.begin(), srep.end(), 0.0);
            std::fill(alive.begin(), alive.end(), 0);
            std::fill(q.begin(), q.end(), 0);
            SlotSampler sampler(config, replication_seed(seed, r));
            std::int64_t served = 0;
            // contributions vanish once the chain has returned
            for (std::uint64_t slot = 1; slot <= n_max; ++slot) {
                advance_slot(sampler, slot, q, served);
                double sum = 0.0;
                for (std::size_t i = 0; i < m; ++i)
                    sum += static_cast<double>(q[i]) / tr.offered[i];
                srep[slot - 1] = sum;
                alive[slot - 1] = 1;
                if (all_zero(q)) break;  // T = slot
            }
            for (std::size_t k = 0; k < n; ++k) {
                acc.s[k] += srep[k];
                acc.s2[k] += srep[k] * srep[k];
                acc.p[k] += alive[k];
            }
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const double d = srep[k + 1] - srep[k] + tr.epsilon * alive[k + 1];
                acc.d[k] += d;
                acc.d2[k] += d * d;
            }
        }
    });

    // merge in chunk order so results do not depend on thread count
    Partial total;
    total.s.assign(n, 0.0);
    total.s2.assign(n, 0.0);
    total.p.assign(n, 0.0);
    total.d.assign(n > 1 ? n - 1 : 0, 0.0);
    total.d2.assign(n > 1 ? n - 1 : 0, 0.0);
    for (const auto& part : partials) {
        for (std::size_t k = 0; k < n; ++k) {
            total.s[k] += part.s[k];
            total.s2[k] += part.s2[k];
            total.p[k] += part.p[k];
        }
        for (std::size_t k = 0; k + 1 < n; ++k) {
            total.d[k] += part.d[k];
            total.d2[k] += part.d2[k];
        }
    }

    tr.y.resize(n);
    tr.y_se.resize(n);
    tr.tail.resize(n);
    tr.tail_se.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::tie(tr.y[k], tr.y_se[k]) = mean_se(total.s[k], total.s2[k], replications);
        // survival indicators square to themselves
        std::tie(tr.tail[k], tr.tail_se[k]) = mean_se(total.p[k], total.p[k], replications);
    }
    tr.drift.resize(n > 1 ? n - 1 : 0);
    tr.drift_se.resize(tr.drift.size());
    for (std::size_t k = 0; k < tr.drift.size(); ++k)
        std::tie(tr.drift[k], tr.drift_se[k]) = mean_se(total.d[k], total.d2[k], replications);
    return tr;
}

EscapeEstimate escape_probability(const NetworkConfig& config, const QueueState& init,
                                  std::uint64_t horizon, std::uint64_t replications,
                                  std::uint64_t seed) {
    if (init.size() != config.size())
        throw DimensionMismatch("initial state size does not match network");
    if (init.is_origin()) throw InitIsOrigin("escape experiment needs a nonzero start state");
    for (auto v : init.q)
        if (v < 0) throw InvalidSpec("queue lengths must be nonnegative");
    if (horizon < 1) throw InvalidSpec("horizon must be >= 1");
    if (replications < 1) throw InvalidSpec("replications must be >= 1");

    const std::uint64_t chunks = chunk_count(replications, kChunk);
    std::vector<std::uint64_t> never(chunks, 0);
    parallel_chunks(replications, kChunk,
                    [&](std::uint64_t begin, std::uint64_t end, std::size_t c) {
        std::vector<std::int64_t> q;
        for (std::uint64_t r = begin; r < end; ++r) {
            q = init.q;
            SlotSampler sampler(config, replication_seed(seed, r));
            std::int64_t served = 0;
            bool returned = false;
            for (std::uint64_t slot = 1; slot <= horizon; ++slot) {
                advance_slot(sampler, slot, q, served);
                if (all_zero(q)) {
                    returned = true;
                    break;
                }
            }
            if (!returned) ++never[c];
        }
    });

    EscapeEstimate est;
    est.replications = replications;
    for (auto v : never) est.never_returned += v;
    const double nn = static_cast<double>(replications);
    const double ph = static_cast<double>(est.never_returned) / nn;
    est.p_hat = ph;
    const double z = 1.959963984540054;  // 95%
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (ph + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
    est.ci_low = std::min(std::max(0.0, center - half), ph);
    est.ci_high = std::max(std::min(1.0, center + half), ph);
    return est;
}

QueueState default_saturated_init(const NetworkConfig& config, int k) {
    double c_max = 0.0;
    for (double c : config.mean_window()) c_max = std::max(c_max, c);
    const double delta = 3.0 * c_max;
    const auto level = static_cast<std::int64_t>(std::ceil(delta * k));
    return {std::vector<std::int64_t>(static_cast<std::size_t>(config.size()),
                                      std::max<std::int64_t>(1, level))};
}

}  // namespace aloha
