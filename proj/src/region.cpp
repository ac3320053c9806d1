#include "aloha/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "aloha/errors.hpp"
#include "aloha/rng.hpp"

namespace aloha {

namespace {

constexpr double kClampLo = 1e-9;
constexpr double kClampHi = 1.0 - 1e-9;
constexpr double kFoundMargin = 1e-12;  // early exit once f < 1 - margin

void check_open_unit(const std::vector<double>& v, const char* name) {
    for (double x : v)
        if (!(x > 0.0 && x < 1.0))
            throw DomainError(std::string(name) + " coordinates must lie in (0,1)");
}

// load sum for single-packet networks, C_i = p_i
double inner_f(const std::vector<double>& lambda, const std::vector<double>& p) {
    return load_sum(lambda, p, p);
}

}  // namespace

std::string to_string(Label l) {
    switch (l) {
        case Label::Recurrent: return "Recurrent";
        case Label::Transient: return "Transient";
        case Label::Indeterminate: return "Indeterminate";
    }
    return "unknown";
}

std::vector<double> offered_rates(const std::vector<double>& mean_window,
                                  const std::vector<double>& attempt_prob) {
    const std::size_t m = mean_window.size();
    if (attempt_prob.size() != m)
        throw DimensionMismatch("mean_window and attempt_prob sizes differ");
    for (double p : attempt_prob)
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError("attempt probabilities must lie in [0,1]");
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) prod *= 1.0 - attempt_prob[j];
        v[i] = mean_window[i] * prod;
    }
    return v;
}

double load_sum(const std::vector<double>& lambda, const std::vector<double>& mean_window,
                const std::vector<double>& attempt_prob) {
    if (lambda.size() != mean_window.size())
        throw DimensionMismatch("lambda and mean_window sizes differ");
    const std::vector<double> v = offered_rates(mean_window, attempt_prob);
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] <= 0.0)
            throw ZeroOfferedRate("offered rate of user " + std::to_string(i) + " is zero");
        sum += lambda[i] / v[i];
    }
    return sum;
}

Verdict classify(const NetworkConfig& config) {
    Verdict out;
    const auto v = offered_rates(config.mean_window(), config.attempt_prob());
    const auto& lambda = config.lambda();

    out.notes.window_binary = config.single_packet();
    out.margins.resize(lambda.size());
    bool all_positive = true;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        out.margins[i] = lambda[i] - v[i];
        all_positive = all_positive && out.margins[i] > 0.0;
    }
    out.load_sum = load_sum(lambda, config.mean_window(), config.attempt_prob());
    out.notes.load_condition_holds = out.load_sum < 1.0;
    out.notes.saturation_condition_holds = all_positive;

    if (out.notes.load_condition_holds && out.notes.window_binary)
        out.label = Label::Recurrent;
    else if (out.notes.saturation_condition_holds && out.notes.fourth_moment_finite)
        out.label = Label::Transient;
    else
        out.label = Label::Indeterminate;
    return out;
}

bool in_inner_region(const std::vector<double>& lambda,
                     const std::vector<double>& attempt_prob) {
    if (lambda.size() != attempt_prob.size())
        throw DimensionMismatch("lambda and attempt_prob sizes differ");
    check_open_unit(lambda, "lambda");
    check_open_unit(attempt_prob, "attempt_prob");
    return inner_f(lambda, attempt_prob) < 1.0;
}

bool in_outer_region(const std::vector<double>& lambda,
                     const std::vector<double>& attempt_prob) {
    if (lambda.size() != attempt_prob.size())
        throw DimensionMismatch("lambda and attempt_prob sizes differ");
    check_open_unit(lambda, "lambda");
    check_open_unit(attempt_prob, "attempt_prob");
    const auto v = offered_rates(attempt_prob, attempt_prob);
    for (std::size_t i = 0; i < lambda.size(); ++i)
        if (lambda[i] < v[i]) return true;
    return false;
}

WitnessResult find_inner_witness(const std::vector<double>& lambda,
                                 const WitnessOptions& opts) {
    check_open_unit(lambda, "lambda");
    const std::size_t m = lambda.size();

    // descend from one start; returns (p, f) with f monotonically improved
    auto descend = [&](std::vector<double> p) {
        for (double& x : p) x = std::clamp(x, kClampLo, kClampHi);
        double f = inner_f(lambda, p);
        for (int it = 0; it < opts.max_iterations; ++it) {
            for (std::size_t i = 0; i < m; ++i) {
                // f(p_i) = a/p_i + b/(1-p_i) with the others fixed
                double others = 1.0;
                for (std::size_t j = 0; j < m; ++j)
                    if (j != i) others *= 1.0 - p[j];
                const double a = lambda[i] / others;
                double b = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    if (k == i) continue;
                    double prod = 1.0;
                    for (std::size_t j = 0; j < m; ++j)
                        if (j != k && j != i) prod *= 1.0 - p[j];
                    b += lambda[k] / (p[k] * prod);
                }
                const double sa = std::sqrt(a);
                const double sb = std::sqrt(b);
                p[i] = std::clamp(sa / (sa + sb), kClampLo, kClampHi);
            }
            const double f_new = inner_f(lambda, p);
            const bool converged = f - f_new <= opts.tolerance;
            f = f_new;
            if (f < 1.0 - kFoundMargin || converged) break;
        }
        return std::pair<std::vector<double>, double>(std::move(p), f);
    };

    // starts: best grid point for small M, random points otherwise
    std::vector<std::vector<double>> starts;
    if (m <= 3) {
        const int g = std::max(2, opts.grid_resolution);
        std::vector<int> idx(m, 0);
        std::vector<double> p(m);
        std::vector<double> best_p;
        double best_f = std::numeric_limits<double>::infinity();
        while (true) {
            for (std::size_t i = 0; i < m; ++i)
                p[i] = static_cast<double>(idx[i] + 1) / static_cast<double>(g + 1);
            const double f = inner_f(lambda, p);
            if (f < best_f) {
                best_f = f;
                best_p = p;
            }
            std::size_t carry = 0;
            while (carry < m && ++idx[carry] == g) idx[carry++] = 0;
            if (carry == m) break;
        }
        starts.push_back(best_p);
    } else {
        for (int s = 0; s < std::max(1, opts.random_starts); ++s) {
            SplitMix64 g{derive_stream(opts.seed, static_cast<std::uint64_t>(s), 0,
                                       StreamTag::WitnessStart)};
            std::vector<double> p(m);
            for (std::size_t i = 0; i < m; ++i) p[i] = 0.02 + 0.96 * uniform01(g);
            starts.push_back(std::move(p));
        }
    }

    // deterministic merge: lowest f wins, ties to the lexicographically
    // smallest p
    WitnessResult best;
    best.best_f = std::numeric_limits<double>::infinity();
    for (auto& s : starts) {
        auto [p, f] = descend(std::move(s));
        if (f < best.best_f || (f == best.best_f && p < best.attempt_prob)) {
            best.best_f = f;
            best.attempt_prob = std::move(p);
        }
        if (best.best_f < 1.0 - kFoundMargin) break;
    }

    // self-verification: report found only when membership re-checks
    best.found = best.best_f < 1.0 && in_inner_region(lambda, best.attempt_prob);
    return best;
}

}  // namespace aloha
