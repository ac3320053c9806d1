#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aloha/chain.hpp"

namespace aloha {

enum class Label { Recurrent, Transient, Indeterminate };

std::string to_string(Label l);

// Hypothesis flags backing a verdict.
struct VerdictNotes {
    bool window_binary = false;
    bool fourth_moment_finite = true;  // all supported laws qualify
    bool load_condition_holds = false; // load_sum < 1
    bool saturation_condition_holds = false; // every margin > 0
};

// Classifier output with its certificates. Recurrent requires the load sum
// below one AND binary windows; Transient requires every margin positive.
// The two conditions are mutually exclusive for any valid network.
struct Verdict {
    Label label = Label::Indeterminate;
    double load_sum = 0.0;
    std::vector<double> margins;  // lambda_i - v_i
    VerdictNotes notes;
};

// v_i = C_i * prod_{j != i} (1 - p_j); the empty product is 1.
std::vector<double> offered_rates(const std::vector<double>& mean_window,
                                  const std::vector<double>& attempt_prob);

// sum_i lambda_i / v_i. Throws ZeroOfferedRate when some v_i = 0.
double load_sum(const std::vector<double>& lambda, const std::vector<double>& mean_window,
                const std::vector<double>& attempt_prob);

Verdict classify(const NetworkConfig& config);

// Membership in the single-packet load-sum region for a fixed attempt
// vector: sum_i lambda_i / (p_i prod_{j != i} (1 - p_j)) < 1. Requires all
// coordinates strictly inside (0,1).
bool in_inner_region(const std::vector<double>& lambda, const std::vector<double>& attempt_prob);

// Some user is below its solo service rate: lambda_i < p_i prod_{j != i}(1 - p_j).
bool in_outer_region(const std::vector<double>& lambda, const std::vector<double>& attempt_prob);

struct WitnessOptions {
    int grid_resolution = 25;      // per-axis init grid for M <= 3
    int random_starts = 64;        // used for M > 3
    double tolerance = 1e-9;       // stop when a sweep improves f by less
    int max_iterations = 10000;    // coordinate-descent sweeps per start
    std::uint64_t seed = 0x57a57a5eedULL;  // seeds the random starts
    bool operator==(const WitnessOptions&) const = default;
};

struct WitnessResult {
    bool found = false;
    std::vector<double> attempt_prob;  // best point even when not found
    double best_f = 0.0;               // load sum at attempt_prob
};

// Searches (0,1)^M for an attempt vector whose single-packet load sum is
// below one. Multi-start coordinate descent; each coordinate update is the
// exact minimizer of a/p + b/(1-p), clamped to [1e-9, 1-1e-9]. Returns the
// best point found either way; `found` only after re-verifying membership.
WitnessResult find_inner_witness(const std::vector<double>& lambda,
                                 const WitnessOptions& opts = {});

}  // namespace aloha
