#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aloha/config_io.hpp"

namespace aloha {

struct SweepRow {
    std::vector<double> lambda;
    bool witness_found = false;
    double best_f = 0.0;
    std::vector<double> attempt_prob;  // best point of the witness search
    Label verdict = Label::Indeterminate;
    double load_sum = 0.0;  // classify() on the Bernoulli network at attempt_prob
    std::optional<double> mc_mean;
    std::optional<std::uint64_t> mc_censored;
};

struct SweepTable {
    int dims = 0;
    bool mc_validated = false;
    std::vector<SweepRow> rows;
};

struct RegionScanOptions {
    WitnessOptions witness;
    std::uint64_t seed = 1;
    bool mc_validate = false;
    std::uint64_t mc_horizon = 10000;
    std::uint64_t mc_replications = 200;
    std::size_t mc_budget = 20;  // validated points, chosen nearest the boundary
};

// Witness search over a product grid of arrival-rate axes (diagonal = one
// axis applied to every user). Rows come out in grid order with axis 0
// outermost; points are processed in parallel. Limited to 1-3 users and
// 1e5 points.
SweepTable region_scan(const std::vector<std::vector<double>>& axes, bool diagonal,
                       int dims, const RegionScanOptions& opts = {});

// Columns: lambda_1..lambda_M,witness_found,best_f,verdict,load_sum and,
// for validated tables, mc_mean,mc_censored. '.' decimal, LF endings.
void write_sweep_csv(const SweepTable& table, std::ostream& out);

namespace cli {

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 success, 2 validation error, 1 runtime error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cli

}  // namespace aloha
