#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "aloha/chain.hpp"

namespace aloha {

// Exact transition model of the queue chain on the box {0..cap}^M, stored
// as a CSR row-stochastic matrix. Next-state coordinates above cap are
// clamped to cap; the clamped probability, summed over all rows, is
// boundary_mass. Unbounded arrival/window laws are truncated at cumulative
// mass >= 1 - 1e-12 and renormalized; dropped_mass records what was cut.
struct TruncatedChain {
    int users = 0;
    int cap = 0;
    std::uint64_t n_states = 0;

    std::vector<std::uint64_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> prob;

    double boundary_mass = 0.0;
    bool support_truncated = false;
    double dropped_mass = 0.0;

    std::uint64_t encode(const std::vector<std::int64_t>& q) const;
    std::vector<std::int64_t> decode(std::uint64_t idx) const;
    bool on_boundary(std::uint64_t idx) const;
};

// Guard: users * (cap+1)^users must stay within 1e7.
TruncatedChain build_truncated_chain(const NetworkConfig& config, int cap);

struct ExactReturnTime {
    enum class Status { Ok, TruncationDominated };
    Status status = Status::Ok;
    // expected slots to re-reach the all-empty state from itself;
    // trustworthy only when status is Ok
    double value = 0.0;
    // probability of touching the cap before returning, from the origin;
    // above 1e-6 the truncation dominates and the value is refused
    double boundary_hit_prob = 0.0;
    double boundary_mass = 0.0;
    std::uint64_t states = 0;
};

// Expected return time to the origin via the linear hitting-time system.
// Direct sparse factorization up to 1e5 states, BiCGSTAB beyond (relative
// residual < 1e-10). Throws SingularSystem when the solve fails.
ExactReturnTime exact_return_time(const TruncatedChain& chain);

// lambda_i - v_i: mean one-slot queue increment while every queue is
// nonempty and service is not capped by queue length.
std::vector<double> saturated_drift(const NetworkConfig& config);

// One "row col prob" line per transition.
void write_triplets(const TruncatedChain& chain, std::ostream& out);

}  // namespace aloha
