#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aloha/rng.hpp"

namespace aloha {

enum class DistKind { Bernoulli, FinitePmf, Poisson, Geometric };

std::string to_string(DistKind k);

// Parameter record for a discrete nonnegative-integer law. Only the fields
// relevant to `kind` are meaningful.
struct DistributionSpec {
    DistKind kind = DistKind::Bernoulli;
    double p = 0.0;            // bernoulli success prob / geometric success prob
    double mu = 0.0;           // poisson rate
    std::vector<double> pmf;   // finite law over {0..K}, index = value

    static DistributionSpec bernoulli(double q);
    static DistributionSpec finite_pmf(std::vector<double> probs);
    static DistributionSpec poisson(double mu);
    static DistributionSpec geometric(double success_prob);

    bool operator==(const DistributionSpec&) const = default;
};

// Closed-form moment summary. All supported kinds have finite fourth moment.
struct DistributionMoments {
    double mean = 0.0;
    double fourth_central = 0.0;
    double prob_eq_one = 0.0;
    double prob_geq_one = 0.0;
};

// Immutable sampleable law. Construction validates the spec; objects are
// safe to share across threads. Sampling is single-uniform cdf inversion,
// so one value costs one 64-bit draw.
class Distribution {
  public:
    explicit Distribution(const DistributionSpec& spec);

    const DistributionSpec& spec() const { return spec_; }
    DistKind kind() const { return spec_.kind; }
    const DistributionMoments& moments() const { return moments_; }

    // P(X = 1) > 0, required of every arrival and window law in a network.
    bool has_mass_at_one() const { return moments_.prob_eq_one > 0.0; }

    // Largest support point, or nullopt for unbounded laws.
    std::optional<std::int64_t> support_max() const { return support_max_; }

    // Support contained in {0, 1}.
    bool binary_support() const {
        return support_max_.has_value() && *support_max_ <= 1;
    }

    double pmf(std::int64_t k) const;

    std::int64_t sample(SplitMix64& rng) const;

    // Finite support with total mass >= 1 - 1e-12, renormalized to sum to
    // one. Exact for bernoulli/finite laws; truncates poisson/geometric
    // tails and reports the dropped mass.
    struct TruncatedSupport {
        std::vector<double> probs;  // index = value
        double dropped_mass = 0.0;
        bool truncated = false;
    };
    TruncatedSupport truncated_support() const;

  private:
    DistributionSpec spec_;
    DistributionMoments moments_;
    std::optional<std::int64_t> support_max_;
    std::vector<double> cdf_;  // inversion table (finite_pmf, poisson)
};

Distribution make_distribution(const DistributionSpec& spec);

DistributionMoments dist_moments(const Distribution& d);

}  // namespace aloha
