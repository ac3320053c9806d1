#include "aloha/dist.hpp"

#include <cmath>
#include <stdexcept>

#include "aloha/errors.hpp"

namespace aloha {

namespace {

constexpr double kPmfSumTol = 1e-12;      // |sum - 1| tolerance for finite laws
constexpr double kTailCutoff = 1e-12;     // enumerate unbounded laws to this tail
constexpr int kMaxEnumeration = 1 << 20;  // hard stop for cdf tables

double poisson_pmf(double mu, std::int64_t k) {
    if (k < 0) return 0.0;
    // exp(k log mu - mu - lgamma(k+1)) is stable for all desk-scale mu
    return std::exp(static_cast<double>(k) * std::log(mu) - mu -
                    std::lgamma(static_cast<double>(k) + 1.0));
}

}  // namespace

std::string to_string(DistKind k) {
    switch (k) {
        case DistKind::Bernoulli: return "bernoulli";
        case DistKind::FinitePmf: return "finite_pmf";
        case DistKind::Poisson: return "poisson";
        case DistKind::Geometric: return "geometric";
    }
    return "unknown";
}

DistributionSpec DistributionSpec::bernoulli(double q) {
    DistributionSpec s;
    s.kind = DistKind::Bernoulli;
    s.p = q;
    return s;
}

DistributionSpec DistributionSpec::finite_pmf(std::vector<double> probs) {
    DistributionSpec s;
    s.kind = DistKind::FinitePmf;
    s.pmf = std::move(probs);
    return s;
}

DistributionSpec DistributionSpec::poisson(double mu) {
    DistributionSpec s;
    s.kind = DistKind::Poisson;
    s.mu = mu;
    return s;
}

DistributionSpec DistributionSpec::geometric(double success_prob) {
    DistributionSpec s;
    s.kind = DistKind::Geometric;
    s.p = success_prob;
    return s;
}

Distribution::Distribution(const DistributionSpec& spec) : spec_(spec) {
    auto& m = moments_;
    switch (spec.kind) {
        case DistKind::Bernoulli: {
            const double q = spec.p;
            if (!(q >= 0.0 && q <= 1.0))
                throw InvalidSpec("bernoulli parameter must be in [0,1]");
            m.mean = q;
            m.fourth_central = q * (1.0 - q) * ((1.0 - q) * (1.0 - q) * (1.0 - q) + q * q * q);
            m.prob_eq_one = q;
            m.prob_geq_one = q;
            support_max_ = q > 0.0 ? 1 : 0;
            break;
        }
        case DistKind::FinitePmf: {
            const auto& pmf = spec.pmf;
            if (pmf.empty()) throw InvalidPmf("finite_pmf requires at least one entry");
            double sum = 0.0;
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                if (!(pmf[k] >= 0.0 && pmf[k] <= 1.0))
                    throw InvalidPmf("finite_pmf entry " + std::to_string(k) +
                                     " outside [0,1]");
                sum += pmf[k];
            }
            if (std::abs(sum - 1.0) > kPmfSumTol)
                throw InvalidPmf("finite_pmf entries sum to " + std::to_string(sum) +
                                 ", expected 1");
            std::int64_t hi = 0;
            double mean = 0.0;
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                mean += static_cast<double>(k) * pmf[k];
                if (pmf[k] > 0.0) hi = static_cast<std::int64_t>(k);
            }
            double m4 = 0.0;
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                const double d = static_cast<double>(k) - mean;
                m4 += pmf[k] * d * d * d * d;
            }
            m.mean = mean;
            m.fourth_central = m4;
            m.prob_eq_one = pmf.size() > 1 ? pmf[1] : 0.0;
            m.prob_geq_one = 1.0 - pmf[0];
            support_max_ = hi;
            cdf_.resize(pmf.size());
            double c = 0.0;
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                c += pmf[k];
                cdf_[k] = c;
            }
            cdf_.back() = 1.0;
            break;
        }
        case DistKind::Poisson: {
            const double mu = spec.mu;
            if (!(mu > 0.0) || !std::isfinite(mu))
                throw InvalidSpec("poisson rate must be positive and finite");
            m.mean = mu;
            m.fourth_central = mu * (1.0 + 3.0 * mu);
            m.prob_eq_one = mu * std::exp(-mu);
            m.prob_geq_one = 1.0 - std::exp(-mu);
            support_max_ = std::nullopt;
            // inversion table up to cumulative mass >= 1 - 1e-12; samples
            // beyond the last entry clamp to it
            double c = 0.0;
            for (int k = 0; k < kMaxEnumeration; ++k) {
                c += poisson_pmf(mu, k);
                cdf_.push_back(c);
                if (c >= 1.0 - kTailCutoff) break;
            }
            if (cdf_.back() < 1.0 - kTailCutoff)
                throw InvalidSpec("poisson rate too large to enumerate");
            break;
        }
        case DistKind::Geometric: {
            const double p = spec.p;
            if (!(p > 0.0 && p <= 1.0))
                throw InvalidSpec("geometric success probability must be in (0,1]");
            const double q = 1.0 - p;
            m.mean = q / p;
            // central fourth moment from raw moments of the failure count
            const double m1 = q / p;
            const double m2 = q * (1.0 + q) / (p * p);
            const double m3 = q * (1.0 + 4.0 * q + q * q) / (p * p * p);
            const double m4 = q * (1.0 + 11.0 * q + 11.0 * q * q + q * q * q) /
                              (p * p * p * p);
            m.fourth_central = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
            m.prob_eq_one = p * q;
            m.prob_geq_one = q;
            support_max_ = p == 1.0 ? std::optional<std::int64_t>(0) : std::nullopt;
            break;
        }
    }
}

double Distribution::pmf(std::int64_t k) const {
    if (k < 0) return 0.0;
    switch (spec_.kind) {
        case DistKind::Bernoulli:
            if (k == 0) return 1.0 - spec_.p;
            if (k == 1) return spec_.p;
            return 0.0;
        case DistKind::FinitePmf:
            return k < static_cast<std::int64_t>(spec_.pmf.size())
                       ? spec_.pmf[static_cast<std::size_t>(k)]
                       : 0.0;
        case DistKind::Poisson:
            return poisson_pmf(spec_.mu, k);
        case DistKind::Geometric:
            return spec_.p * std::pow(1.0 - spec_.p, static_cast<double>(k));
    }
    return 0.0;
}

std::int64_t Distribution::sample(SplitMix64& rng) const {
    const double u = uniform01(rng);
    switch (spec_.kind) {
        case DistKind::Bernoulli:
            return u < 1.0 - spec_.p ? 0 : 1;
        case DistKind::FinitePmf:
        case DistKind::Poisson: {
            // cdf scan; clamp to the last enumerated value
            for (std::size_t k = 0; k < cdf_.size(); ++k)
                if (u < cdf_[k]) return static_cast<std::int64_t>(k);
            return static_cast<std::int64_t>(cdf_.size()) - 1;
        }
        case DistKind::Geometric: {
            if (spec_.p == 1.0) return 0;
            // inversion: X >= k iff u >= 1 - (1-p)^k
            return static_cast<std::int64_t>(
                std::floor(std::log1p(-u) / std::log1p(-spec_.p)));
        }
    }
    return 0;
}

Distribution::TruncatedSupport Distribution::truncated_support() const {
    TruncatedSupport out;
    switch (spec_.kind) {
        case DistKind::Bernoulli:
            if (spec_.p > 0.0)
                out.probs = {1.0 - spec_.p, spec_.p};
            else
                out.probs = {1.0};
            return out;
        case DistKind::FinitePmf: {
            out.probs.assign(spec_.pmf.begin(),
                             spec_.pmf.begin() + (*support_max_ + 1));
            break;
        }
        case DistKind::Poisson:
        case DistKind::Geometric: {
            double c = 0.0;
            std::int64_t k = 0;
            while (c < 1.0 - kTailCutoff && k < kMaxEnumeration) {
                out.probs.push_back(pmf(k));
                c += out.probs.back();
                ++k;
            }
            out.dropped_mass = std::max(0.0, 1.0 - c);
            out.truncated = !support_max_.has_value();
            break;
        }
    }
    double sum = 0.0;
    for (double v : out.probs) sum += v;
    for (double& v : out.probs) v /= sum;
    return out;
}

Distribution make_distribution(const DistributionSpec& spec) {
    return Distribution(spec);
}

DistributionMoments dist_moments(const Distribution& d) { return d.moments(); }

}  // namespace aloha
