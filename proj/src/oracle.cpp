#include "aloha/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "aloha/errors.hpp"
#include "aloha/region.hpp"

namespace aloha {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kBoundaryThreshold = 1e-6;
constexpr std::uint64_t kMaxStates = 10000000;
constexpr std::uint64_t kDirectSolveLimit = 100000;

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// scenario: one user clears `served` packets (or nobody does)
struct Scenario {
    double prob;
    int user;  // -1 for no success
    std::int64_t served;
};

}  // namespace

std::uint64_t TruncatedChain::encode(const std::vector<std::int64_t>& q) const {
    std::uint64_t idx = 0;
    std::uint64_t base = 1;
    for (int i = 0; i < users; ++i) {
        idx += static_cast<std::uint64_t>(q[static_cast<std::size_t>(i)]) * base;
        base *= static_cast<std::uint64_t>(cap) + 1;
    }
    return idx;
}

std::vector<std::int64_t> TruncatedChain::decode(std::uint64_t idx) const {
    std::vector<std::int64_t> q(static_cast<std::size_t>(users));
    const auto base = static_cast<std::uint64_t>(cap) + 1;
    for (int i = 0; i < users; ++i) {
        q[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(idx % base);
        idx /= base;
    }
    return q;
}

bool TruncatedChain::on_boundary(std::uint64_t idx) const {
    const auto base = static_cast<std::uint64_t>(cap) + 1;
    for (int i = 0; i < users; ++i) {
        if (idx % base == base - 1) return true;
        idx /= base;
    }
    return false;
}

TruncatedChain build_truncated_chain(const NetworkConfig& config, int cap) {
    if (cap < 1) throw InvalidSpec("truncation cap must be >= 1");
    const int m = config.size();
    const double states_est =
        static_cast<double>(m) * std::pow(static_cast<double>(cap) + 1.0, m);
    if (states_est > static_cast<double>(kMaxStates))
        throw StateSpaceTooLarge("truncated chain would need " + std::to_string(states_est) +
                                 " weighted states, limit 1e7");

    TruncatedChain chain;
    chain.users = m;
    chain.cap = cap;
    std::uint64_t n_states = 1;
    for (int i = 0; i < m; ++i) n_states *= static_cast<std::uint64_t>(cap) + 1;
    chain.n_states = n_states;

    std::vector<Distribution::TruncatedSupport> arr(static_cast<std::size_t>(m));
    std::vector<Distribution::TruncatedSupport> win(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        arr[static_cast<std::size_t>(i)] = config.arrival(i).truncated_support();
        win[static_cast<std::size_t>(i)] = config.window(i).truncated_support();
        chain.support_truncated = chain.support_truncated ||
                                  arr[static_cast<std::size_t>(i)].truncated ||
                                  win[static_cast<std::size_t>(i)].truncated;
        chain.dropped_mass += arr[static_cast<std::size_t>(i)].dropped_mass +
                              win[static_cast<std::size_t>(i)].dropped_mass;
    }

    chain.row_ptr.reserve(n_states + 1);
    chain.row_ptr.push_back(0);

    std::vector<std::int64_t> q;
    std::vector<Scenario> scenarios;
    std::vector<std::pair<std::uint32_t, double>> row;
    std::vector<std::size_t> odo(static_cast<std::size_t>(m));

    for (std::uint64_t s = 0; s < n_states; ++s) {
        q = chain.decode(s);
        scenarios.clear();
        row.clear();

        // success scenarios: user i transmits, every other backlogged user
        // stays silent; service is capped by the queue
        double success_total = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto qi = q[static_cast<std::size_t>(i)];
            if (qi < 1) continue;
            double silence = 1.0;
            for (int j = 0; j < m; ++j) {
                if (j == i || q[static_cast<std::size_t>(j)] < 1) continue;
                silence *= win[static_cast<std::size_t>(j)].probs[0];
            }
            const auto& wp = win[static_cast<std::size_t>(i)].probs;
            const auto wmax = static_cast<std::int64_t>(wp.size()) - 1;
            for (std::int64_t served = 1; served <= std::min(qi, wmax + 1); ++served) {
                double pw;
                if (served < qi) {
                    pw = served <= wmax ? wp[static_cast<std::size_t>(served)] : 0.0;
                } else {
                    pw = 0.0;  // tail: W >= q_i all serve q_i packets
                    for (std::int64_t w = qi; w <= wmax; ++w)
                        pw += wp[static_cast<std::size_t>(w)];
                }
                if (pw <= 0.0) continue;
                const double p_scenario = pw * silence;
                scenarios.push_back({p_scenario, i, served});
                success_total += p_scenario;
            }
        }
        scenarios.push_back({std::max(0.0, 1.0 - success_total), -1, 0});

        // convolve each scenario with the product arrival law
        for (const auto& sc : scenarios) {
            if (sc.prob <= 0.0) continue;
            std::fill(odo.begin(), odo.end(), 0);
            for (;;) {
                double pa = 1.0;
                bool clamped = false;
                std::uint64_t t = 0;
                std::uint64_t base = 1;
                for (int i = 0; i < m; ++i) {
                    const auto a = static_cast<std::int64_t>(odo[static_cast<std::size_t>(i)]);
                    pa *= arr[static_cast<std::size_t>(i)].probs[static_cast<std::size_t>(a)];
                    std::int64_t next = q[static_cast<std::size_t>(i)] + a -
                                        (sc.user == i ? sc.served : 0);
                    if (next > cap) {
                        next = cap;
                        clamped = true;
                    }
                    t += static_cast<std::uint64_t>(next) * base;
                    base *= static_cast<std::uint64_t>(cap) + 1;
                }
                const double p = sc.prob * pa;
                if (p > 0.0) {
                    row.emplace_back(static_cast<std::uint32_t>(t), p);
                    if (clamped) chain.boundary_mass += p;
                }
                // odometer over the arrival supports
                int i = 0;
                while (i < m) {
                    auto& d = odo[static_cast<std::size_t>(i)];
                    if (++d < arr[static_cast<std::size_t>(i)].probs.size()) break;
                    d = 0;
                    ++i;
                }
                if (i == m) break;
            }
        }

        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double row_sum = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (!chain.col.empty() && chain.col.size() > chain.row_ptr.back() &&
                chain.col.back() == row[k].first) {
                chain.prob.back() += row[k].second;
            } else {
                chain.col.push_back(row[k].first);
                chain.prob.push_back(row[k].second);
            }
            row_sum += row[k].second;
        }
        if (std::abs(row_sum - 1.0) > kRowSumTol)
            throw Error("transition row " + std::to_string(s) + " sums to " +
                        std::to_string(row_sum));
        chain.row_ptr.push_back(chain.col.size());
    }
    return chain;
}

namespace {

Eigen::VectorXd solve_sparse(SpMat& a, const Eigen::VectorXd& rhs, const char* what) {
    a.makeCompressed();
    Eigen::VectorXd x;
    if (static_cast<std::uint64_t>(a.rows()) <= kDirectSolveLimit) {
        Eigen::SparseLU<SpMat> solver;
        solver.analyzePattern(a);
        solver.factorize(a);
        if (solver.info() != Eigen::Success)
            throw SingularSystem(std::string(what) + ": factorization failed");
        x = solver.solve(rhs);
        if (solver.info() != Eigen::Success)
            throw SingularSystem(std::string(what) + ": solve failed");
    } else {
        Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> solver;
        solver.setTolerance(1e-10);
        solver.compute(a);
        if (solver.info() != Eigen::Success)
            throw SingularSystem(std::string(what) + ": preconditioner failed");
        x = solver.solve(rhs);
        if (solver.info() != Eigen::Success)
            throw SingularSystem(std::string(what) + ": iteration did not converge");
    }
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw SingularSystem(std::string(what) + ": non-finite solution");
    return x;
}

}  // namespace

ExactReturnTime exact_return_time(const TruncatedChain& chain) {
    const std::uint64_t s_count = chain.n_states;
    if (s_count < 2) throw InvalidSpec("chain too small");
    const auto n = static_cast<Eigen::Index>(s_count - 1);  // non-origin states

    ExactReturnTime out;
    out.states = s_count;
    out.boundary_mass = chain.boundary_mass;

    // h(s) = 1 + sum_{t != origin} P(s,t) h(t), origin excluded
    {
        std::vector<Triplet> trips;
        trips.reserve(chain.col.size());
        for (std::uint64_t s = 1; s < s_count; ++s) {
            double diag = 1.0;
            for (std::uint64_t k = chain.row_ptr[s]; k < chain.row_ptr[s + 1]; ++k) {
                const std::uint64_t t = chain.col[k];
                if (t == 0) continue;
                if (t == s)
                    diag -= chain.prob[k];
                else
                    trips.emplace_back(static_cast<int>(s - 1), static_cast<int>(t - 1),
                                       -chain.prob[k]);
            }
            trips.emplace_back(static_cast<int>(s - 1), static_cast<int>(s - 1), diag);
        }
        SpMat a(n, n);
        a.setFromTriplets(trips.begin(), trips.end());
        const Eigen::VectorXd h = solve_sparse(a, Eigen::VectorXd::Ones(n), "return time");

        double et = 1.0;
        for (std::uint64_t k = chain.row_ptr[0]; k < chain.row_ptr[1]; ++k) {
            const std::uint64_t t = chain.col[k];
            if (t != 0) et += chain.prob[k] * h[static_cast<Eigen::Index>(t - 1)];
        }
        out.value = et;
    }

    // u(s) = P(touch the cap before the origin | start s); truncation is
    // trusted only when the origin's escape probability is tiny
    {
        std::vector<Eigen::Index> interior(s_count, -1);
        Eigen::Index n_int = 0;
        for (std::uint64_t s = 1; s < s_count; ++s)
            if (!chain.on_boundary(s)) interior[s] = n_int++;

        Eigen::VectorXd u_int;
        if (n_int > 0) {
            std::vector<Triplet> trips;
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_int);
            for (std::uint64_t s = 1; s < s_count; ++s) {
                const Eigen::Index r = interior[s];
                if (r < 0) continue;
                double diag = 1.0;
                for (std::uint64_t k = chain.row_ptr[s]; k < chain.row_ptr[s + 1]; ++k) {
                    const std::uint64_t t = chain.col[k];
                    if (t == 0) continue;
                    if (chain.on_boundary(t)) {
                        rhs[r] += chain.prob[k];
                    } else if (t == s) {
                        diag -= chain.prob[k];
                    } else {
                        trips.emplace_back(r, interior[t], -chain.prob[k]);
                    }
                }
                trips.emplace_back(r, r, diag);
            }
            SpMat a(n_int, n_int);
            a.setFromTriplets(trips.begin(), trips.end());
            u_int = solve_sparse(a, rhs, "boundary hit");
        }

        double rho = 0.0;
        for (std::uint64_t k = chain.row_ptr[0]; k < chain.row_ptr[1]; ++k) {
            const std::uint64_t t = chain.col[k];
            if (t == 0) continue;
            if (chain.on_boundary(t))
                rho += chain.prob[k];
            else
                rho += chain.prob[k] * u_int[interior[t]];
        }
        out.boundary_hit_prob = rho;
    }

    out.status = out.boundary_hit_prob > kBoundaryThreshold
                     ? ExactReturnTime::Status::TruncationDominated
                     : ExactReturnTime::Status::Ok;
    return out;
}

std::vector<double> saturated_drift(const NetworkConfig& config) {
    const auto v = offered_rates(config.mean_window(), config.attempt_prob());
    std::vector<double> drift(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) drift[i] = config.lambda()[i] - v[i];
    return drift;
}

void write_triplets(const TruncatedChain& chain, std::ostream& out) {
    for (std::uint64_t s = 0; s < chain.n_states; ++s)
        for (std::uint64_t k = chain.row_ptr[s]; k < chain.row_ptr[s + 1]; ++k)
            out << s << ' ' << chain.col[k] << ' ' << chain.prob[k] << '\n';
}

}  // namespace aloha
