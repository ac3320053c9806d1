#include "aloha/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aloha/errors.hpp"
#include "aloha/oracle.hpp"
#include "aloha/parallel.hpp"
#include "aloha/recurrence.hpp"

namespace aloha {

namespace {

using nlohmann::json;

constexpr std::uint64_t kMaxGridPoints = 100000;

// shortest round-trip decimal; keeps CSV locale-free
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

NetworkConfig bernoulli_network(const std::vector<double>& lambda,
                                const std::vector<double>& attempt_prob) {
    std::vector<UserSpec> users;
    users.reserve(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i)
        users.push_back({DistributionSpec::bernoulli(lambda[i]),
                         DistributionSpec::bernoulli(attempt_prob[i])});
    return NetworkConfig(users);
}

}  // namespace

SweepTable region_scan(const std::vector<std::vector<double>>& axes, bool diagonal,
                       int dims, const RegionScanOptions& opts) {
    if (axes.empty()) throw EmptyGrid("no grid axes given");
    for (const auto& axis : axes)
        if (axis.empty()) throw EmptyGrid("empty grid axis");
    if (diagonal) {
        if (axes.size() != 1)
            throw DomainError("diagonal scans take exactly one axis");
        if (dims < 1) throw DomainError("diagonal scans need the dimension");
    } else {
        dims = static_cast<int>(axes.size());
    }
    if (dims < 1 || dims > 3)
        throw DomainError("tabular scans support 1 to 3 users");
    for (const auto& axis : axes)
        for (double v : axis)
            if (!(v > 0.0 && v < 1.0))
                throw DomainError("grid arrival rates must lie in (0,1)");

    std::uint64_t n_points = 1;
    if (diagonal) {
        n_points = axes[0].size();
    } else {
        for (const auto& axis : axes) {
            n_points *= axis.size();
            if (n_points > kMaxGridPoints) throw GridTooLarge("grid exceeds 1e5 points");
        }
    }
    if (n_points > kMaxGridPoints) throw GridTooLarge("grid exceeds 1e5 points");

    const auto m = static_cast<std::size_t>(dims);
    auto point_at = [&](std::uint64_t idx) {
        std::vector<double> lambda(m);
        if (diagonal) {
            std::fill(lambda.begin(), lambda.end(), axes[0][idx]);
        } else {
            // axis 0 outermost
            for (std::size_t a = m; a-- > 0;) {
                lambda[a] = axes[a][idx % axes[a].size()];
                idx /= axes[a].size();
            }
        }
        return lambda;
    };

    SweepTable table;
    table.dims = dims;
    table.mc_validated = opts.mc_validate;
    table.rows.resize(n_points);

    parallel_chunks(n_points, 16, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
        for (std::uint64_t i = begin; i < end; ++i) {
            SweepRow& row = table.rows[i];
            row.lambda = point_at(i);
            const WitnessResult res = find_inner_witness(row.lambda, opts.witness);
            row.witness_found = res.found;
            row.best_f = res.best_f;
            row.attempt_prob = res.attempt_prob;
            const Verdict v = classify(bernoulli_network(row.lambda, row.attempt_prob));
            row.load_sum = v.load_sum;
            row.verdict = res.found ? v.label : Label::Indeterminate;
        }
    });

    if (opts.mc_validate && !table.rows.empty()) {
        // validate the points closest to the membership boundary
        std::vector<std::size_t> order(table.rows.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(table.rows[a].best_f - 1.0) < std::abs(table.rows[b].best_f - 1.0);
        });
        const std::size_t budget = std::min(opts.mc_budget, order.size());
        for (std::size_t k = 0; k < budget; ++k) {
            SweepRow& row = table.rows[order[k]];
            const NetworkConfig net = bernoulli_network(row.lambda, row.attempt_prob);
            const auto outcomes = collect_return_times(
                net, opts.mc_horizon, opts.mc_replications,
                derive_stream(opts.seed, order[k], 0, StreamTag::ScanRow));
            const ReturnTimeStats stats = return_time_stats(outcomes);
            row.mc_mean = stats.mean;
            row.mc_censored = stats.n_censored;
        }
    }
    return table;
}

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
    for (int i = 1; i <= table.dims; ++i) out << "lambda_" << i << ',';
    out << "witness_found,best_f,verdict,load_sum";
    if (table.mc_validated) out << ",mc_mean,mc_censored";
    out << '\n';
    for (const auto& row : table.rows) {
        for (double l : row.lambda) out << fmt(l) << ',';
        out << (row.witness_found ? "true" : "false") << ',' << fmt(row.best_f) << ','
            << to_string(row.verdict) << ',' << fmt(row.load_sum);
        if (table.mc_validated) {
            out << ',';
            if (row.mc_mean) out << fmt(*row.mc_mean);
            out << ',';
            if (row.mc_censored) out << *row.mc_censored;
        }
        out << '\n';
    }
}

namespace cli {

namespace {

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw DomainError(std::string(what) + ": cannot parse '" + tok + "'");
        }
    }
    if (out.empty()) throw DomainError(std::string(what) + ": empty list");
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const char* what) {
    std::vector<std::int64_t> out;
    for (double v : parse_double_list(text, what)) {
        if (v < 0 || v != std::floor(v))
            throw DomainError(std::string(what) + ": expected nonnegative integers");
        out.push_back(static_cast<std::int64_t>(v));
    }
    return out;
}

// axes separated by ';', entries by ','; an entry may be lo:hi:step
std::vector<std::vector<double>> parse_grid(const std::string& text) {
    std::vector<std::vector<double>> axes;
    std::stringstream ss(text);
    std::string axis_text;
    while (std::getline(ss, axis_text, ';')) {
        std::vector<double> axis;
        std::stringstream as(axis_text);
        std::string tok;
        while (std::getline(as, tok, ',')) {
            const auto c1 = tok.find(':');
            if (c1 == std::string::npos) {
                axis.push_back(std::stod(tok));
                continue;
            }
            const auto c2 = tok.find(':', c1 + 1);
            if (c2 == std::string::npos)
                throw DomainError("--grid range needs lo:hi:step, got '" + tok + "'");
            const double lo = std::stod(tok.substr(0, c1));
            const double hi = std::stod(tok.substr(c1 + 1, c2 - c1 - 1));
            const double step = std::stod(tok.substr(c2 + 1));
            if (!(step > 0.0)) throw DomainError("--grid step must be positive");
            for (int k = 0;; ++k) {
                const double v = lo + static_cast<double>(k) * step;
                if (v > hi + step * 0.5) break;
                axis.push_back(v);
            }
        }
        axes.push_back(std::move(axis));
    }
    return axes;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << bytes;
    if (!out) throw Error("short write to '" + path + "'");
}

json verdict_to_json(const Verdict& v) {
    return json{{"label", to_string(v.label)},
                {"load_sum", v.load_sum},
                {"margins", v.margins},
                {"notes",
                 {{"window_binary", v.notes.window_binary},
                  {"fourth_moment_finite", v.notes.fourth_moment_finite},
                  {"load_condition_holds", v.notes.load_condition_holds},
                  {"saturation_condition_holds", v.notes.saturation_condition_holds}}}};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// flag values; presence tracked so config values stay in charge otherwise
struct Flags {
    std::string config_path;
    std::string out_path;
    std::string export_path;
    std::uint64_t seed = 0;
    std::uint64_t horizon = 0;
    std::uint64_t replications = 0;
    std::uint64_t record_every = 0;
    int truncation = 0;
    int dims = 0;
    int grid_resolution = 0;
    int starts = 0;
    int max_iterations = 0;
    double tolerance = 0.0;
    std::string lambda_text;
    std::string init_text;
    std::string tail_text;
    std::string grid_text;
    bool symmetric = false;
    bool mc_validate = false;
};

struct Cmd {
    CLI::App* app = nullptr;
    Flags f;
};

void add_common(Cmd& c) {
    c.app->add_option("--config", c.f.config_path, "experiment config JSON");
    c.app->add_option("--seed", c.f.seed, "64-bit master seed (overrides config)");
}

ExperimentConfig effective_config(const Cmd& c) {
    ExperimentConfig cfg;
    if (!c.f.config_path.empty()) cfg = load_config(c.f.config_path);
    const auto set = [&](const char* flag) { return c.app->count(flag) > 0; };
    if (set("--seed")) cfg.seed = c.f.seed;
    if (c.app->get_option_no_throw("--horizon") && set("--horizon")) cfg.horizon = c.f.horizon;
    if (c.app->get_option_no_throw("--replications") && set("--replications"))
        cfg.replications = c.f.replications;
    if (c.app->get_option_no_throw("--truncation") && set("--truncation"))
        cfg.truncation = c.f.truncation;
    if (c.app->get_option_no_throw("--init") && set("--init"))
        cfg.init = parse_int_list(c.f.init_text, "--init");
    if (c.app->get_option_no_throw("--tail") && set("--tail")) {
        std::vector<std::uint64_t> ks;
        for (auto v : parse_int_list(c.f.tail_text, "--tail"))
            ks.push_back(static_cast<std::uint64_t>(v));
        cfg.tail_ks = ks;
    }
    // witness-search knobs
    const bool any_witness_flag =
        (c.app->get_option_no_throw("--grid-resolution") && set("--grid-resolution")) ||
        (c.app->get_option_no_throw("--starts") && set("--starts")) ||
        (c.app->get_option_no_throw("--tolerance") && set("--tolerance")) ||
        (c.app->get_option_no_throw("--max-iterations") && set("--max-iterations"));
    if (any_witness_flag || cfg.witness) {
        WitnessOptions w = cfg.witness.value_or(WitnessOptions{});
        if (c.app->get_option_no_throw("--grid-resolution") && set("--grid-resolution"))
            w.grid_resolution = c.f.grid_resolution;
        if (c.app->get_option_no_throw("--starts") && set("--starts"))
            w.random_starts = c.f.starts;
        if (c.app->get_option_no_throw("--tolerance") && set("--tolerance"))
            w.tolerance = c.f.tolerance;
        if (c.app->get_option_no_throw("--max-iterations") && set("--max-iterations"))
            w.max_iterations = c.f.max_iterations;
        cfg.witness = w;
    }
    return cfg;
}

json output_header(const char* command, const ExperimentConfig& cfg) {
    return json{{"command", command},
                {"config_digest", config_digest(cfg)},
                {"seed", cfg.seed}};
}

int cmd_classify(const Cmd& c, std::ostream& out) {
    const ExperimentConfig cfg = effective_config(c);
    const NetworkConfig net = build_network(cfg);
    json j = output_header("classify", cfg);
    j["users"] = net.size();
    j["lambda"] = net.lambda();
    j["mean_window"] = net.mean_window();
    j["attempt_prob"] = net.attempt_prob();
    j["verdict"] = verdict_to_json(classify(net));
    emit(out, j);
    return 0;
}

int cmd_witness(const Cmd& c, std::ostream& out) {
    ExperimentConfig cfg = effective_config(c);
    std::vector<double> lambda;
    if (!c.f.lambda_text.empty())
        lambda = parse_double_list(c.f.lambda_text, "--lambda");
    else if (!cfg.users.empty())
        lambda = build_network(cfg).lambda();
    else
        throw ValidationError("witness needs --lambda or a config with users");
    const WitnessOptions opts = cfg.witness.value_or(WitnessOptions{});
    cfg.witness = opts;  // digest reflects the options actually used
    const WitnessResult res = find_inner_witness(lambda, opts);
    json j = output_header("witness", cfg);
    j["lambda"] = lambda;
    j["found"] = res.found;
    j["best_f"] = res.best_f;
    j["attempt_prob"] = res.attempt_prob;
    emit(out, j);
    return 0;
}

int cmd_simulate(const Cmd& c, std::ostream& out) {
    const ExperimentConfig cfg = effective_config(c);
    const NetworkConfig net = build_network(cfg);
    const std::uint64_t horizon = cfg.horizon.value_or(1000);
    QueueState init = QueueState::origin(net.size());
    if (cfg.init) init = QueueState{*cfg.init};
    TrajectoryOptions topts;
    if (c.app->count("--record-every") > 0) topts.record_every = c.f.record_every;
    const TrajectoryRecord rec = simulate_trajectory(net, init, horizon, cfg.seed, topts);
    if (!c.f.out_path.empty()) {
        std::ostringstream csv;
        write_trajectory_csv(rec, csv);
        write_file(c.f.out_path, csv.str());
    }
    json j = output_header("simulate", cfg);
    j["horizon"] = horizon;
    j["init"] = init.q;
    j["record_every"] = rec.record_every;
    j["recorded_rows"] = rec.slots.size();
    j["final_state"] = rec.final_state.q;
    j["success_counts"] = rec.success_counts;
    j["nonempty_slots"] = rec.nonempty_slots;
    emit(out, j);
    return 0;
}

int cmd_return_times(const Cmd& c, std::ostream& out) {
    const ExperimentConfig cfg = effective_config(c);
    const NetworkConfig net = build_network(cfg);
    const std::uint64_t horizon = cfg.horizon.value_or(1000000);
    const std::uint64_t reps = cfg.replications.value_or(1000);
    const std::vector<std::uint64_t> ks =
        cfg.tail_ks.value_or(std::vector<std::uint64_t>{1, 2, 5, 10, 20, 50, 100});
    const auto outcomes = collect_return_times(net, horizon, reps, cfg.seed);
    const ReturnTimeStats stats = return_time_stats(outcomes, ks);
    json j = output_header("return-times", cfg);
    j["horizon"] = horizon;
    j["replications"] = reps;
    if (stats.mean) j["mean"] = *stats.mean;
    if (stats.std_error) j["std_error"] = *stats.std_error;
    j["mean_lower_bound"] = stats.mean_lower_bound;
    j["n_censored"] = stats.n_censored;
    json tail = json::array();
    for (const auto& [k, p] : stats.tail) tail.push_back(json::array({k, p}));
    j["tail"] = std::move(tail);
    if (!c.f.out_path.empty()) {
        std::ostringstream csv;
        csv << "k,tail_prob\n";
        for (const auto& [k, p] : stats.tail) csv << k << ',' << fmt(p) << '\n';
        write_file(c.f.out_path, csv.str());
    }
    emit(out, j);
    return 0;
}

int cmd_lyapunov(const Cmd& c, std::ostream& out) {
    const ExperimentConfig cfg = effective_config(c);
    const NetworkConfig net = build_network(cfg);
    const std::uint64_t n_max = cfg.horizon.value_or(50);
    const std::uint64_t reps = cfg.replications.value_or(1000);
    const LyapunovTrace tr = lyapunov_trace(net, reps, n_max, cfg.seed);
    json j = output_header("lyapunov", cfg);
    j["n_max"] = tr.n_max;
    j["replications"] = tr.replications;
    j["load"] = tr.load;
    j["epsilon"] = tr.epsilon;
    j["offered"] = tr.offered;
    j["y"] = tr.y;
    j["y_se"] = tr.y_se;
    j["tail"] = tr.tail;
    j["tail_se"] = tr.tail_se;
    j["drift"] = tr.drift;
    j["drift_se"] = tr.drift_se;
    if (!c.f.out_path.empty()) {
        std::ostringstream csv;
        csv << "n,y,y_se,tail,tail_se,drift,drift_se\n";
        for (std::size_t k = 0; k < tr.y.size(); ++k) {
            csv << (k + 1) << ',' << fmt(tr.y[k]) << ',' << fmt(tr.y_se[k]) << ','
                << fmt(tr.tail[k]) << ',' << fmt(tr.tail_se[k]) << ',';
            if (k < tr.drift.size()) csv << fmt(tr.drift[k]) << ',' << fmt(tr.drift_se[k]);
            else csv << ',';
            csv << '\n';
        }
        write_file(c.f.out_path, csv.str());
    }
    emit(out, j);
    return 0;
}

int cmd_escape(const Cmd& c, std::ostream& out) {
    const ExperimentConfig cfg = effective_config(c);
    const NetworkConfig net = build_network(cfg);
    const std::uint64_t horizon = cfg.horizon.value_or(100000);
    const std::uint64_t reps = cfg.replications.value_or(1000);
    const QueueState init =
        cfg.init ? QueueState{*cfg.init} : default_saturated_init(net);
    const EscapeEstimate est = escape_probability(net, init, horizon, reps, cfg.seed);
    json j = output_header("escape", cfg);
    j["horizon"] = horizon;
    j["replications"] = est.replications;
    j["init"] = init.q;
    j["never_returned"] = est.never_returned;
    j["p_hat"] = est.p_hat;
    j["ci_low"] = est.ci_low;
    j["ci_high"] = est.ci_high;
    emit(out, j);
    return 0;
}

int cmd_oracle(const Cmd& c, std::ostream& out) {
    const ExperimentConfig cfg = effective_config(c);
    const NetworkConfig net = build_network(cfg);
    const int cap = cfg.truncation.value_or(50);
    const TruncatedChain chain = build_truncated_chain(net, cap);
    if (!c.f.export_path.empty()) {
        std::ostringstream txt;
        write_triplets(chain, txt);
        write_file(c.f.export_path, txt.str());
    }
    const ExactReturnTime ert = exact_return_time(chain);
    json j = output_header("oracle", cfg);
    j["truncation"] = cap;
    j["states"] = ert.states;
    j["status"] = ert.status == ExactReturnTime::Status::Ok ? "ok" : "truncation_dominated";
    if (ert.status == ExactReturnTime::Status::Ok) j["expected_return_time"] = ert.value;
    j["boundary_hit_prob"] = ert.boundary_hit_prob;
    j["boundary_mass"] = ert.boundary_mass;
    j["support_truncated"] = chain.support_truncated;
    j["saturated_drift"] = saturated_drift(net);
    emit(out, j);
    return 0;
}

int cmd_region_scan(const Cmd& c, std::ostream& out) {
    ExperimentConfig cfg = effective_config(c);
    SweepSpec sweep = cfg.sweep.value_or(SweepSpec{});
    if (!c.f.grid_text.empty()) sweep.axes = parse_grid(c.f.grid_text);
    if (c.f.symmetric) sweep.diagonal = true;
    if (c.f.dims > 0) sweep.dims = c.f.dims;
    if (c.f.mc_validate) sweep.mc_validate = true;
    if (sweep.diagonal && sweep.dims == 0 && !cfg.users.empty())
        sweep.dims = static_cast<int>(cfg.users.size());
    cfg.sweep = sweep;  // digest covers the scan actually performed

    RegionScanOptions opts;
    opts.witness = cfg.witness.value_or(WitnessOptions{});
    opts.seed = cfg.seed;
    opts.mc_validate = sweep.mc_validate;
    if (cfg.horizon) opts.mc_horizon = *cfg.horizon;
    if (cfg.replications) opts.mc_replications = *cfg.replications;

    const SweepTable table = region_scan(sweep.axes, sweep.diagonal, sweep.dims, opts);
    if (!c.f.out_path.empty()) {
        std::ostringstream csv;
        write_sweep_csv(table, csv);
        write_file(c.f.out_path, csv.str());
    }
    json j = output_header("region-scan", cfg);
    j["dims"] = table.dims;
    j["points"] = table.rows.size();
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r;
        r["lambda"] = row.lambda;
        r["witness_found"] = row.witness_found;
        r["best_f"] = row.best_f;
        r["attempt_prob"] = row.attempt_prob;
        r["verdict"] = to_string(row.verdict);
        r["load_sum"] = row.load_sum;
        if (table.mc_validated) {
            r["mc_mean"] = row.mc_mean ? json(*row.mc_mean) : json(nullptr);
            r["mc_censored"] = row.mc_censored ? json(*row.mc_censored) : json(nullptr);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    emit(out, j);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite-user slotted Aloha: simulation, classification and "
                 "recurrence experiments"};
    app.require_subcommand(1);

    Cmd classify_c, witness_c, simulate_c, return_c, lyapunov_c, escape_c, oracle_c, scan_c;

    classify_c.app = app.add_subcommand("classify", "stability verdict for a network");
    add_common(classify_c);

    witness_c.app = app.add_subcommand("witness", "search for an attempt vector with "
                                                  "load sum below one");
    add_common(witness_c);
    witness_c.app->add_option("--lambda", witness_c.f.lambda_text,
                              "comma-separated arrival rates");
    witness_c.app->add_option("--grid-resolution", witness_c.f.grid_resolution,
                              "init grid points per axis");
    witness_c.app->add_option("--starts", witness_c.f.starts, "random starts (4+ users)");
    witness_c.app->add_option("--tolerance", witness_c.f.tolerance, "descent tolerance");
    witness_c.app->add_option("--max-iterations", witness_c.f.max_iterations,
                              "descent sweep limit");

    simulate_c.app = app.add_subcommand("simulate", "run one trajectory, CSV export");
    add_common(simulate_c);
    simulate_c.app->add_option("--horizon", simulate_c.f.horizon, "slots to simulate");
    simulate_c.app->add_option("--init", simulate_c.f.init_text, "initial queue lengths");
    simulate_c.app->add_option("--record-every", simulate_c.f.record_every,
                               "thinning stride for stored rows");
    simulate_c.app->add_option("--out", simulate_c.f.out_path, "trajectory CSV path");

    return_c.app = app.add_subcommand("return-times", "Monte Carlo return-time estimation");
    add_common(return_c);
    return_c.app->add_option("--horizon", return_c.f.horizon, "censoring horizon");
    return_c.app->add_option("--replications", return_c.f.replications, "independent runs");
    return_c.app->add_option("--tail", return_c.f.tail_text, "tail slots k to report");
    return_c.app->add_option("--out", return_c.f.out_path, "tail CSV path");

    lyapunov_c.app = app.add_subcommand("lyapunov", "drift trace of the weighted queue mass");
    add_common(lyapunov_c);
    lyapunov_c.app->add_option("--horizon", lyapunov_c.f.horizon, "trace length in slots");
    lyapunov_c.app->add_option("--replications", lyapunov_c.f.replications, "independent runs");
    lyapunov_c.app->add_option("--out", lyapunov_c.f.out_path, "trace CSV path");

    escape_c.app = app.add_subcommand("escape", "probability of never re-emptying");
    add_common(escape_c);
    escape_c.app->add_option("--horizon", escape_c.f.horizon, "slots per replication");
    escape_c.app->add_option("--replications", escape_c.f.replications, "independent runs");
    escape_c.app->add_option("--init", escape_c.f.init_text, "initial queue lengths");

    oracle_c.app = app.add_subcommand("oracle", "exact truncated-chain return time");
    add_common(oracle_c);
    oracle_c.app->add_option("--truncation", oracle_c.f.truncation, "per-queue cap");
    oracle_c.app->add_option("--export", oracle_c.f.export_path, "sparse triplet dump path");

    scan_c.app = app.add_subcommand("region-scan", "witness search over a rate grid");
    add_common(scan_c);
    scan_c.app->add_option("--grid", scan_c.f.grid_text,
                           "axes 'a,b;c,d' with lo:hi:step ranges");
    scan_c.app->add_flag("--symmetric", scan_c.f.symmetric, "one axis, equal rates");
    scan_c.app->add_option("--dims", scan_c.f.dims, "users for symmetric scans");
    scan_c.app->add_flag("--mc-validate", scan_c.f.mc_validate,
                         "return-time validation near the boundary");
    scan_c.app->add_option("--replications", scan_c.f.replications, "validation runs/point");
    scan_c.app->add_option("--horizon", scan_c.f.horizon, "validation censoring horizon");
    scan_c.app->add_option("--grid-resolution", scan_c.f.grid_resolution,
                           "witness init grid points per axis");
    scan_c.app->add_option("--starts", scan_c.f.starts, "witness random starts");
    scan_c.app->add_option("--tolerance", scan_c.f.tolerance, "witness descent tolerance");
    scan_c.app->add_option("--max-iterations", scan_c.f.max_iterations,
                           "witness descent sweep limit");
    scan_c.app->add_option("--out", scan_c.f.out_path, "sweep table CSV path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (classify_c.app->parsed()) return cmd_classify(classify_c, out);
        if (witness_c.app->parsed()) return cmd_witness(witness_c, out);
        if (simulate_c.app->parsed()) return cmd_simulate(simulate_c, out);
        if (return_c.app->parsed()) return cmd_return_times(return_c, out);
        if (lyapunov_c.app->parsed()) return cmd_lyapunov(lyapunov_c, out);
        if (escape_c.app->parsed()) return cmd_escape(escape_c, out);
        if (oracle_c.app->parsed()) return cmd_oracle(oracle_c, out);
        if (scan_c.app->parsed()) return cmd_region_scan(scan_c, out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace cli

}  // namespace aloha
