#include "aloha/config_io.hpp"

#include <limits>

#include "aloha/errors.hpp"

namespace aloha {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) throw SchemaError(path + "." + item.key(), "unknown key");
    }
}

double get_number(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw SchemaError(path + "." + key, "missing");
    if (!j[key].is_number()) throw SchemaError(path + "." + key, "expected a number");
    return j[key].get<double>();
}

std::uint64_t get_uint(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw SchemaError(path + "." + key, "missing");
    if (!j[key].is_number_unsigned())
        throw SchemaError(path + "." + key, "expected a nonnegative integer");
    return j[key].get<std::uint64_t>();
}

}  // namespace

nlohmann::json spec_to_json(const DistributionSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    switch (spec.kind) {
        case DistKind::Bernoulli:
        case DistKind::Geometric:
            j["p"] = spec.p;
            break;
        case DistKind::Poisson:
            j["mu"] = spec.mu;
            break;
        case DistKind::FinitePmf:
            j["pmf"] = spec.pmf;
            break;
    }
    return j;
}

DistributionSpec spec_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw SchemaError(path + ".kind", "missing or not a string");
    const std::string kind = j["kind"].get<std::string>();
    DistributionSpec spec;
    if (kind == "bernoulli") {
        require_keys(j, path, {"kind", "p"});
        spec = DistributionSpec::bernoulli(get_number(j, path, "p"));
    } else if (kind == "finite_pmf") {
        require_keys(j, path, {"kind", "pmf"});
        if (!j.contains("pmf") || !j["pmf"].is_array())
            throw SchemaError(path + ".pmf", "expected an array of probabilities");
        std::vector<double> pmf;
        for (std::size_t i = 0; i < j["pmf"].size(); ++i) {
            if (!j["pmf"][i].is_number())
                throw SchemaError(path + ".pmf[" + std::to_string(i) + "]",
                                  "expected a number");
            pmf.push_back(j["pmf"][i].get<double>());
        }
        spec = DistributionSpec::finite_pmf(std::move(pmf));
    } else if (kind == "poisson") {
        require_keys(j, path, {"kind", "mu"});
        spec = DistributionSpec::poisson(get_number(j, path, "mu"));
    } else if (kind == "geometric") {
        require_keys(j, path, {"kind", "p"});
        spec = DistributionSpec::geometric(get_number(j, path, "p"));
    } else {
        throw SchemaError(path + ".kind", "unknown distribution kind '" + kind + "'");
    }
    // surface parameter/pmf problems with their location
    try {
        make_distribution(spec);
    } catch (const ValidationError& e) {
        throw SchemaError(path, e.what());
    }
    return spec;
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", e.what());
    }
    if (!j.is_object()) throw SchemaError("$", "config must be a JSON object");
    require_keys(j, "$",
                 {"users", "seed", "horizon", "replications", "init", "tail_ks", "witness",
                  "truncation", "sweep"});

    ExperimentConfig cfg;
    if (j.contains("users")) {
        if (!j["users"].is_array()) throw SchemaError("$.users", "expected an array");
        for (std::size_t i = 0; i < j["users"].size(); ++i) {
            const std::string path = "$.users[" + std::to_string(i) + "]";
            const json& u = j["users"][i];
            if (!u.is_object()) throw SchemaError(path, "expected an object");
            require_keys(u, path, {"arrival", "window"});
            if (!u.contains("arrival")) throw SchemaError(path + ".arrival", "missing");
            if (!u.contains("window")) throw SchemaError(path + ".window", "missing");
            UserSpec spec;
            spec.arrival = spec_from_json(u["arrival"], path + ".arrival");
            spec.window = spec_from_json(u["window"], path + ".window");
            // irreducibility hypotheses, checked at parse time
            if (!make_distribution(spec.arrival).has_mass_at_one())
                throw ZeroProbOfOne("arrival law of user " + std::to_string(i) +
                                        " has P(A = 1) = 0",
                                    static_cast<int>(i));
            if (!make_distribution(spec.window).has_mass_at_one())
                throw ZeroProbOfOne("window law of user " + std::to_string(i) +
                                        " has P(W = 1) = 0",
                                    static_cast<int>(i));
            cfg.users.push_back(std::move(spec));
        }
    }
    if (j.contains("seed")) cfg.seed = get_uint(j, "$", "seed");
    if (j.contains("horizon")) cfg.horizon = get_uint(j, "$", "horizon");
    if (j.contains("replications")) cfg.replications = get_uint(j, "$", "replications");
    if (j.contains("init")) {
        if (!j["init"].is_array()) throw SchemaError("$.init", "expected an array");
        std::vector<std::int64_t> init;
        for (std::size_t i = 0; i < j["init"].size(); ++i) {
            if (!j["init"][i].is_number_integer() || j["init"][i].get<std::int64_t>() < 0)
                throw SchemaError("$.init[" + std::to_string(i) + "]",
                                  "expected a nonnegative integer");
            init.push_back(j["init"][i].get<std::int64_t>());
        }
        cfg.init = std::move(init);
    }
    if (j.contains("tail_ks")) {
        if (!j["tail_ks"].is_array()) throw SchemaError("$.tail_ks", "expected an array");
        std::vector<std::uint64_t> ks;
        for (std::size_t i = 0; i < j["tail_ks"].size(); ++i) {
            if (!j["tail_ks"][i].is_number_unsigned())
                throw SchemaError("$.tail_ks[" + std::to_string(i) + "]",
                                  "expected a nonnegative integer");
            ks.push_back(j["tail_ks"][i].get<std::uint64_t>());
        }
        cfg.tail_ks = std::move(ks);
    }
    if (j.contains("witness")) {
        const json& w = j["witness"];
        if (!w.is_object()) throw SchemaError("$.witness", "expected an object");
        require_keys(w, "$.witness",
                     {"grid_resolution", "random_starts", "tolerance", "max_iterations",
                      "seed"});
        WitnessOptions opts;
        if (w.contains("grid_resolution"))
            opts.grid_resolution = static_cast<int>(get_uint(w, "$.witness", "grid_resolution"));
        if (w.contains("random_starts"))
            opts.random_starts = static_cast<int>(get_uint(w, "$.witness", "random_starts"));
        if (w.contains("tolerance")) opts.tolerance = get_number(w, "$.witness", "tolerance");
        if (w.contains("max_iterations"))
            opts.max_iterations = static_cast<int>(get_uint(w, "$.witness", "max_iterations"));
        if (w.contains("seed")) opts.seed = get_uint(w, "$.witness", "seed");
        cfg.witness = opts;
    }
    if (j.contains("truncation")) {
        cfg.truncation = static_cast<int>(get_uint(j, "$", "truncation"));
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) throw SchemaError("$.sweep", "expected an object");
        require_keys(s, "$.sweep", {"axes", "diagonal", "dims", "mc_validate"});
        SweepSpec sweep;
        if (!s.contains("axes") || !s["axes"].is_array())
            throw SchemaError("$.sweep.axes", "expected an array of arrays");
        for (std::size_t a = 0; a < s["axes"].size(); ++a) {
            const std::string path = "$.sweep.axes[" + std::to_string(a) + "]";
            if (!s["axes"][a].is_array()) throw SchemaError(path, "expected an array");
            std::vector<double> axis;
            for (std::size_t i = 0; i < s["axes"][a].size(); ++i) {
                if (!s["axes"][a][i].is_number())
                    throw SchemaError(path + "[" + std::to_string(i) + "]",
                                      "expected a number");
                axis.push_back(s["axes"][a][i].get<double>());
            }
            sweep.axes.push_back(std::move(axis));
        }
        if (s.contains("diagonal")) {
            if (!s["diagonal"].is_boolean())
                throw SchemaError("$.sweep.diagonal", "expected a boolean");
            sweep.diagonal = s["diagonal"].get<bool>();
        }
        if (s.contains("dims")) sweep.dims = static_cast<int>(get_uint(s, "$.sweep", "dims"));
        if (s.contains("mc_validate")) {
            if (!s["mc_validate"].is_boolean())
                throw SchemaError("$.sweep.mc_validate", "expected a boolean");
            sweep.mc_validate = s["mc_validate"].get<bool>();
        }
        cfg.sweep = std::move(sweep);
    }
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    json j;
    if (!cfg.users.empty()) {
        json users = json::array();
        for (const auto& u : cfg.users) {
            json ju;
            ju["arrival"] = spec_to_json(u.arrival);
            ju["window"] = spec_to_json(u.window);
            users.push_back(std::move(ju));
        }
        j["users"] = std::move(users);
    }
    j["seed"] = cfg.seed;
    if (cfg.horizon) j["horizon"] = *cfg.horizon;
    if (cfg.replications) j["replications"] = *cfg.replications;
    if (cfg.init) j["init"] = *cfg.init;
    if (cfg.tail_ks) j["tail_ks"] = *cfg.tail_ks;
    if (cfg.witness) {
        json w;
        w["grid_resolution"] = static_cast<std::uint64_t>(cfg.witness->grid_resolution);
        w["random_starts"] = static_cast<std::uint64_t>(cfg.witness->random_starts);
        w["tolerance"] = cfg.witness->tolerance;
        w["max_iterations"] = static_cast<std::uint64_t>(cfg.witness->max_iterations);
        w["seed"] = cfg.witness->seed;
        j["witness"] = std::move(w);
    }
    if (cfg.truncation) j["truncation"] = static_cast<std::uint64_t>(*cfg.truncation);
    if (cfg.sweep) {
        json s;
        s["axes"] = cfg.sweep->axes;
        if (cfg.sweep->diagonal) s["diagonal"] = true;
        if (cfg.sweep->dims != 0) s["dims"] = static_cast<std::uint64_t>(cfg.sweep->dims);
        if (cfg.sweep->mc_validate) s["mc_validate"] = true;
        j["sweep"] = std::move(s);
    }
    return j;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    // nlohmann objects keep keys sorted, so dump() is canonical
    return config_to_json(cfg).dump();
}

std::string config_digest(const ExperimentConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

NetworkConfig build_network(const ExperimentConfig& cfg) {
    if (cfg.users.empty()) throw InvalidSpec("config has no users");
    return NetworkConfig(cfg.users);
}

}  // namespace aloha
