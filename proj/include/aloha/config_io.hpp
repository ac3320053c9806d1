#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aloha/chain.hpp"
#include "aloha/region.hpp"

namespace aloha {

struct SweepSpec {
    std::vector<std::vector<double>> axes;  // per-axis lambda values
    bool diagonal = false;                  // one axis applied to every user
    int dims = 0;                           // dimension for diagonal scans
    bool mc_validate = false;
    bool operator==(const SweepSpec&) const = default;
};

// Parsed experiment file. Only `users` and `seed` are universal; the rest
// feed specific subcommands and stay unset unless given.
struct ExperimentConfig {
    std::vector<UserSpec> users;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> replications;
    std::optional<std::vector<std::int64_t>> init;
    std::optional<std::vector<std::uint64_t>> tail_ks;
    std::optional<WitnessOptions> witness;
    std::optional<int> truncation;
    std::optional<SweepSpec> sweep;
    bool operator==(const ExperimentConfig&) const = default;
};

// Strict parse: unknown keys anywhere are SchemaError with the JSON path;
// every distribution is validated here, including the P(X = 1) > 0
// irreducibility hypotheses (ZeroProbOfOne carries the user index).
ExperimentConfig parse_config(const std::string& text);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

std::string serialize_config(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical serialization, as 16 hex digits.
std::string config_digest(const ExperimentConfig& cfg);

NetworkConfig build_network(const ExperimentConfig& cfg);

nlohmann::json spec_to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace aloha
