// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <staterent/cache_sim.hpp>
#include <staterent/metrics.hpp>
#include <staterent/rent.hpp>
#include <staterent/workload.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace staterent
{
struct OutputSpec
{
    std::vector<MetricsFormat> formats{MetricsFormat::csv, MetricsFormat::json};
    std::filesystem::path dir{"."};
    /// Files are written as <dir>/<prefix>.csv and <dir>/<prefix>.json.
    std::string prefix{"metrics"};
    /// Also write <dir>/<prefix>.stream.txt with one transaction per line.
    bool dump_stream = false;
};

struct ScenarioConfig
{
    RentParams rent;
    WorkloadSpec workload;
    TierPolicy cache;
    OutputSpec output;
    /// Start from this snapshot instead of the workload's genesis state.
    std::optional<std::filesystem::path> snapshot_in;
    /// Relative paths are resolved under output.dir.
    std::optional<std::filesystem::path> snapshot_out;

    /// Throws ConfigError.
    void validate() const;
};

/// Parses the YAML scenario format. Unknown keys and missing required
/// fields raise ConfigError carrying the field path and source line.
/// `base_dir` resolves a relative snapshot_in.
ScenarioConfig parse_config(std::string_view yaml_text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fixed-order `key=value` rendering of every field that affects results
/// (rent, workload, cache). Output locations are excluded.
std::string canonical_config(const ScenarioConfig& config);
Hash256 params_digest(const ScenarioConfig& config);

/// Parses "a/b" or a bare integer.
Rational parse_rational(std::string_view text, const std::string& field);
}  // namespace staterent
