// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <staterent/config.hpp>
#include <staterent/metrics.hpp>
#include <staterent/state_trie.hpp>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace staterent
{
struct ScenarioResult
{
    ScenarioMetrics metrics;
    StateTrie trie;
};

/// Runs the workload against a fresh (or snapshot-loaded) trie, one block at a time.
/// `stream_dump`, when set, receives one formatted transaction per line.
ScenarioResult run_scenario(const ScenarioConfig& config, std::ostream* stream_dump = nullptr);

/// Writes metrics in every configured format plus the snapshot, if requested.
/// Returns the paths written.
std::vector<std::filesystem::path> write_outputs(
    const ScenarioConfig& config, const ScenarioResult& result);
}  // namespace staterent
