// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/config.hpp>
#include <staterent/errors.hpp>

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace staterent
{
namespace
{
std::size_t line_of(const YAML::Node& node)
{
    const auto mark = node.Mark();
    return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

void require_map(const YAML::Node& node, const std::string& path)
{
    if (!node.IsMap())
        throw ConfigError{path, "expected a mapping", line_of(node)};
}

void check_keys(
    const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed)
{
    for (const auto& kv : node)
    {
        const auto key = kv.first.as<std::string>();
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError{join(path, key), "unknown key", line_of(kv.first)};
    }
}

std::string scalar(const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar())
        throw ConfigError{field, "expected a scalar value", line_of(node)};
    return node.Scalar();
}

std::uint64_t parse_u64(const YAML::Node& node, const std::string& field)
{
    const auto text = scalar(node, field);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError{field, "expected a non-negative integer, got '" + text + "'", line_of(node)};
    return v;
}

double parse_double(const YAML::Node& node, const std::string& field)
{
    const auto text = scalar(node, field);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
        throw ConfigError{field, "expected a number, got '" + text + "'", line_of(node)};
    return v;
}

bool parse_bool(const YAML::Node& node, const std::string& field)
{
    const auto text = scalar(node, field);
    if (text == "true")
        return true;
    if (text == "false")
        return false;
    throw ConfigError{field, "expected true or false, got '" + text + "'", line_of(node)};
}

Rational parse_rational_node(const YAML::Node& node, const std::string& field)
{
    try
    {
        return parse_rational(scalar(node, field), field);
    }
    catch (const ConfigError& e)
    {
        throw ConfigError{field, e.detail(), line_of(node)};
    }
}

template <typename Fn>
void with(const YAML::Node& map, const std::string& path, const char* key, Fn&& fn)
{
    if (const auto node = map[key])
        fn(node, join(path, key));
}

void parse_rent(const YAML::Node& node, RentParams& rent)
{
    const std::string path = "rent";
    require_map(node, path);
    check_keys(node, path,
        {"rate_denominator_log2", "storage_overhead_bytes", "read_threshold_gas",
            "write_threshold_gas", "cap_gas_per_node", "missing_key_penalty_gas",
            "revert_fraction", "accrual_horizon_seconds", "holidays"});
    with(node, path, "rate_denominator_log2", [&](const auto& n, const auto& f) {
        const auto v = parse_u64(n, f);
        if (v > 63)
            throw ConfigError{f, "must be at most 63", line_of(n)};
        rent.rate_denominator_log2 = static_cast<unsigned>(v);
    });
    with(node, path, "storage_overhead_bytes",
        [&](const auto& n, const auto& f) { rent.storage_overhead_bytes = parse_u64(n, f); });
    with(node, path, "read_threshold_gas",
        [&](const auto& n, const auto& f) { rent.read_threshold_gas = parse_u64(n, f); });
    with(node, path, "write_threshold_gas",
        [&](const auto& n, const auto& f) { rent.write_threshold_gas = parse_u64(n, f); });
    with(node, path, "cap_gas_per_node",
        [&](const auto& n, const auto& f) { rent.cap_gas_per_node = parse_u64(n, f); });
    with(node, path, "missing_key_penalty_gas",
        [&](const auto& n, const auto& f) { rent.missing_key_penalty_gas = parse_u64(n, f); });
    with(node, path, "revert_fraction",
        [&](const auto& n, const auto& f) { rent.revert_fraction = parse_rational_node(n, f); });
    with(node, path, "accrual_horizon_seconds", [&](const auto& n, const auto& f) {
        if (n.IsScalar() && n.Scalar() == "disabled")
            rent.accrual_horizon_seconds.reset();
        else
            rent.accrual_horizon_seconds = parse_u64(n, f);
    });
    with(node, path, "holidays", [&](const YAML::Node& list, const std::string& f) {
        if (!list.IsSequence())
            throw ConfigError{f, "expected a list", line_of(list)};
        for (std::size_t i = 0; i < list.size(); ++i)
        {
            const auto h = list[i];
            const auto hp = f + "[" + std::to_string(i) + "]";
            require_map(h, hp);
            check_keys(h, hp, {"start", "end", "mode", "discount"});
            HolidayWindow w;
            for (const char* required : {"start", "end", "mode"})
                if (!h[required])
                    throw ConfigError{join(hp, required), "missing required field", line_of(h)};
            w.start_ts = parse_u64(h["start"], join(hp, "start"));
            w.end_ts = parse_u64(h["end"], join(hp, "end"));
            const auto mode = scalar(h["mode"], join(hp, "mode"));
            if (mode == "pause")
                w.mode = HolidayMode::pause;
            else if (mode == "discount")
            {
                w.mode = HolidayMode::discount;
                if (!h["discount"])
                    throw ConfigError{join(hp, "discount"), "missing required field", line_of(h)};
                w.discount = parse_rational_node(h["discount"], join(hp, "discount"));
            }
            else
                throw ConfigError{join(hp, "mode"), "expected pause or discount", line_of(h["mode"])};
            rent.holidays.push_back(w);
        }
    });
}

void parse_workload(const YAML::Node& node, WorkloadSpec& w)
{
    const std::string path = "workload";
    require_map(node, path);
    check_keys(node, path,
        {"kind", "seed", "n_accounts", "n_txs", "txs_per_block", "skew", "block_interval_seconds",
            "genesis_timestamp", "start_offset_seconds", "dormancy_seconds",
            "cells_per_contract", "keys_per_tx", "gas_limit", "exec_gas"});
    for (const char* required : {"kind", "n_txs"})
        if (!node[required])
            throw ConfigError{join(path, required), "missing required field", line_of(node)};

    const auto kind_node = node["kind"];
    try
    {
        w.kind = parse_workload_kind(scalar(kind_node, "workload.kind"));
    }
    catch (const ConfigError& e)
    {
        throw ConfigError{"workload.kind", e.detail(), line_of(kind_node)};
    }

    const std::pair<const char*, std::uint64_t*> ints[] = {
        {"seed", &w.seed},
        {"n_accounts", &w.n_accounts},
        {"n_txs", &w.n_txs},
        {"txs_per_block", &w.txs_per_block},
        {"block_interval_seconds", &w.block_interval_seconds},
        {"genesis_timestamp", &w.genesis_timestamp},
        {"start_offset_seconds", &w.start_offset_seconds},
        {"dormancy_seconds", &w.dormancy_seconds},
        {"cells_per_contract", &w.cells_per_contract},
        {"keys_per_tx", &w.keys_per_tx},
        {"gas_limit", &w.gas_limit},
        {"exec_gas", &w.exec_gas},
    };
    for (const auto& [key, target] : ints)
        with(node, path, key, [&](const auto& n, const auto& f) { *target = parse_u64(n, f); });
    with(node, path, "skew", [&](const auto& n, const auto& f) { w.skew = parse_double(n, f); });
}

std::vector<std::uint64_t> parse_u64_list(const YAML::Node& node, const std::string& field)
{
    if (!node.IsSequence())
        throw ConfigError{field, "expected a list", line_of(node)};
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < node.size(); ++i)
        out.push_back(parse_u64(node[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

void parse_cache(const YAML::Node& node, TierPolicy& cache)
{
    const std::string path = "cache";
    require_map(node, path);
    check_keys(node, path, {"boundaries", "costs"});
    with(node, path, "boundaries",
        [&](const auto& n, const auto& f) { cache.boundaries = parse_u64_list(n, f); });
    with(node, path, "costs",
        [&](const auto& n, const auto& f) { cache.costs = parse_u64_list(n, f); });
}

void parse_output(const YAML::Node& node, OutputSpec& out)
{
    const std::string path = "output";
    require_map(node, path);
    check_keys(node, path, {"formats", "dir", "prefix", "dump_stream"});
    with(node, path, "formats", [&](const YAML::Node& list, const std::string& f) {
        if (!list.IsSequence())
            throw ConfigError{f, "expected a list", line_of(list)};
        out.formats.clear();
        for (std::size_t i = 0; i < list.size(); ++i)
        {
            const auto name = scalar(list[i], f);
            if (name == "csv")
                out.formats.push_back(MetricsFormat::csv);
            else if (name == "json")
                out.formats.push_back(MetricsFormat::json);
            else
                throw ConfigError{f, "unknown format '" + name + "'", line_of(list[i])};
        }
    });
    with(node, path, "dir", [&](const auto& n, const auto& f) { out.dir = scalar(n, f); });
    with(node, path, "prefix", [&](const auto& n, const auto& f) { out.prefix = scalar(n, f); });
    with(node, path, "dump_stream",
        [&](const auto& n, const auto& f) { out.dump_stream = parse_bool(n, f); });
}

/// Line of the deepest node along a dotted field path such as "rent.cap_gas_per_node".
std::size_t line_of_field(const YAML::Node& root, const std::string& field)
{
    YAML::Node node = root;
    std::size_t line = line_of(root);
    std::size_t start = 0;
    while (start <= field.size())
    {
        auto dot = field.find('.', start);
        if (dot == std::string::npos)
            dot = field.size();
        auto part = field.substr(start, dot - start);
        if (const auto bracket = part.find('['); bracket != std::string::npos)
            part.resize(bracket);
        if (!node.IsMap() || !node[part])
            break;
        node = node[part];
        line = line_of(node);
        start = dot + 1;
    }
    return line;
}

template <typename Fn>
void with_field_line(const YAML::Node& root, Fn&& fn)
{
    try
    {
        fn();
    }
    catch (const ConfigError& e)
    {
        if (e.line() != 0)
            throw;
        throw ConfigError{e.field(), e.detail(), line_of_field(root, e.field())};
    }
}
}  // namespace

Rational parse_rational(std::string_view text, const std::string& field)
{
    Rational r;
    const auto slash = text.find('/');
    const auto num_text = text.substr(0, slash);
    const auto den_text = slash == std::string_view::npos ? std::string_view{"1"} :
                                                            text.substr(slash + 1);
    const auto parse = [&](std::string_view s, std::uint64_t& v) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
    };
    if (!parse(num_text, r.num) || !parse(den_text, r.den) || r.den == 0)
        throw ConfigError{field, "expected a fraction like 1/4, got '" + std::string{text} + "'"};
    return r;
}

void ScenarioConfig::validate() const
{
    rent.validate();
    workload.validate();
    cache.validate();
    if (output.formats.empty())
        throw ConfigError{"output.formats", "at least one format is required"};
    if (output.prefix.empty())
        throw ConfigError{"output.prefix", "must not be empty"};
}

ScenarioConfig parse_config(std::string_view yaml_text, const std::filesystem::path& base_dir)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(std::string{yaml_text});
    }
    catch (const YAML::ParserException& e)
    {
        throw ConfigError{"", e.msg, static_cast<std::size_t>(e.mark.line) + 1};
    }
    if (!root.IsMap())
        throw ConfigError{"", "config must be a mapping", line_of(root)};
    check_keys(root, "", {"rent", "workload", "cache", "output", "snapshot_in", "snapshot_out"});

    ScenarioConfig cfg;
    if (!root["workload"])
        throw ConfigError{"workload", "missing required field", 1};
    if (const auto n = root["rent"])
        parse_rent(n, cfg.rent);
    parse_workload(root["workload"], cfg.workload);
    if (const auto n = root["cache"])
        parse_cache(n, cfg.cache);
    if (const auto n = root["output"])
        parse_output(n, cfg.output);
    if (const auto n = root["snapshot_in"])
    {
        std::filesystem::path p = scalar(n, "snapshot_in");
        cfg.snapshot_in = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (const auto n = root["snapshot_out"])
        cfg.snapshot_out = std::filesystem::path{scalar(n, "snapshot_out")};

    with_field_line(root, [&] { cfg.validate(); });
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw ConfigError{"", "cannot read config file " + path.string()};
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

std::string canonical_config(const ScenarioConfig& c)
{
    std::ostringstream out;
    const auto& r = c.rent;
    out << "rent.rate_denominator_log2=" << r.rate_denominator_log2 << '\n'
        << "rent.storage_overhead_bytes=" << r.storage_overhead_bytes << '\n'
        << "rent.read_threshold_gas=" << r.read_threshold_gas << '\n'
        << "rent.write_threshold_gas=" << r.write_threshold_gas << '\n'
        << "rent.cap_gas_per_node=" << r.cap_gas_per_node << '\n'
        << "rent.missing_key_penalty_gas=" << missing_key_penalty(r) << '\n'
        << "rent.revert_fraction=" << r.revert_fraction.to_string() << '\n'
        << "rent.accrual_horizon_seconds="
        << (r.accrual_horizon_seconds ? std::to_string(*r.accrual_horizon_seconds) : "disabled")
        << '\n'
        << "rent.seconds_per_year=" << r.seconds_per_year << '\n';
    auto holidays = r.holidays;
    std::sort(holidays.begin(), holidays.end(),
        [](const auto& a, const auto& b) { return a.start_ts < b.start_ts; });
    for (std::size_t i = 0; i < holidays.size(); ++i)
    {
        const auto& h = holidays[i];
        out << "rent.holidays[" << i << "]=" << h.start_ts << ',' << h.end_ts << ','
            << (h.mode == HolidayMode::pause ? "pause" : "discount:" + h.discount.to_string())
            << '\n';
    }

    const auto& w = c.workload;
    char skew[64];
    std::snprintf(skew, sizeof skew, "%.17g", w.skew);
    out << "workload.kind=" << workload_kind_name(w.kind) << '\n'
        << "workload.seed=" << w.seed << '\n'
        << "workload.rng=" << kRngName << '\n'
        << "workload.n_accounts=" << w.n_accounts << '\n'
        << "workload.n_txs=" << w.n_txs << '\n'
        << "workload.txs_per_block=" << w.txs_per_block << '\n'
        << "workload.skew=" << skew << '\n'
        << "workload.block_interval_seconds=" << w.block_interval_seconds << '\n'
        << "workload.genesis_timestamp=" << w.genesis_timestamp << '\n'
        << "workload.start_offset_seconds=" << w.start_offset_seconds << '\n'
        << "workload.dormancy_seconds=" << w.dormancy_seconds << '\n'
        << "workload.cells_per_contract=" << w.cells_per_contract << '\n'
        << "workload.keys_per_tx=" << w.keys_per_tx << '\n'
        << "workload.gas_limit=" << w.gas_limit << '\n'
        << "workload.exec_gas=" << w.exec_gas << '\n';

    out << "cache.boundaries=";
    for (std::size_t i = 0; i < c.cache.boundaries.size(); ++i)
        out << (i ? "," : "") << c.cache.boundaries[i];
    out << "\ncache.costs=";
    for (std::size_t i = 0; i < c.cache.costs.size(); ++i)
        out << (i ? "," : "") << c.cache.costs[i];
    out << '\n';
    return out.str();
}

Hash256 params_digest(const ScenarioConfig& config)
{
    return hash256(std::string_view{canonical_config(config)});
}
}  // namespace staterent
