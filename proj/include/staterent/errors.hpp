// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace staterent
{
/// Value exceeds the configured maximum leaf size.
class SizeError : public std::length_error
{
public:
    using std::length_error::length_error;
};

/// Snapshot could not be loaded. `line()` is 1-based; 0 means the file as a whole.
class SnapshotError : public std::runtime_error
{
public:
    SnapshotError(std::size_t line, const std::string& what)
      : std::runtime_error{"snapshot line " + std::to_string(line) + ": " + what}, line_{line}
    {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid scenario configuration or parameter set.
class ConfigError : public std::invalid_argument
{
public:
    ConfigError(std::string field, const std::string& what, std::size_t line = 0)
      : std::invalid_argument{format(field, what, line)},
        field_{std::move(field)},
        detail_{what},
        line_{line}
    {}

    const std::string& field() const noexcept { return field_; }
    /// The message without field and line decoration.
    const std::string& detail() const noexcept { return detail_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& field, const std::string& what, std::size_t line)
    {
        std::string msg = line != 0 ? "line " + std::to_string(line) + ": " : std::string{};
        if (!field.empty())
            msg += field + ": ";
        return msg + what;
    }

    std::string field_;
    std::string detail_;
    std::size_t line_;
};

/// Transaction ops are not properly nested or violate gas budget rules.
class StructureError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// API used out of order (e.g. finalizing metrics twice).
class UsageError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};
}  // namespace staterent
