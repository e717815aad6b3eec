// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/errors.hpp>
#include <staterent/state_trie.hpp>

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

namespace staterent
{
namespace
{
std::string header_line(const Hash256& params_digest)
{
    std::string h{kSnapshotMagic};
    h += ' ';
    h += kSnapshotVersion;
    h += " hash=";
    h += kHashName;
    h += " params=";
    h += to_hex(params_digest);
    return h;
}

std::vector<std::string_view> split_spaces(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = line.find(' ', start);
        if (pos == std::string_view::npos)
        {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Canonical decimal: digits only, no leading zeros.
bool parse_decimal(std::string_view s, std::uint64_t& out)
{
    if (s.empty() || (s.size() > 1 && s[0] == '0'))
        return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

void parse_header(std::string_view line, Hash256& params_digest)
{
    const auto fields = split_spaces(line);
    if (fields.size() != 4 || fields[0] != kSnapshotMagic)
        throw SnapshotError{1, "malformed header"};
    if (fields[1] != kSnapshotVersion)
        throw SnapshotError{1, "unsupported version '" + std::string{fields[1]} + "'"};
    if (!fields[2].starts_with("hash=") || fields[2].substr(5) != kHashName)
        throw SnapshotError{1, "hash mismatch: expected hash=" + std::string{kHashName}};
    if (!fields[3].starts_with("params=") || !hash_from_hex(fields[3].substr(7), params_digest))
        throw SnapshotError{1, "malformed params digest"};
}
}  // namespace

void write_snapshot(const StateTrie& trie, const Hash256& params_digest, std::ostream& out)
{
    out << header_line(params_digest) << '\n';
    trie.for_each_leaf([&](const LeafNode& leaf) {
        out << to_hex(leaf.key.hashed) << ' ' << kind_code(leaf.kind) << ' ' << leaf.rent_paid_ts
            << ' ' << to_hex(leaf.value) << '\n';
    });
}

void write_snapshot(
    const StateTrie& trie, const Hash256& params_digest, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw std::runtime_error{"cannot open " + path.string() + " for writing"};
    write_snapshot(trie, params_digest, out);
    out.flush();
    if (!out)
        throw std::runtime_error{"failed writing " + path.string()};
}

Snapshot read_snapshot(std::istream& in, std::size_t max_value_bytes)
{
    const std::string text{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
    if (text.empty())
        throw SnapshotError{1, "missing header"};

    Snapshot snap{StateTrie{max_value_bytes}, {}};
    std::optional<Hash256> previous;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        ++line_no;
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos)
            throw SnapshotError{line_no, "truncated record (missing newline)"};
        const std::string_view line{text.data() + pos, nl - pos};
        pos = nl + 1;

        if (line_no == 1)
        {
            parse_header(line, snap.params_digest);
            continue;
        }

        const auto fields = split_spaces(line);
        if (fields.size() != 4)
            throw SnapshotError{line_no, "expected 4 space-separated fields"};

        Hash256 hashed;
        if (!hash_from_hex(fields[0], hashed))
            throw SnapshotError{line_no, "malformed hashed key"};
        if (fields[1].size() != 1 || !kind_from_code(fields[1][0]))
            throw SnapshotError{line_no, "unknown node kind '" + std::string{fields[1]} + "'"};
        std::uint64_t ts = 0;
        if (!parse_decimal(fields[2], ts))
            throw SnapshotError{line_no, "malformed timestamp"};
        Bytes value;
        if (!from_hex(fields[3], value))
            throw SnapshotError{line_no, "malformed value hex"};
        if (value.size() > max_value_bytes)
            throw SnapshotError{line_no, "value exceeds maximum size"};

        if (previous)
        {
            if (*previous == hashed)
                throw SnapshotError{line_no, "duplicate key " + std::string{fields[0]}};
            if (hashed < *previous)
                throw SnapshotError{line_no, "records not sorted by hashed key"};
        }
        previous = hashed;
        snap.trie.put(Key::from_hash(hashed), std::move(value), ts, *kind_from_code(fields[1][0]));
    }
    return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path, std::size_t max_value_bytes)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw SnapshotError{0, "cannot open " + path.string()};
    return read_snapshot(in, max_value_bytes);
}
}  // namespace staterent
